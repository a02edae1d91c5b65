//! Diagonalization and Witt classes over Q, a finite field and a Laurent
//! tower.

use num_bigint::BigInt;
use traceforms::field::Field;
use traceforms::form::hilbert::{hilbert_symbol, Place};
use traceforms::form::{diagonalize, pfister, witt_decompose, witt_equivalent, GramMatrix, PfisterSign, QForm};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let q = Field::rationals();
    let g = GramMatrix::from_ints(&q, &[&[0, 1, 2], &[1, 0, 3], &[2, 3, 1]])?;
    let (d, _) = diagonalize(&g)?;
    let c = witt_decompose(&d)?;
    println!("over Q: {} has class {} (invariants {:?})", d.format(), c.format(), c.invariants);
    let h = hilbert_symbol(&BigInt::from(3), &BigInt::from(7), &Place::Prime(BigInt::from(2)));
    println!("(3, 7)_2 = {h}");

    let f13 = Field::gf(13, 1)?;
    let a = QForm::from_ints(&f13, &[1, 2, 5])?;
    let b = QForm::from_ints(&f13, &[10])?;
    println!("over GF(13): {} ~ {}: {}", a.format(), b.format(), witt_equivalent(&a, &b)?);

    let f = Field::gf(5, 1)?.laurent(["X", "Y"])?;
    let p = pfister(&f, &[f.var(0), f.var(1), f.from_int(2)], PfisterSign::Minus)?;
    let c = witt_decompose(&p)?;
    println!("over {f}: 3-fold Pfister form has anisotropic dimension {}", c.anisotropic_dim());
    Ok(())
}
