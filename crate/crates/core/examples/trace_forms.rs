//! Trace forms of K[x]/(f), multiquadratic extensions and the M(16) Kummer
//! tower.

use traceforms::field::Field;
use traceforms::form::{
    diagonalize, trace_form_from_poly, trace_form_kummer_tower, trace_form_multiquadratic, witt_decompose, Polynomial,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let q = Field::rationals();
    let poly = Polynomial::parse(&q, "x^4 - 4x^2 + 2")?;
    let gram = trace_form_from_poly(&q, &poly)?;
    for row in gram.format_rows() {
        println!("  {row}");
    }
    let (d, _) = diagonalize(&gram)?;
    println!("Q[x]/(x^4 - 4x^2 + 2): {} -> {}", d.format(), witt_decompose(&d)?.format());

    let f = Field::gf(5, 1)?.laurent(["X"])?;
    let mq = trace_form_multiquadratic(&f, &[f.from_int(2), f.var(0)])?;
    println!("{f}(√2, √X): {} -> {}", mq.format(), witt_decompose(&mq)?.format());

    let k = trace_form_kummer_tower(&f, 4, &f.var(0))?;
    let (d, _) = diagonalize(&k)?;
    let c = witt_decompose(&d)?;
    println!("M(16) extension: dimension {}, class {}, Witt index {}", k.dim(), c.format(), c.witt_index);
    Ok(())
}
