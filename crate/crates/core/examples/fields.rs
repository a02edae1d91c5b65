//! Arithmetic in GF(25)((X)), square classes and roots of unity.

use traceforms::field::{find_dirichlet_prime, q_for_s, Field};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f = Field::gf(5, 2)?.laurent(["X"])?;
    let x = f.var(0);
    let z = f.zeta(3).expect("GF(25) contains the 8th roots of unity");
    let y = f.add(&f.mul(&z, &x), &f.one());
    println!("in {f}: y = {}", f.format(&y));
    let m = f.mul(&z, &x);
    println!("(ζ_8 X)^-1 = {}", f.format(&f.inv(&m)?));
    // only monomials are invertible among Laurent polynomials
    println!("y invertible here: {}", f.inv(&y).is_ok());
    println!("max 2-power root of unity: 2^{}", f.max_two_power_root());
    let reps: Vec<String> = f.square_class_reps()?.iter().map(|r| f.format(r)).collect();
    println!("square classes: {}", reps.join(", "));
    println!("X·ζ_8 is a square: {}", f.is_square(&f.mul(&x, &z))?);
    for s in 2..=4 {
        println!("s = {s}: prime {}, q = {}", find_dirichlet_prime(s, 1 << 20)?, q_for_s(s)?);
    }
    Ok(())
}
