//! Eigenspace splitting of random order-4 isometries over GF(13).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use traceforms::field::Field;
use traceforms::form::{random_orthogonal_action, serre_decompose};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f = Field::gf(13, 1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for dim in [2, 4, 6, 8] {
        let (g, m) = random_orthogonal_action(&f, dim, &mut rng)?;
        let d = serre_decompose(&g, &m)?;
        println!("dim {dim}: eigenspace dims [1, -1, ζ, -ζ] = {:?}, V0 hyperbolic: {}", d.dims(), d.v0_hyperbolic);
    }
    Ok(())
}
