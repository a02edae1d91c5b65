//! Eigenspace decomposition of a quadratic space under an isometry of order
//! dividing 4.

use rand::Rng;
use serde_json::{json, Value};

use crate::field::{Field, FieldElement};

use super::matrix::{self, Matrix};
use super::witt::witt_decompose;
use super::{diagonalize, FormError, GramMatrix};

#[derive(Clone, Debug)]
pub struct SerreDecomposition {
    /// Eigenvalues `1, -1, ζ, -ζ` with the basis of each eigenspace.
    pub spaces: [(FieldElement, Vec<Vec<FieldElement>>); 4],
    pub v0_hyperbolic: bool,
}

impl SerreDecomposition {
    pub fn dims(&self) -> [usize; 4] {
        [0, 1, 2, 3].map(|i| self.spaces[i].1.len())
    }

    pub fn to_json(&self, f: &Field) -> Value {
        let names = ["1", "-1", "zeta", "-zeta"];
        let spaces: Vec<Value> = self
            .spaces
            .iter()
            .zip(names)
            .map(|((lam, basis), name)| {
                let b: Vec<Value> =
                    basis.iter().map(|v| Value::Array(v.iter().map(|x| f.to_json(x)).collect())).collect();
                json!({"eigenvalue": name, "value": f.to_json(lam), "basis": b})
            })
            .collect();
        json!({"spaces": spaces, "dims": self.dims(), "v0_hyperbolic": self.v0_hyperbolic})
    }
}

/// Splits `(V, g)` into the eigenspaces of `m` (acting on column vectors),
/// checking that `B(x, y) = 0` whenever the eigenvalues of `x` and `y`
/// multiply to something other than 1, and that `V_ζ ⊕ V_{-ζ}` is hyperbolic.
pub fn serre_decompose(g: &GramMatrix, m: &Matrix) -> Result<SerreDecomposition, FormError> {
    let f = &g.field;
    let n = g.dim();
    let zeta = f.zeta(2).ok_or_else(|| FormError::Precondition(format!("{f} has no primitive 4th root of unity")))?;
    if m.len() != n || !matrix::is_square_shape(m) {
        return Err(FormError::Shape("action must be a square matrix of the form's size".into()));
    }
    if !g.is_nondegenerate() {
        return Err(FormError::Singular);
    }
    let mt = matrix::transpose(m);
    if matrix::mul(f, &matrix::mul(f, &mt, &g.entries), m) != g.entries {
        return Err(FormError::Precondition("action does not preserve the form".into()));
    }
    if matrix::pow(f, m, 4) != matrix::identity(f, n) {
        return Err(FormError::Precondition("action does not have order dividing 4".into()));
    }
    let one = f.one();
    let lams = [one.clone(), f.neg(&one), zeta.clone(), f.neg(&zeta)];
    let spaces = lams.clone().map(|lam| {
        let shifted = matrix::sub(f, m, &matrix::scalar_diag(f, n, &lam));
        let basis = matrix::kernel(f, &shifted, n);
        (lam, basis)
    });
    let total: usize = spaces.iter().map(|(_, b)| b.len()).sum();
    assert_eq!(total, n, "x^4 - 1 splits with distinct roots, so the action is diagonalizable");
    for (lam, bl) in &spaces {
        for (mu, bm) in &spaces {
            if f.is_one(&f.mul(lam, mu)) {
                continue;
            }
            for x in bl {
                for y in bm {
                    assert!(
                        f.is_zero(&matrix::bilinear(f, &g.entries, x, y)),
                        "eigenvectors for {} and {} must be orthogonal",
                        f.format(lam),
                        f.format(mu)
                    );
                }
            }
        }
    }
    let v0: Vec<Vec<FieldElement>> = spaces[2].1.iter().chain(&spaces[3].1).cloned().collect();
    let v0_hyperbolic = if v0.is_empty() {
        true
    } else {
        let (q, _) = diagonalize(&g.restrict(&v0))?;
        witt_decompose(&q)?.is_hyperbolic()
    };
    Ok(SerreDecomposition { spaces, v0_hyperbolic })
}

fn random_element<R: Rng>(f: &Field, rng: &mut R, nonzero: bool) -> FieldElement {
    let q = f.gf_context().expect("finite field").q();
    FieldElement::Gf(rng.gen_range(u32::from(nonzero)..q))
}

/// A random isometry of order dividing 4 of a random nondegenerate form of
/// dimension `dim` over GF(q) containing `ζ_4`: a block model (±1 lines,
/// `diag(ζ, -ζ)` on hyperbolic planes, the rotation `[[0,-1],[1,0]]` on
/// `⟨c, c⟩`, and cyclic shifts on `c·I_4`) conjugated by a random invertible
/// matrix.
pub fn random_orthogonal_action<R: Rng>(f: &Field, dim: usize, rng: &mut R) -> Result<(GramMatrix, Matrix), FormError> {
    let zeta = f.zeta(2).ok_or_else(|| FormError::Precondition(format!("{f} has no primitive 4th root of unity")))?;
    if f.depth() > 0 || f.gf_context().is_none() {
        return Err(FormError::Unsupported("random actions are generated over finite fields".into()));
    }
    let mut g0 = matrix::zeros(f, dim, dim);
    let mut m0 = matrix::zeros(f, dim, dim);
    let mut i = 0;
    while i < dim {
        let left = dim - i;
        let kind = rng.gen_range(0..4).min(if left >= 4 { 3 } else if left >= 2 { 2 } else { 0 });
        let c = random_element(f, rng, true);
        match kind {
            0 => {
                g0[i][i] = c;
                m0[i][i] = if rng.gen_bool(0.5) { f.one() } else { f.from_int(-1) };
                i += 1;
            }
            1 => {
                g0[i][i + 1] = c.clone();
                g0[i + 1][i] = c;
                m0[i][i] = zeta.clone();
                m0[i + 1][i + 1] = f.neg(&zeta);
                i += 2;
            }
            2 => {
                g0[i][i] = c.clone();
                g0[i + 1][i + 1] = c;
                m0[i][i + 1] = f.from_int(-1);
                m0[i + 1][i] = f.one();
                i += 2;
            }
            _ => {
                for k in 0..4 {
                    g0[i + k][i + k] = c.clone();
                    m0[i + (k + 1) % 4][i + k] = f.one();
                }
                i += 4;
            }
        }
    }
    let p = loop {
        let cand: Matrix = (0..dim)
            .map(|_| (0..dim).map(|_| random_element(f, rng, false)).collect())
            .collect();
        if let Ok(inv) = matrix::inverse(f, &cand) {
            break (cand, inv);
        }
    };
    let (p, pinv) = p;
    let g = matrix::mul(f, &matrix::mul(f, &matrix::transpose(&p), &g0), &p);
    let m = matrix::mul(f, &matrix::mul(f, &pinv, &m0), &p);
    Ok((GramMatrix { field: f.clone(), entries: g }, m))
}
