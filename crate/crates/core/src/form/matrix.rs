//! Dense matrices over a [`Field`], with elimination that stays inside the
//! Laurent polynomial ring when a quotient is not representable.

use crate::field::{Field, FieldElement};

use super::FormError;

pub type Matrix = Vec<Vec<FieldElement>>;

pub fn identity(f: &Field, n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { f.one() } else { f.zero() }).collect())
        .collect()
}

pub fn zeros(f: &Field, rows: usize, cols: usize) -> Matrix {
    vec![vec![f.zero(); cols]; rows]
}

pub fn transpose(m: &Matrix) -> Matrix {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len()).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn mul(f: &Field, a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            assert_eq!(row.len(), inner, "dimension mismatch");
            (0..cols)
                .map(|j| {
                    let mut acc = f.zero();
                    for k in 0..inner {
                        if !f.is_zero(&row[k]) && !f.is_zero(&b[k][j]) {
                            acc = f.add(&acc, &f.mul(&row[k], &b[k][j]));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn mul_vec(f: &Field, a: &Matrix, v: &[FieldElement]) -> Vec<FieldElement> {
    a.iter()
        .map(|row| {
            let mut acc = f.zero();
            for (x, y) in row.iter().zip(v) {
                if !f.is_zero(x) && !f.is_zero(y) {
                    acc = f.add(&acc, &f.mul(x, y));
                }
            }
            acc
        })
        .collect()
}

/// `xᵀ g y`.
pub fn bilinear(f: &Field, g: &Matrix, x: &[FieldElement], y: &[FieldElement]) -> FieldElement {
    let gy = mul_vec(f, g, y);
    let mut acc = f.zero();
    for (a, b) in x.iter().zip(&gy) {
        acc = f.add(&acc, &f.mul(a, b));
    }
    acc
}

pub fn sub(f: &Field, a: &Matrix, b: &Matrix) -> Matrix {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| f.sub(x, y)).collect())
        .collect()
}

pub fn scalar_diag(f: &Field, n: usize, c: &FieldElement) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { c.clone() } else { f.zero() }).collect())
        .collect()
}

pub fn diag(f: &Field, d: &[FieldElement]) -> Matrix {
    let n = d.len();
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { d[i].clone() } else { f.zero() }).collect())
        .collect()
}

pub fn is_square_shape(m: &Matrix) -> bool {
    m.iter().all(|r| r.len() == m.len())
}

pub fn is_symmetric(m: &Matrix) -> bool {
    is_square_shape(m) && (0..m.len()).all(|i| (0..i).all(|j| m[i][j] == m[j][i]))
}

/// `row_i ← λ·row_i − μ·row_k`, with λ = 1 when `μ` is exactly divisible.
fn eliminate(f: &Field, pivot: &FieldElement, row_k: &[FieldElement], row_i: &mut [FieldElement], col: usize) {
    let c = row_i[col].clone();
    if f.is_zero(&c) {
        return;
    }
    match f.div(&c, pivot) {
        Ok(q) => {
            for (x, y) in row_i.iter_mut().zip(row_k) {
                if !f.is_zero(y) {
                    *x = f.sub(x, &f.mul(&q, y));
                }
            }
        }
        Err(_) => {
            for (x, y) in row_i.iter_mut().zip(row_k) {
                *x = f.sub(&f.mul(pivot, x), &f.mul(&c, y));
            }
        }
    }
}

/// Reduced form: every pivot column has a single nonzero entry. Returns the
/// reduced rows and the pivot columns.
fn reduce(f: &Field, m: &Matrix, cols: usize) -> (Matrix, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(i) = (r..a.len()).find(|&i| !f.is_zero(&a[i][c])) else {
            continue;
        };
        a.swap(r, i);
        let pivot = a[r][c].clone();
        let row_r = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r {
                eliminate(f, &pivot, &row_r, row, c);
            }
        }
        pivots.push(c);
        r += 1;
        if r == a.len() {
            break;
        }
    }
    (a, pivots)
}

pub fn rank(f: &Field, m: &Matrix) -> usize {
    let cols = m.first().map_or(0, Vec::len);
    reduce(f, m, cols).1.len()
}

/// Basis of `{x : m x = 0}`, one vector per free column.
pub fn kernel(f: &Field, m: &Matrix, cols: usize) -> Vec<Vec<FieldElement>> {
    let (a, pivots) = reduce(f, m, cols);
    let mut out = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut x = vec![f.zero(); cols];
        let by_division: Option<Vec<FieldElement>> = pivots
            .iter()
            .enumerate()
            .map(|(k, _)| f.div(&a[k][free], &a[k][pivots[k]]).ok())
            .collect();
        match by_division {
            Some(qs) => {
                x[free] = f.one();
                for (k, q) in qs.into_iter().enumerate() {
                    x[pivots[k]] = f.neg(&q);
                }
            }
            None => {
                let used: Vec<usize> = (0..pivots.len()).filter(|&k| !f.is_zero(&a[k][free])).collect();
                x[free] = f.product(used.iter().map(|&k| &a[k][pivots[k]]));
                for &k in &used {
                    let others = f.product(used.iter().filter(|&&k2| k2 != k).map(|&k2| &a[k2][pivots[k2]]));
                    x[pivots[k]] = f.neg(&f.mul(&a[k][free], &others));
                }
            }
        }
        out.push(x);
    }
    out
}

/// Determinant by fraction-free (Bareiss) elimination; all divisions are
/// exact in the Laurent polynomial ring.
pub fn det(f: &Field, m: &Matrix) -> Result<FieldElement, FormError> {
    if !is_square_shape(m) {
        return Err(FormError::Shape("determinant of a non-square matrix".into()));
    }
    let n = m.len();
    if n == 0 {
        return Ok(f.one());
    }
    let mut a = m.clone();
    let mut prev = f.one();
    let mut negate = false;
    for k in 0..n - 1 {
        if f.is_zero(&a[k][k]) {
            let Some(i) = (k + 1..n).find(|&i| !f.is_zero(&a[i][k])) else {
                return Ok(f.zero());
            };
            a.swap(k, i);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = f.sub(&f.mul(&a[i][j], &a[k][k]), &f.mul(&a[i][k], &a[k][j]));
                a[i][j] = f.div(&num, &prev)?;
            }
            a[i][k] = f.zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if negate { f.neg(&d) } else { d })
}

/// Gauss-Jordan inverse; fails when an entry of the inverse is not a
/// Laurent polynomial.
pub fn inverse(f: &Field, m: &Matrix) -> Result<Matrix, FormError> {
    let n = m.len();
    if !is_square_shape(m) {
        return Err(FormError::Shape("inverse of a non-square matrix".into()));
    }
    let mut a: Matrix = m
        .iter()
        .zip(identity(f, n))
        .map(|(r, e)| r.iter().cloned().chain(e).collect())
        .collect();
    for c in 0..n {
        let i = (c..n).find(|&i| !f.is_zero(&a[i][c])).ok_or(FormError::Singular)?;
        a.swap(c, i);
        let p = a[c][c].clone();
        for x in a[c].iter_mut() {
            *x = f.div(x, &p)?;
        }
        let row_c = a[c].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != c && !f.is_zero(&row[c]) {
                let q = row[c].clone();
                for (x, y) in row.iter_mut().zip(&row_c) {
                    *x = f.sub(x, &f.mul(&q, y));
                }
            }
        }
    }
    Ok(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn pow(f: &Field, m: &Matrix, e: u32) -> Matrix {
    let mut out = identity(f, m.len());
    for _ in 0..e {
        out = mul(f, &out, m);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(rows: &[&[i64]]) -> (Field, Matrix) {
        let f = Field::rationals();
        let m = rows.iter().map(|r| r.iter().map(|&x| f.from_int(x)).collect()).collect();
        (f, m)
    }

    #[test]
    fn determinant_and_inverse() {
        let (f, m) = q(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(det(&f, &m).unwrap(), f.from_int(18));
        let inv = inverse(&f, &m).unwrap();
        assert_eq!(mul(&f, &m, &inv), identity(&f, 3));
        let (f, m) = q(&[&[0, 1], &[1, 0]]);
        assert_eq!(det(&f, &m).unwrap(), f.from_int(-1));
    }

    #[test]
    fn kernel_over_laurent_ring() {
        let f = Field::gf(5, 1).unwrap().laurent(["X"]).unwrap();
        let x = f.var(0);
        let one = f.one();
        let m = vec![vec![x.clone(), f.add(&one, &x)], vec![f.square(&x), f.mul(&x, &f.add(&one, &x))]];
        let k = kernel(&f, &m, 2);
        assert_eq!(k.len(), 1);
        assert!(mul_vec(&f, &m, &k[0]).iter().all(|e| f.is_zero(e)));
        assert_eq!(rank(&f, &m), 1);
        assert!(f.is_zero(&det(&f, &m).unwrap()));
    }
}
