//! Local invariants of rational quadratic forms: Hilbert symbols, Hasse
//! invariants `c_p = ∏_{i<j} (a_i, a_j)_p`, and local isotropy.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::field::rational;

/// A place of Q.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Prime(BigInt),
    Infinite,
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Prime(p) => write!(f, "{p}"),
            Place::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Place::Prime(p) => match p.to_i64() {
                Some(v) => s.serialize_i64(v),
                None => s.serialize_str(&p.to_string()),
            },
            Place::Infinite => s.serialize_str("inf"),
        }
    }
}

fn split_p(a: &BigInt, p: &BigInt) -> (u32, BigInt) {
    let mut u = a.clone();
    let mut v = 0;
    while (&u % p).is_zero() {
        u /= p;
        v += 1;
    }
    (v, u)
}

/// Legendre symbol `(u/p)` for an odd prime `p` not dividing `u`.
fn legendre(u: &BigInt, p: &BigInt) -> i8 {
    let r = u.mod_floor(p);
    let e = (p - 1u32) / 2u32;
    if r.modpow(&e, p).is_one() {
        1
    } else {
        -1
    }
}

fn sign(b: bool) -> i8 {
    if b {
        -1
    } else {
        1
    }
}

/// Hilbert symbol `(a, b)_v` of nonzero integers.
pub fn hilbert_symbol(a: &BigInt, b: &BigInt, v: &Place) -> i8 {
    assert!(!a.is_zero() && !b.is_zero(), "Hilbert symbol of zero");
    match v {
        Place::Infinite => sign(a.is_negative() && b.is_negative()),
        Place::Prime(p) if *p == BigInt::from(2) => {
            let (al, u) = split_p(a, p);
            let (be, w) = split_p(b, p);
            let eps = |x: &BigInt| x.mod_floor(&BigInt::from(4)) == BigInt::from(3);
            let omega = |x: &BigInt| {
                let r = x.mod_floor(&BigInt::from(8));
                r == BigInt::from(3) || r == BigInt::from(5)
            };
            let odd = (eps(&u) && eps(&w)) ^ (al % 2 == 1 && omega(&w)) ^ (be % 2 == 1 && omega(&u));
            sign(odd)
        }
        Place::Prime(p) => {
            let (al, u) = split_p(a, p);
            let (be, w) = split_p(b, p);
            let mut s = 1i8;
            if al % 2 == 1 && be % 2 == 1 && p.mod_floor(&BigInt::from(4)) == BigInt::from(3) {
                s = -s;
            }
            if be % 2 == 1 {
                s *= legendre(&u, p);
            }
            if al % 2 == 1 {
                s *= legendre(&w, p);
            }
            s
        }
    }
}

/// Whether a nonzero integer is a square in the completion at `v`.
pub fn is_local_square(a: &BigInt, v: &Place) -> bool {
    assert!(!a.is_zero());
    match v {
        Place::Infinite => a.is_positive(),
        Place::Prime(p) => {
            let (e, u) = split_p(a, p);
            if e % 2 == 1 {
                return false;
            }
            if *p == BigInt::from(2) {
                u.mod_floor(&BigInt::from(8)) == BigInt::one()
            } else {
                legendre(&u, p) == 1
            }
        }
    }
}

/// `∞`, 2, and the odd primes dividing some entry: outside this set every
/// invariant of the form is trivial.
pub fn relevant_places(entries: &[BigInt]) -> BTreeSet<Place> {
    let mut out = BTreeSet::new();
    out.insert(Place::Infinite);
    out.insert(Place::Prime(BigInt::from(2)));
    for a in entries {
        for (p, _) in rational::factor(a) {
            out.insert(Place::Prime(p));
        }
    }
    out
}

pub fn hasse(entries: &[BigInt], v: &Place) -> i8 {
    let mut s = 1;
    for i in 0..entries.len() {
        for j in i + 1..entries.len() {
            s *= hilbert_symbol(&entries[i], &entries[j], v);
        }
    }
    s
}

pub fn discriminant(entries: &[BigInt]) -> BigInt {
    let prod: BigInt = entries.iter().product();
    rational::squarefree_part(&prod)
}

pub fn signature(entries: &[BigInt]) -> i64 {
    entries.iter().map(|a| if a.is_positive() { 1 } else { -1 }).sum()
}

fn hyperbolic(m: usize) -> Vec<BigInt> {
    (0..m).flat_map(|_| [BigInt::one(), -BigInt::one()]).collect()
}

pub fn is_hyperbolic(entries: &[BigInt]) -> bool {
    let n = entries.len();
    if n % 2 == 1 || signature(entries) != 0 {
        return false;
    }
    let h = hyperbolic(n / 2);
    if n == 0 {
        return true;
    }
    if discriminant(entries) != discriminant(&h) {
        return false;
    }
    relevant_places(entries).iter().all(|v| hasse(entries, v) == hasse(&h, v))
}

/// Hasse-Minkowski: isotropic at every place, each place decided by
/// dimension, discriminant, and Hasse invariant.
pub fn is_isotropic(entries: &[BigInt]) -> bool {
    let n = entries.len();
    if n <= 1 {
        return false;
    }
    let sig = signature(entries);
    if sig.unsigned_abs() as usize == n {
        return false;
    }
    if n >= 5 {
        return true;
    }
    let d = discriminant(entries);
    let minus_one = -BigInt::one();
    relevant_places(entries).iter().all(|v| match n {
        2 => is_local_square(&-&d, v),
        3 => hilbert_symbol(&minus_one, &-&d, v) == hasse(entries, v),
        _ => !is_local_square(&d, v) || hasse(entries, v) == hilbert_symbol(&minus_one, &minus_one, v),
    })
}

/// Dimension of the anisotropic part, from the classification of forms over
/// Q by their local invariants: the least `k` for which a `k`-dimensional
/// form with the invariants forced by `q ≅ q' ⊥ (n-k)/2·H` exists.
pub fn anisotropic_dim(entries: &[BigInt]) -> usize {
    let n = entries.len();
    let sig = signature(entries);
    let d = discriminant(entries);
    let places = relevant_places(entries);
    let mut k = sig.unsigned_abs() as usize;
    while k < n {
        if witt_kernel_exists(entries, &places, &d, sig, k) {
            return k;
        }
        k += 2;
    }
    n
}

fn witt_kernel_exists(entries: &[BigInt], places: &BTreeSet<Place>, d: &BigInt, sig: i64, k: usize) -> bool {
    let m = (entries.len() - k) / 2;
    let h = hyperbolic(m);
    let dh = if m % 2 == 0 { BigInt::one() } else { -BigInt::one() };
    let dk = rational::squarefree_part(&(d * &dh));
    let s = (k as i64 - sig) / 2;
    for v in places {
        let ck = hasse(entries, v) * hasse(&h, v) * hilbert_symbol(&dk, &dh, v);
        let ok = match (k, v) {
            (0, _) => dk.is_one() && ck == 1,
            (_, Place::Infinite) => {
                dk.is_negative() == (s % 2 == 1) && ck == sign((s * (s - 1) / 2) % 2 == 1)
            }
            (1, _) => ck == 1,
            (2, _) => ck == 1 || !is_local_square(&-&dk, v),
            _ => true,
        };
        if !ok {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn p(n: i64) -> Place {
        Place::Prime(BigInt::from(n))
    }

    #[test]
    fn hilbert_symbols() {
        let h = |a: i64, b: i64, v: &Place| hilbert_symbol(&BigInt::from(a), &BigInt::from(b), v);
        assert_eq!(h(-1, -1, &p(2)), -1);
        assert_eq!(h(-1, -1, &Place::Infinite), -1);
        assert_eq!(h(-1, -1, &p(3)), 1);
        assert_eq!(h(2, 3, &p(3)), -1);
        assert_eq!(h(2, 5, &p(5)), -1);
        assert_eq!(h(2, 7, &p(7)), 1);
        assert_eq!(h(3, 5, &p(2)), 1);
        assert_eq!(h(3, 7, &p(2)), -1);
        assert_eq!(h(5, 5, &p(5)), 1);
    }

    #[test]
    fn product_formula() {
        let vals = [-7i64, -6, -3, -2, -1, 2, 3, 5, 6, 10, 15, 21, 35];
        for &a in &vals {
            for &b in &vals {
                let (a, b) = (BigInt::from(a), BigInt::from(b));
                let prod: i32 = relevant_places(&[a.clone(), b.clone()])
                    .iter()
                    .map(|v| hilbert_symbol(&a, &b, v) as i32)
                    .product();
                assert_eq!(prod, 1, "({a},{b})");
            }
        }
    }

    #[test]
    fn isotropy_examples() {
        assert!(!is_isotropic(&ints(&[1, 1, 1, 1])));
        assert!(!is_isotropic(&ints(&[1, 1, 1, -7])));
        assert!(is_isotropic(&ints(&[1, 1, -2])));
        assert!(!is_isotropic(&ints(&[1, 1, -3])));
        assert!(is_isotropic(&ints(&[1, 1, 1, 1, -1])));
        assert!(is_isotropic(&ints(&[1, -1])));
        assert!(!is_isotropic(&ints(&[1, -2])));
        assert_eq!(anisotropic_dim(&ints(&[1, 2, 1, 1])), 4);
        assert_eq!(anisotropic_dim(&ints(&[1, -1, 3, -3])), 0);
        assert_eq!(anisotropic_dim(&ints(&[1, 1, 1, -7])), 4);
        assert_eq!(anisotropic_dim(&ints(&[1, 1, -2])), 1);
        assert!(is_hyperbolic(&ints(&[1, -1, 3, -3])));
        assert!(!is_hyperbolic(&ints(&[1, -1, 3, -5])));
    }
}
