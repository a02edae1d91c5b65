use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Prime factorization of |n| by trial division, primes ascending.
pub fn factor(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.abs();
    let mut out = Vec::new();
    if n.is_zero() {
        return out;
    }
    let mut d = BigInt::from(2);
    while &d * &d <= n {
        let mut e = 0;
        while (&n % &d).is_zero() {
            n /= &d;
            e += 1;
        }
        if e > 0 {
            out.push((d.clone(), e));
        }
        d += if d == BigInt::from(2) { 1 } else { 2 };
    }
    if !n.is_one() {
        out.push((n, 1));
    }
    out
}

pub fn is_perfect_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

/// Signed squarefree integer in the square class of a nonzero integer.
pub fn squarefree_part(n: &BigInt) -> BigInt {
    assert!(!n.is_zero(), "square class of zero");
    let mut out: BigInt = factor(n)
        .into_iter()
        .filter(|(_, e)| e.is_odd())
        .map(|(p, _)| p)
        .product();
    if n.sign() == Sign::Minus {
        out = -out;
    }
    out
}

pub fn is_square(x: &BigRational) -> bool {
    !x.is_negative() && is_perfect_square(x.numer()) && is_perfect_square(x.denom())
}

/// The squarefree integer representing the square class of `x`.
pub fn square_class(x: &BigRational) -> BigInt {
    squarefree_part(&(x.numer() * x.denom()))
}

pub fn parse(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            (!d.is_zero()).then(|| BigRational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}
