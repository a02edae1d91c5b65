use super::FieldError;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime divisors in increasing order.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn two_adic_valuation(n: u64) -> u32 {
    assert!(n != 0, "valuation of zero");
    n.trailing_zeros()
}

/// Smallest prime p < bound with p ≡ 1 + 2^s (mod 2^{s+1}), so that 2^s
/// exactly divides p - 1.
pub fn find_dirichlet_prime(s: u32, bound: u64) -> Result<u64, FieldError> {
    if s < 2 {
        return Err(FieldError::InvalidArgument(format!("s = {s} must be at least 2")));
    }
    if s >= 62 {
        return Err(FieldError::Overflow(format!("2^{} does not fit", s + 1)));
    }
    let step = 1u64 << (s + 1);
    let mut p = 1 + (1u64 << s);
    while p < bound {
        if is_prime(p) {
            assert_eq!(two_adic_valuation(p - 1), s);
            return Ok(p);
        }
        p += step;
    }
    Err(FieldError::NotFound(format!(
        "no prime ≡ 1 + 2^{s} mod 2^{} below {bound}",
        s + 1
    )))
}

/// q = 5^(2^(s-2)), the field size whose unit group has 2-part exactly 2^s.
pub fn q_for_s(s: u32) -> Result<u64, FieldError> {
    if s < 2 {
        return Err(FieldError::InvalidArgument(format!("s = {s} must be at least 2")));
    }
    let e = 1u32
        .checked_shl(s - 2)
        .ok_or_else(|| FieldError::Overflow(format!("5^(2^{}) is too large", s - 2)))?;
    let q = 5u64
        .checked_pow(e)
        .ok_or_else(|| FieldError::Overflow(format!("5^{e} does not fit in 64 bits")))?;
    assert_eq!(
        two_adic_valuation(q - 1),
        s,
        "2^{s} must exactly divide {q} - 1"
    );
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dirichlet_primes() {
        assert_eq!(find_dirichlet_prime(2, 1000).unwrap(), 5);
        assert_eq!(find_dirichlet_prime(3, 1000).unwrap(), 41);
        assert_eq!(find_dirichlet_prime(4, 1000).unwrap(), 17);
        assert!(find_dirichlet_prime(3, 40).is_err());
        assert!(find_dirichlet_prime(1, 100).is_err());
    }

    #[test]
    fn field_sizes() {
        assert_eq!(q_for_s(2).unwrap(), 5);
        assert_eq!(q_for_s(3).unwrap(), 25);
        assert_eq!(q_for_s(4).unwrap(), 625);
        assert_eq!(q_for_s(6).unwrap(), 152_587_890_625);
        assert!(q_for_s(9).is_err());
    }

    #[test]
    fn factoring() {
        assert_eq!(prime_divisors(624), vec![2, 3, 13]);
        assert_eq!(prime_divisors(1), Vec::<u64>::new());
        assert!(is_prime(41) && !is_prime(25));
    }
}
