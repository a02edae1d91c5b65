use super::search::{is_prime, prime_divisors};
use super::FieldError;

/// Largest field size for which tables are built.
pub const GF_CAP: u64 = 1_000_000;

/// Arithmetic context for GF(p^k). An element is stored as the index
/// Σ c_i p^i of its coefficient vector modulo the chosen modulus.
#[derive(Debug)]
pub struct GfContext {
    p: u32,
    k: u32,
    q: u32,
    /// Monic modulus, lowest coefficient first, length k+1.
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    generator: u32,
    nonsquare: u32,
}

fn digits(mut x: u32, p: u32, k: u32) -> Vec<u32> {
    let mut d = Vec::with_capacity(k as usize);
    for _ in 0..k {
        d.push(x % p);
        x /= p;
    }
    d
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Remainder of `a` modulo the monic polynomial `m` over GF(p).
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let c = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if c != 0 {
            for (i, &mi) in m.iter().enumerate() {
                r[shift + i] = ((r[shift + i] as u64 + (p - c) as u64 * mi as u64) % p as u64) as u32;
            }
        }
        r.pop();
    }
    r
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x as u64 * y as u64;
        }
    }
    out.into_iter().map(|c| (c % p as u64) as u32).collect()
}

/// Brute-force irreducibility: no monic factor of degree ≤ deg/2.
pub fn is_irreducible(m: &[u32], p: u32) -> bool {
    let deg = m.len() - 1;
    if deg == 0 || m[deg] != 1 {
        return false;
    }
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for low in 0..count {
            let mut f = digits(low as u32, p, d as u32);
            f.push(1);
            if poly_rem(m, &f, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl GfContext {
    pub fn new(p: u32, k: u32, modulus: Option<Vec<u32>>) -> Result<Self, FieldError> {
        if p == 2 || !is_prime(p as u64) {
            return Err(FieldError::InvalidDescriptor(format!("{p} is not an odd prime")));
        }
        if k == 0 {
            return Err(FieldError::InvalidDescriptor("degree must be positive".into()));
        }
        let q = (p as u64).checked_pow(k).filter(|&q| q <= GF_CAP).ok_or_else(|| {
            FieldError::InvalidDescriptor(format!("GF({p}^{k}) exceeds the size cap {GF_CAP}"))
        })? as u32;
        let modulus = match modulus {
            Some(m) => {
                if m.len() != k as usize + 1 || m.iter().any(|&c| c >= p) {
                    return Err(FieldError::InvalidDescriptor(format!(
                        "modulus {m:?} must have {} coefficients below {p}",
                        k + 1
                    )));
                }
                if !is_irreducible(&m, p) {
                    return Err(FieldError::InvalidDescriptor(format!(
                        "modulus {m:?} is not a monic irreducible over GF({p})"
                    )));
                }
                m
            }
            None => {
                let lows = (p as u64).pow(k);
                let mut found = None;
                for low in 0..lows {
                    let mut m = digits(low as u32, p, k);
                    m.push(1);
                    if is_irreducible(&m, p) {
                        found = Some(m);
                        break;
                    }
                }
                found.expect("irreducible polynomials exist in every degree")
            }
        };
        let mut ctx = GfContext {
            p,
            k,
            q,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
            generator: 0,
            nonsquare: 0,
        };
        ctx.build_tables();
        Ok(ctx)
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let prod = poly_mul(&digits(a, self.p, self.k), &digits(b, self.p, self.k), self.p);
        let mut r = if prod.len() > self.k as usize {
            poly_rem(&prod, &self.modulus, self.p)
        } else {
            prod
        };
        r.resize(self.k as usize, 0);
        undigits(&r, self.p)
    }

    fn slow_pow(&self, mut a: u32, mut e: u64) -> u32 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = self.slow_mul(r, a);
            }
            a = self.slow_mul(a, a);
            e >>= 1;
        }
        r
    }

    fn build_tables(&mut self) {
        let n = (self.q - 1) as u64;
        let primes = prime_divisors(n);
        let g = (2..self.q)
            .chain(std::iter::once(1))
            .find(|&g| primes.iter().all(|&l| self.slow_pow(g, n / l) != 1))
            .expect("the multiplicative group is cyclic");
        let mut exp = Vec::with_capacity(2 * n as usize);
        let mut log = vec![u32::MAX; self.q as usize];
        let mut x = 1u32;
        for i in 0..n as u32 {
            exp.push(x);
            log[x as usize] = i;
            x = self.slow_mul(x, g);
        }
        debug_assert_eq!(x, 1);
        exp.extend_from_within(..);
        self.exp = exp;
        self.log = log;
        self.generator = g;
        // smallest index that is a nonsquare (odd logarithm)
        self.nonsquare = (1..self.q).find(|&x| self.log[x as usize] % 2 == 1).unwrap();
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn generator(&self) -> u32 {
        self.generator
    }

    pub fn nonsquare(&self) -> u32 {
        self.nonsquare
    }

    pub fn coefficients(&self, a: u32) -> Vec<u32> {
        digits(a, self.p, self.k)
    }

    pub fn from_coefficients(&self, c: &[u32]) -> u32 {
        debug_assert!(c.len() <= self.k as usize);
        undigits(c, self.p)
    }

    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.k == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
        while a > 0 || b > 0 {
            out += (a % self.p + b % self.p) % self.p * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn neg(&self, a: u32) -> u32 {
        if self.k == 1 {
            return (self.p - a) % self.p;
        }
        let (mut a, mut out, mut place) = (a, 0, 1);
        while a > 0 {
            out += (self.p - a % self.p) % self.p * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let l = self.log[a as usize];
        Some(self.exp[((self.q - 1 - l) % (self.q - 1)) as usize])
    }

    pub fn pow(&self, a: u32, e: i64) -> Option<u32> {
        if a == 0 {
            return match e {
                0 => Some(1),
                e if e > 0 => Some(0),
                _ => None,
            };
        }
        let n = (self.q - 1) as i64;
        let l = (self.log[a as usize] as i64 * e.rem_euclid(n)).rem_euclid(n);
        Some(self.exp[l as usize])
    }

    pub fn log(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.log[a as usize])
    }

    pub fn exp(&self, i: u64) -> u32 {
        self.exp[(i % (self.q as u64 - 1)) as usize]
    }

    pub fn is_square(&self, a: u32) -> bool {
        a == 0 || self.log[a as usize] % 2 == 0
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: u32) -> u64 {
        let n = (self.q - 1) as u64;
        let l = self.log[a as usize] as u64;
        n / num_integer::gcd(n, l)
    }

    /// A primitive `2^k`-th root of unity, when `2^k | q-1`.
    pub fn root_of_unity(&self, k: u32) -> Option<u32> {
        let n = (self.q - 1) as u64;
        let m = 1u64.checked_shl(k)?;
        (n % m == 0).then(|| self.exp(n / m))
    }
}
