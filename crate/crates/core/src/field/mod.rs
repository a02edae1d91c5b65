//! Exact computable fields: Q, GF(p^k), and towers of Laurent layers
//! F((X_1))...((X_r)) whose elements are Laurent polynomials.
//!
//! Elements do not carry their field; every operation goes through a
//! [`Field`] handle. An element of a tower of depth r is a map from exponents
//! of X_r to elements of depth r-1.

mod gf;
pub mod rational;
mod search;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub use gf::{is_irreducible, GfContext, GF_CAP};
pub use search::{find_dirichlet_prime, is_prime, prime_divisors, q_for_s, two_adic_valuation};

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("invalid field descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("element does not belong to this field: {0}")]
    DescriptorMismatch(String),
    #[error("operation undefined on zero")]
    ZeroInput,
    #[error("result is not a Laurent polynomial: {0}")]
    NotRepresentable(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("overflow: {0}")]
    Overflow(String),
    #[error("search failed: {0}")]
    NotFound(String),
    #[error("cannot parse element: {0}")]
    Parse(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

fn one_u32() -> u32 {
    1
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(tag = "kind")]
pub enum BaseDescriptor {
    Q,
    #[serde(rename = "GF")]
    Gf {
        p: u32,
        #[serde(default = "one_u32")]
        k: u32,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        modulus: Option<Vec<u32>>,
    },
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct FieldDescriptor {
    pub base: BaseDescriptor,
    #[serde(default)]
    pub laurent_vars: Vec<String>,
}

impl FieldDescriptor {
    pub fn rationals() -> Self {
        FieldDescriptor { base: BaseDescriptor::Q, laurent_vars: Vec::new() }
    }

    pub fn gf(p: u32, k: u32) -> Self {
        FieldDescriptor { base: BaseDescriptor::Gf { p, k, modulus: None }, laurent_vars: Vec::new() }
    }

    pub fn laurent<S: Into<String>>(mut self, vars: impl IntoIterator<Item = S>) -> Self {
        self.laurent_vars.extend(vars.into_iter().map(Into::into));
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FieldElement {
    Q(BigRational),
    Gf(u32),
    Laurent(BTreeMap<i64, FieldElement>),
}

/// Per-layer valuations `(v_X1, ..., v_Xr)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ValuationVector(pub Vec<i64>);

#[derive(Debug)]
enum Base {
    Q,
    Gf(GfContext),
}

/// Handle to a computable field; cheap to clone.
#[derive(Clone)]
pub struct Field {
    base: Arc<Base>,
    vars: Arc<[String]>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field({self})")
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.base {
            Base::Q => write!(f, "Q")?,
            Base::Gf(g) if g.k() == 1 => write!(f, "GF({})", g.p())?,
            Base::Gf(g) => write!(f, "GF({}^{})", g.p(), g.k())?,
        }
        for v in self.vars.iter() {
            write!(f, "(({v}))")?;
        }
        Ok(())
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.descriptor() == other.descriptor()
    }
}

impl Eq for Field {}

type Lp = BTreeMap<i64, FieldElement>;

impl Field {
    pub fn new(desc: &FieldDescriptor) -> Result<Self, FieldError> {
        let base = match &desc.base {
            BaseDescriptor::Q => Base::Q,
            BaseDescriptor::Gf { p, k, modulus } => Base::Gf(GfContext::new(*p, *k, modulus.clone())?),
        };
        for (i, v) in desc.laurent_vars.iter().enumerate() {
            if v.is_empty() || desc.laurent_vars[..i].contains(v) {
                return Err(FieldError::InvalidDescriptor(format!(
                    "Laurent variable names must be distinct and nonempty, got {:?}",
                    desc.laurent_vars
                )));
            }
        }
        Ok(Field { base: Arc::new(base), vars: desc.laurent_vars.clone().into() })
    }

    pub fn rationals() -> Self {
        Field::new(&FieldDescriptor::rationals()).unwrap()
    }

    pub fn gf(p: u32, k: u32) -> Result<Self, FieldError> {
        Field::new(&FieldDescriptor::gf(p, k))
    }

    /// This field with further Laurent layers added on top.
    pub fn laurent<S: Into<String>>(&self, vars: impl IntoIterator<Item = S>) -> Result<Self, FieldError> {
        let desc = self.descriptor().laurent(vars);
        for (i, v) in desc.laurent_vars.iter().enumerate() {
            if desc.laurent_vars[..i].contains(v) {
                return Err(FieldError::InvalidDescriptor(format!("duplicate variable {v}")));
            }
        }
        Ok(Field { base: self.base.clone(), vars: desc.laurent_vars.into() })
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        let base = match &*self.base {
            Base::Q => BaseDescriptor::Q,
            Base::Gf(g) => BaseDescriptor::Gf {
                p: g.p(),
                k: g.k(),
                modulus: (g.k() > 1).then(|| g.modulus().to_vec()),
            },
        };
        FieldDescriptor { base, laurent_vars: self.vars.to_vec() }
    }

    /// Number of Laurent layers.
    pub fn depth(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// The field below the outermost Laurent layer.
    pub fn residue_field(&self) -> Option<Field> {
        let r = self.depth();
        (r > 0).then(|| Field { base: self.base.clone(), vars: self.vars[..r - 1].into() })
    }

    /// The field at the bottom of the tower.
    pub fn base_field(&self) -> Field {
        Field { base: self.base.clone(), vars: Arc::from(Vec::new()) }
    }

    pub fn gf_context(&self) -> Option<&GfContext> {
        match &*self.base {
            Base::Gf(g) => Some(g),
            Base::Q => None,
        }
    }

    pub fn is_rational_base(&self) -> bool {
        matches!(*self.base, Base::Q)
    }

    pub fn characteristic(&self) -> u32 {
        self.gf_context().map_or(0, |g| g.p())
    }

    // ---- construction ----

    pub fn zero(&self) -> FieldElement {
        self.zero_at(self.depth())
    }

    pub fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> FieldElement {
        self.embed(0, self.base_int(n))
    }

    pub fn from_rational(&self, x: &BigRational) -> Result<FieldElement, FieldError> {
        let b = match &*self.base {
            Base::Q => FieldElement::Q(x.clone()),
            Base::Gf(g) => {
                let p = BigInt::from(g.p());
                let reduce = |n: &BigInt| -> u32 {
                    let r = n % &p;
                    let r = if r.is_negative() { r + &p } else { r };
                    r.to_u32().unwrap()
                };
                let d = g.inv(reduce(x.denom())).ok_or_else(|| {
                    FieldError::NotRepresentable(format!("{x} has denominator divisible by {}", g.p()))
                })?;
                FieldElement::Gf(g.mul(reduce(x.numer()), d))
            }
        };
        Ok(self.embed(0, b))
    }

    /// The Laurent variable X_i (0-based), as an element of this field.
    pub fn var(&self, i: usize) -> FieldElement {
        assert!(i < self.depth(), "variable index {i} out of range");
        let mut m = BTreeMap::new();
        m.insert(1, self.one_at(i));
        self.embed(i + 1, FieldElement::Laurent(m))
    }

    pub fn var_named(&self, name: &str) -> Option<FieldElement> {
        self.vars.iter().position(|v| v == name).map(|i| self.var(i))
    }

    /// `c · X_r^e` with `c` in the residue field.
    pub fn monomial(&self, c: FieldElement, e: i64) -> FieldElement {
        assert!(self.depth() > 0, "monomial needs a Laurent layer");
        let mut m = BTreeMap::new();
        if !self.is_zero_at(self.depth() - 1, &c) {
            m.insert(e, c);
        }
        FieldElement::Laurent(m)
    }

    /// Lifts an element of the depth-`d` subfield to the top of the tower.
    pub fn embed(&self, d: usize, mut x: FieldElement) -> FieldElement {
        assert!(d <= self.depth());
        for _ in d..self.depth() {
            let mut m = BTreeMap::new();
            let zero = matches!(&x, FieldElement::Laurent(l) if l.is_empty())
                || matches!(&x, FieldElement::Gf(0))
                || matches!(&x, FieldElement::Q(r) if r.is_zero());
            if !zero {
                m.insert(0, x);
            }
            x = FieldElement::Laurent(m);
        }
        x
    }

    fn base_int(&self, n: i64) -> FieldElement {
        match &*self.base {
            Base::Q => FieldElement::Q(BigRational::from_integer(n.into())),
            Base::Gf(g) => FieldElement::Gf(g.from_int(n)),
        }
    }

    fn zero_at(&self, d: usize) -> FieldElement {
        if d == 0 {
            self.base_int(0)
        } else {
            FieldElement::Laurent(BTreeMap::new())
        }
    }

    fn one_at(&self, d: usize) -> FieldElement {
        let mut x = self.base_int(1);
        for _ in 0..d {
            let mut m = BTreeMap::new();
            m.insert(0, x);
            x = FieldElement::Laurent(m);
        }
        x
    }

    // ---- validation ----

    pub fn validate(&self, x: &FieldElement) -> Result<(), FieldError> {
        self.validate_at(self.depth(), x)
    }

    fn validate_at(&self, d: usize, x: &FieldElement) -> Result<(), FieldError> {
        match (d, x, &*self.base) {
            (0, FieldElement::Q(_), Base::Q) => Ok(()),
            (0, FieldElement::Gf(v), Base::Gf(g)) if *v < g.q() => Ok(()),
            (d, FieldElement::Laurent(m), _) if d > 0 => {
                for c in m.values() {
                    self.validate_at(d - 1, c)?;
                    if self.is_zero_at(d - 1, c) {
                        return Err(FieldError::DescriptorMismatch("stored zero coefficient".into()));
                    }
                }
                Ok(())
            }
            _ => Err(FieldError::DescriptorMismatch(format!("{x:?} is not an element of {self}"))),
        }
    }

    // ---- arithmetic ----

    pub fn is_zero(&self, x: &FieldElement) -> bool {
        self.is_zero_at(self.depth(), x)
    }

    fn is_zero_at(&self, d: usize, x: &FieldElement) -> bool {
        match x {
            FieldElement::Q(r) => r.is_zero(),
            FieldElement::Gf(v) => *v == 0,
            FieldElement::Laurent(m) => {
                debug_assert!(d > 0);
                m.is_empty()
            }
        }
    }

    pub fn is_one(&self, x: &FieldElement) -> bool {
        *x == self.one()
    }

    pub fn add(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        self.add_at(self.depth(), x, y)
    }

    pub fn sub(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        self.add(x, &self.neg(y))
    }

    pub fn neg(&self, x: &FieldElement) -> FieldElement {
        self.neg_at(self.depth(), x)
    }

    pub fn mul(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        self.mul_at(self.depth(), x, y)
    }

    pub fn mul_int(&self, x: &FieldElement, n: i64) -> FieldElement {
        self.mul(x, &self.from_int(n))
    }

    pub fn square(&self, x: &FieldElement) -> FieldElement {
        self.mul(x, x)
    }

    pub fn pow(&self, x: &FieldElement, mut e: u64) -> FieldElement {
        let mut base = x.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Integer power, negative exponents allowed for invertible Laurent
    /// polynomials (monomials).
    pub fn powi(&self, x: &FieldElement, e: i64) -> Result<FieldElement, FieldError> {
        if e >= 0 {
            Ok(self.pow(x, e as u64))
        } else {
            Ok(self.pow(&self.inv(x)?, e.unsigned_abs()))
        }
    }

    pub fn sum<'a>(&self, xs: impl IntoIterator<Item = &'a FieldElement>) -> FieldElement {
        xs.into_iter().fold(self.zero(), |acc, x| self.add(&acc, x))
    }

    pub fn product<'a>(&self, xs: impl IntoIterator<Item = &'a FieldElement>) -> FieldElement {
        xs.into_iter().fold(self.one(), |acc, x| self.mul(&acc, x))
    }

    /// Multiplicative inverse; in a Laurent layer only monomials are
    /// invertible as Laurent polynomials.
    pub fn inv(&self, x: &FieldElement) -> Result<FieldElement, FieldError> {
        self.inv_at(self.depth(), x)
    }

    /// Exact quotient. Fails if `y` is zero or the quotient is not a Laurent
    /// polynomial.
    pub fn div(&self, x: &FieldElement, y: &FieldElement) -> Result<FieldElement, FieldError> {
        self.div_at(self.depth(), x, y)
    }

    fn add_at(&self, d: usize, x: &FieldElement, y: &FieldElement) -> FieldElement {
        match (x, y, &*self.base) {
            (FieldElement::Q(a), FieldElement::Q(b), _) => FieldElement::Q(a + b),
            (FieldElement::Gf(a), FieldElement::Gf(b), Base::Gf(g)) => FieldElement::Gf(g.add(*a, *b)),
            (FieldElement::Laurent(a), FieldElement::Laurent(b), _) => {
                let mut out = a.clone();
                for (e, c) in b {
                    lp_add_term(self, d, &mut out, *e, c);
                }
                FieldElement::Laurent(out)
            }
            _ => panic!("element shapes do not match field {self}"),
        }
    }

    fn neg_at(&self, d: usize, x: &FieldElement) -> FieldElement {
        match (x, &*self.base) {
            (FieldElement::Q(a), _) => FieldElement::Q(-a),
            (FieldElement::Gf(a), Base::Gf(g)) => FieldElement::Gf(g.neg(*a)),
            (FieldElement::Laurent(m), _) => {
                FieldElement::Laurent(m.iter().map(|(e, c)| (*e, self.neg_at(d - 1, c))).collect())
            }
            _ => panic!("element shape does not match field {self}"),
        }
    }

    fn mul_at(&self, d: usize, x: &FieldElement, y: &FieldElement) -> FieldElement {
        match (x, y, &*self.base) {
            (FieldElement::Q(a), FieldElement::Q(b), _) => FieldElement::Q(a * b),
            (FieldElement::Gf(a), FieldElement::Gf(b), Base::Gf(g)) => FieldElement::Gf(g.mul(*a, *b)),
            (FieldElement::Laurent(a), FieldElement::Laurent(b), _) => {
                let mut out = BTreeMap::new();
                for (ea, ca) in a {
                    for (eb, cb) in b {
                        lp_add_term(self, d, &mut out, ea + eb, &self.mul_at(d - 1, ca, cb));
                    }
                }
                FieldElement::Laurent(out)
            }
            _ => panic!("element shapes do not match field {self}"),
        }
    }

    fn inv_at(&self, d: usize, x: &FieldElement) -> Result<FieldElement, FieldError> {
        match (x, &*self.base) {
            (FieldElement::Q(a), _) => {
                if a.is_zero() {
                    Err(FieldError::DivisionByZero)
                } else {
                    Ok(FieldElement::Q(a.recip()))
                }
            }
            (FieldElement::Gf(a), Base::Gf(g)) => g.inv(*a).map(FieldElement::Gf).ok_or(FieldError::DivisionByZero),
            (FieldElement::Laurent(m), _) => {
                let mut it = m.iter();
                match (it.next(), it.next()) {
                    (None, _) => Err(FieldError::DivisionByZero),
                    (Some((e, c)), None) => {
                        let mut out = BTreeMap::new();
                        out.insert(-e, self.inv_at(d - 1, c)?);
                        Ok(FieldElement::Laurent(out))
                    }
                    _ => Err(FieldError::NotRepresentable(
                        "inverse of a non-monomial Laurent polynomial".into(),
                    )),
                }
            }
            _ => panic!("element shape does not match field {self}"),
        }
    }

    fn div_at(&self, d: usize, x: &FieldElement, y: &FieldElement) -> Result<FieldElement, FieldError> {
        if self.is_zero_at(d, y) {
            return Err(FieldError::DivisionByZero);
        }
        let (FieldElement::Laurent(xm), FieldElement::Laurent(ym)) = (x, y) else {
            return Ok(self.mul_at(d, x, &self.inv_at(d, y)?));
        };
        if ym.len() == 1 {
            let (e, c) = ym.iter().next().unwrap();
            let mut out = BTreeMap::new();
            for (xe, xc) in xm {
                out.insert(xe - e, self.div_at(d - 1, xc, c)?);
            }
            return Ok(FieldElement::Laurent(out));
        }
        // long division from the top exponent; exact in the Laurent ring
        // iff the remainder vanishes
        let (&ytop, ylead) = ym.iter().next_back().unwrap();
        let ylow = *ym.keys().next().unwrap();
        let mut rem = xm.clone();
        let mut quot = BTreeMap::new();
        while let Some((&rtop, rlead)) = rem.iter().next_back() {
            let rlow = *rem.keys().next().unwrap();
            if rtop - rlow < ytop - ylow {
                return Err(FieldError::NotRepresentable(format!(
                    "{} does not divide {}",
                    self.format_at(d, y),
                    self.format_at(d, x)
                )));
            }
            let c = self.div_at(d - 1, rlead, ylead)?;
            let shift = rtop - ytop;
            for (e, t) in ym {
                let prod = self.mul_at(d - 1, &c, t);
                lp_add_term(self, d, &mut rem, e + shift, &self.neg_at(d - 1, &prod));
            }
            lp_add_term(self, d, &mut quot, shift, &c);
        }
        Ok(FieldElement::Laurent(quot))
    }

    // ---- valuations ----

    /// Exponent and coefficient of the lowest term in the outermost layer.
    pub fn leading(&self, x: &FieldElement) -> Result<(i64, FieldElement), FieldError> {
        match x {
            FieldElement::Laurent(m) => m
                .iter()
                .next()
                .map(|(e, c)| (*e, c.clone()))
                .ok_or(FieldError::ZeroInput),
            _ => Err(FieldError::Unsupported("leading term needs a Laurent layer".into())),
        }
    }

    /// Valuation in the outermost Laurent variable.
    pub fn valuation(&self, x: &FieldElement) -> Result<i64, FieldError> {
        self.leading(x).map(|(e, _)| e)
    }

    /// Valuations `(v_X1, ..., v_Xr)` of the lexicographic valuation, the
    /// outermost layer being the most significant.
    pub fn valuation_vector(&self, x: &FieldElement) -> Result<ValuationVector, FieldError> {
        if self.depth() == 0 {
            return Err(FieldError::Unsupported("valuation vector needs a Laurent layer".into()));
        }
        if self.is_zero(x) {
            return Err(FieldError::ZeroInput);
        }
        let mut v = Vec::with_capacity(self.depth());
        let mut cur = x;
        while let FieldElement::Laurent(m) = cur {
            let (e, c) = m.iter().next().unwrap();
            v.push(*e);
            cur = c;
        }
        v.reverse();
        Ok(ValuationVector(v))
    }

    // ---- squares ----

    pub fn is_square(&self, x: &FieldElement) -> Result<bool, FieldError> {
        if self.is_zero(x) {
            return Err(FieldError::ZeroInput);
        }
        Ok(self.is_square_at(x))
    }

    fn is_square_at(&self, x: &FieldElement) -> bool {
        match (x, &*self.base) {
            (FieldElement::Q(a), _) => rational::is_square(a),
            (FieldElement::Gf(a), Base::Gf(g)) => g.is_square(*a),
            (FieldElement::Laurent(m), _) => {
                let (e, c) = m.iter().next().unwrap();
                e % 2 == 0 && self.is_square_at(c)
            }
            _ => panic!("element shape does not match field {self}"),
        }
    }

    /// Canonical representative of the square class: a squarefree integer
    /// over Q, 1 or the least nonsquare over GF(q), and `ε·X^(v mod 2)` in a
    /// Laurent layer with ε the class of the leading coefficient.
    pub fn square_class(&self, x: &FieldElement) -> Result<FieldElement, FieldError> {
        if self.is_zero(x) {
            return Err(FieldError::ZeroInput);
        }
        Ok(self.square_class_at(x))
    }

    fn square_class_at(&self, x: &FieldElement) -> FieldElement {
        match (x, &*self.base) {
            (FieldElement::Q(a), _) => FieldElement::Q(rational::square_class(a).into()),
            (FieldElement::Gf(a), Base::Gf(g)) => {
                FieldElement::Gf(if g.is_square(*a) { 1 } else { g.nonsquare() })
            }
            (FieldElement::Laurent(m), _) => {
                let (e, c) = m.iter().next().unwrap();
                let mut out = BTreeMap::new();
                out.insert(e.rem_euclid(2), self.square_class_at(c));
                FieldElement::Laurent(out)
            }
            _ => panic!("element shape does not match field {self}"),
        }
    }

    pub fn same_square_class(&self, x: &FieldElement, y: &FieldElement) -> Result<bool, FieldError> {
        Ok(self.square_class(x)? == self.square_class(y)?)
    }

    /// Every canonical square-class representative; finite for towers over
    /// GF(q), where there are 2^(r+1) classes.
    pub fn square_class_reps(&self) -> Result<Vec<FieldElement>, FieldError> {
        let Base::Gf(g) = &*self.base else {
            return Err(FieldError::Unsupported("Q has infinitely many square classes".into()));
        };
        let mut reps = vec![FieldElement::Gf(1), FieldElement::Gf(g.nonsquare())];
        for _ in 0..self.depth() {
            reps = [0, 1]
                .iter()
                .flat_map(|&e| {
                    reps.iter().map(move |r| {
                        let mut m = BTreeMap::new();
                        m.insert(e, r.clone());
                        FieldElement::Laurent(m)
                    })
                })
                .collect();
        }
        Ok(reps)
    }

    // ---- roots of unity ----

    /// A primitive `2^k`-th root of unity, if the field has one.
    pub fn zeta(&self, k: u32) -> Option<FieldElement> {
        let b = match &*self.base {
            Base::Q => match k {
                0 => FieldElement::Q(BigRational::one()),
                1 => FieldElement::Q(-BigRational::one()),
                _ => return None,
            },
            Base::Gf(g) => FieldElement::Gf(g.root_of_unity(k)?),
        };
        Some(self.embed(0, b))
    }

    /// The largest m such that the field contains a primitive 2^m-th root.
    pub fn max_two_power_root(&self) -> u32 {
        match &*self.base {
            Base::Q => 1,
            Base::Gf(g) => two_adic_valuation(g.q() as u64 - 1),
        }
    }

    /// Multiplicative order of a nonzero element, when finite.
    pub fn multiplicative_order(&self, x: &FieldElement) -> Option<u64> {
        if self.is_zero(x) {
            return None;
        }
        let mut cur = x;
        while let FieldElement::Laurent(m) = cur {
            if m.len() != 1 || *m.keys().next().unwrap() != 0 {
                return None;
            }
            cur = m.values().next().unwrap();
        }
        match (cur, &*self.base) {
            (FieldElement::Gf(a), Base::Gf(g)) => Some(g.order(*a)),
            (FieldElement::Q(a), _) if a.is_one() => Some(1),
            (FieldElement::Q(a), _) if (-a).is_one() => Some(2),
            _ => None,
        }
    }

    // ---- text and JSON ----

    pub fn format(&self, x: &FieldElement) -> String {
        self.format_at(self.depth(), x)
    }

    fn format_at(&self, d: usize, x: &FieldElement) -> String {
        match (x, &*self.base) {
            (FieldElement::Q(a), _) => a.to_string(),
            (FieldElement::Gf(a), Base::Gf(g)) if g.k() == 1 => a.to_string(),
            (FieldElement::Gf(a), Base::Gf(g)) => {
                let terms: Vec<String> = g
                    .coefficients(*a)
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| **c != 0)
                    .map(|(i, c)| match (i, c) {
                        (0, c) => c.to_string(),
                        (1, 1) => "w".into(),
                        (1, c) => format!("{c}w"),
                        (i, 1) => format!("w^{i}"),
                        (i, c) => format!("{c}w^{i}"),
                    })
                    .collect();
                if terms.is_empty() {
                    "0".into()
                } else {
                    terms.join("+")
                }
            }
            (FieldElement::Laurent(m), _) => {
                if m.is_empty() {
                    return "0".into();
                }
                let var = &self.vars[d - 1];
                let terms: Vec<String> = m
                    .iter()
                    .map(|(e, c)| {
                        let mut cs = self.format_at(d - 1, c);
                        if cs.contains('+') || cs.contains(' ') {
                            cs = format!("({cs})");
                        }
                        let monom = match e {
                            0 => return cs,
                            1 => var.clone(),
                            e => format!("{var}^{e}"),
                        };
                        if cs == "1" {
                            monom
                        } else {
                            format!("{cs}*{monom}")
                        }
                    })
                    .collect();
                terms.join(" + ")
            }
            _ => format!("{x:?}"),
        }
    }

    pub fn to_json(&self, x: &FieldElement) -> Value {
        match (x, &*self.base) {
            (FieldElement::Q(a), _) => Value::String(a.to_string()),
            (FieldElement::Gf(a), Base::Gf(g)) if g.k() == 1 => Value::from(*a),
            (FieldElement::Gf(a), Base::Gf(g)) => Value::from(g.coefficients(*a)),
            (FieldElement::Laurent(m), _) => {
                Value::Object(m.iter().map(|(e, c)| (e.to_string(), self.to_json(c))).collect())
            }
            _ => Value::Null,
        }
    }

    /// Parses the JSON element encoding: rationals as `"p/q"` strings or
    /// integers, GF(p^k) elements as integers or coefficient lists, Laurent
    /// elements as exponent maps. Constants and variable names are accepted
    /// at every layer.
    pub fn from_json(&self, v: &Value) -> Result<FieldElement, FieldError> {
        self.from_json_at(self.depth(), v)
    }

    /// Parses JSON text, treating text that is not JSON as a bare string.
    pub fn parse(&self, s: &str) -> Result<FieldElement, FieldError> {
        let v = serde_json::from_str(s).unwrap_or_else(|_| Value::String(s.trim().to_string()));
        self.from_json(&v)
    }

    fn from_json_at(&self, d: usize, v: &Value) -> Result<FieldElement, FieldError> {
        if d > 0 {
            if let Value::Object(map) = v {
                let mut out = BTreeMap::new();
                for (k, c) in map {
                    let e: i64 = k
                        .trim()
                        .parse()
                        .map_err(|_| FieldError::Parse(format!("exponent {k:?} is not an integer")))?;
                    let c = self.from_json_at(d - 1, c)?;
                    lp_add_term(self, d, &mut out, e, &c);
                }
                return Ok(FieldElement::Laurent(out));
            }
            if let Value::String(s) = v {
                if let Some(i) = self.vars[..d].iter().position(|x| x == s.trim()) {
                    return Ok(self.sub_field(d).var(i));
                }
            }
            let c = self.from_json_at(d - 1, v)?;
            return Ok(self.sub_field(d).embed(d - 1, c));
        }
        let bad = || FieldError::Parse(format!("{v} is not an element of {}", self.base_field()));
        match (&*self.base, v) {
            (Base::Q, Value::String(s)) => rational::parse(s).map(FieldElement::Q).ok_or_else(bad),
            (Base::Q, Value::Number(n)) => {
                n.as_i64().map(|n| self.base_int(n)).ok_or_else(bad)
            }
            (Base::Gf(g), Value::Number(n)) => n.as_i64().map(|n| FieldElement::Gf(g.from_int(n))).ok_or_else(bad),
            (Base::Gf(g), Value::Array(cs)) => {
                if cs.len() > g.k() as usize {
                    return Err(bad());
                }
                let cs: Option<Vec<u32>> = cs.iter().map(|c| c.as_i64().map(|c| g.from_int(c))).collect();
                Ok(FieldElement::Gf(g.from_coefficients(&cs.ok_or_else(bad)?)))
            }
            (Base::Gf(_), Value::String(s)) => {
                let r = rational::parse(s).ok_or_else(bad)?;
                self.base_field().from_rational(&r)
            }
            _ => Err(bad()),
        }
    }

    fn sub_field(&self, d: usize) -> Field {
        Field { base: self.base.clone(), vars: self.vars[..d].into() }
    }
}

fn lp_add_term(f: &Field, d: usize, m: &mut Lp, e: i64, c: &FieldElement) {
    if f.is_zero_at(d - 1, c) {
        return;
    }
    match m.get_mut(&e) {
        Some(cur) => {
            let s = f.add_at(d - 1, cur, c);
            if f.is_zero_at(d - 1, &s) {
                m.remove(&e);
            } else {
                *cur = s;
            }
        }
        None => {
            m.insert(e, c.clone());
        }
    }
}

/// Rank over GF(2) of the valuation vectors reduced mod 2.
pub fn gamma_mod2_rank(field: &Field, elems: &[FieldElement]) -> Result<usize, FieldError> {
    let r = field.depth();
    if r == 0 {
        return Err(FieldError::Unsupported("valuations need a Laurent layer".into()));
    }
    if r > 64 {
        return Err(FieldError::Unsupported("more than 64 Laurent layers".into()));
    }
    let mut rows: Vec<u64> = Vec::new();
    for x in elems {
        let v = field.valuation_vector(x)?;
        let mut bits: u64 = v
            .0
            .iter()
            .enumerate()
            .filter(|(_, e)| e.rem_euclid(2) == 1)
            .fold(0, |acc, (i, _)| acc | 1 << i);
        for &row in &rows {
            let pivot = 63 - row.leading_zeros();
            if bits >> pivot & 1 == 1 {
                bits ^= row;
            }
        }
        if bits != 0 {
            rows.push(bits);
            rows.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    Ok(rows.len())
}

#[cfg(test)]
mod tests;
