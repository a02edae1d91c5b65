//! Witt classes: finite fields by dimension and discriminant, Laurent layers
//! by splitting into residue forms, Q by local invariants.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};

use crate::field::{rational, Field, FieldElement};

use super::hilbert::{self, Place};
use super::{pfister, FormError, PfisterSign, QForm};

/// Invariants of a rational form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QInvariants {
    pub dim: usize,
    pub signature: i64,
    /// Squarefree representative of `∏ a_i`.
    #[serde(serialize_with = "int_json")]
    pub discriminant: BigInt,
    /// Finite primes where the Hasse invariant is -1.
    #[serde(serialize_with = "ints_json")]
    pub hasse_primes: Vec<BigInt>,
}

fn int_value(n: &BigInt) -> Value {
    n.to_i64().map_or_else(|| Value::String(n.to_string()), Value::from)
}

fn int_json<S: serde::Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    int_value(n).serialize(s)
}

fn ints_json<S: serde::Serializer>(ns: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    ns.iter().map(int_value).collect::<Vec<_>>().serialize(s)
}

impl QInvariants {
    pub fn of(entries: &[BigInt]) -> Self {
        let hasse_primes = hilbert::relevant_places(entries)
            .into_iter()
            .filter_map(|v| match &v {
                Place::Prime(p) if hilbert::hasse(entries, &v) == -1 => Some(p.clone()),
                _ => None,
            })
            .collect();
        QInvariants {
            dim: entries.len(),
            signature: hilbert::signature(entries),
            discriminant: hilbert::discriminant(entries),
            hasse_primes,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WittClass {
    pub field: Field,
    /// Canonical diagonal of the anisotropic part.
    pub anisotropic_diag: Vec<FieldElement>,
    pub witt_index: usize,
    pub invariants: Option<QInvariants>,
}

impl WittClass {
    pub fn anisotropic_dim(&self) -> usize {
        self.anisotropic_diag.len()
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.anisotropic_diag.is_empty()
    }

    /// Same class, regardless of the dimension of the form it came from.
    pub fn same_class(&self, other: &WittClass) -> bool {
        self.field == other.field && self.anisotropic_diag == other.anisotropic_diag
    }

    pub fn kernel(&self) -> QForm {
        QForm { field: self.field.clone(), diag: self.anisotropic_diag.clone() }
    }

    pub fn format(&self) -> String {
        if self.is_hyperbolic() {
            "hyperbolic".into()
        } else {
            self.kernel().format()
        }
    }

    pub fn to_json(&self) -> Value {
        let diag: Vec<Value> = self.anisotropic_diag.iter().map(|x| self.field.to_json(x)).collect();
        let mut v = json!({
            "field": self.field.descriptor(),
            "anisotropic_diag": diag,
            "anisotropic_dim": self.anisotropic_dim(),
            "witt_index": self.witt_index,
            "hyperbolic": self.is_hyperbolic(),
        });
        if let Some(inv) = &self.invariants {
            v["invariants"] = serde_json::to_value(inv).unwrap();
        }
        v
    }
}

fn rational_entries(q: &QForm) -> Vec<BigInt> {
    q.diag
        .iter()
        .map(|x| match x {
            FieldElement::Q(a) => rational::square_class(a),
            _ => unreachable!("rational field holds rational entries"),
        })
        .collect()
}

/// Canonical anisotropic diagonal of a form over a tower.
fn kernel(q: &QForm) -> Result<Vec<FieldElement>, FormError> {
    let f = &q.field;
    if f.characteristic() == 2 {
        return Err(FormError::CharacteristicTwo);
    }
    if f.depth() > 0 {
        return laurent_kernel(q);
    }
    if f.is_rational_base() {
        return rational_kernel(&rational_entries(q)).map(|xs| {
            xs.into_iter().map(|b| FieldElement::Q(BigRational::from_integer(b))).collect()
        });
    }
    Ok(finite_kernel(q))
}

/// Over GF(q) the class is fixed by the parity of the dimension and the
/// signed discriminant `d = (-1)^(n(n-1)/2) ∏ a_i`.
fn finite_kernel(q: &QForm) -> Vec<FieldElement> {
    let f = &q.field;
    let n = q.dim();
    let mut d = f.product(&q.diag);
    if (n * n.saturating_sub(1) / 2) % 2 == 1 {
        d = f.neg(&d);
    }
    if n == 0 {
        return Vec::new();
    }
    let class = |x: &FieldElement| f.square_class(x).expect("nonzero");
    if n % 2 == 1 {
        return vec![class(&d)];
    }
    if f.is_square(&d).expect("nonzero") {
        Vec::new()
    } else {
        vec![f.one(), class(&f.neg(&d))]
    }
}

/// Splits by the parity of the valuation in the outermost variable: writing
/// each entry as `X^e (c + higher terms)`, the class of the entry is that of
/// `X^(e mod 2) c`, and the form is anisotropic exactly when both residue
/// forms are.
fn laurent_kernel(q: &QForm) -> Result<Vec<FieldElement>, FormError> {
    let f = &q.field;
    let res = f.residue_field().expect("Laurent layer");
    let top = f.depth() - 1;
    let mut even = Vec::new();
    let mut odd = Vec::new();
    for a in &q.diag {
        let (e, c) = f.leading(a)?;
        if e.rem_euclid(2) == 0 {
            even.push(c);
        } else {
            odd.push(c);
        }
    }
    let k0 = kernel(&QForm { field: res.clone(), diag: even })?;
    let k1 = kernel(&QForm { field: res.clone(), diag: odd })?;
    let x = f.var(top);
    let mut out: Vec<FieldElement> = k0.into_iter().map(|c| f.embed(top, c)).collect();
    out.extend(k1.into_iter().map(|c| f.mul(&x, &f.embed(top, c))));
    Ok(out)
}

const RATIONAL_SEARCH_BOUND: i64 = 1_000_000;

fn squarefree_candidates() -> impl Iterator<Item = BigInt> {
    (1..=RATIONAL_SEARCH_BOUND)
        .filter(|&m| {
            let mut d = 2i64;
            while d * d <= m {
                if m % (d * d) == 0 {
                    return false;
                }
                d += 1;
            }
            true
        })
        .flat_map(|m| [BigInt::from(m), BigInt::from(-m)])
}

/// Anisotropic part over Q, built greedily: the first squarefree `b` (by
/// absolute value, positive first) represented by the kernel is split off,
/// then the rest recursively. Depends only on the Witt class.
fn rational_kernel(entries: &[BigInt]) -> Result<Vec<BigInt>, FormError> {
    let mut cur: Vec<BigInt> = entries.to_vec();
    let mut k = hilbert::anisotropic_dim(&cur);
    let mut out = Vec::new();
    while k > 0 {
        if k == 1 {
            // cur ~ ⟨b⟩ forces disc(cur) = b · (-1)^((n-1)/2).
            let m = (cur.len() - 1) / 2;
            let mut b = hilbert::discriminant(&cur);
            if m % 2 == 1 {
                b = -b;
            }
            out.push(b);
            break;
        }
        let found = squarefree_candidates().find(|b| {
            let mut next = cur.clone();
            next.push(-b);
            hilbert::anisotropic_dim(&next) == k - 1
        });
        let b = found.ok_or_else(|| {
            FormError::Unsupported(format!("no represented value of height ≤ {RATIONAL_SEARCH_BOUND}"))
        })?;
        cur.push(-&b);
        out.push(b);
        k -= 1;
    }
    Ok(out)
}

pub fn witt_decompose(q: &QForm) -> Result<WittClass, FormError> {
    let diag = kernel(q)?;
    let witt_index = (q.dim() - diag.len()) / 2;
    let invariants = (q.field.depth() == 0 && q.field.is_rational_base()).then(|| {
        let ints: Vec<BigInt> = diag
            .iter()
            .map(|x| match x {
                FieldElement::Q(a) => a.numer().clone(),
                _ => unreachable!(),
            })
            .collect();
        QInvariants::of(&ints)
    });
    Ok(WittClass { field: q.field.clone(), anisotropic_diag: diag, witt_index, invariants })
}

pub fn is_hyperbolic(q: &QForm) -> Result<bool, FormError> {
    if q.field.depth() == 0 && q.field.is_rational_base() {
        return Ok(hilbert::is_hyperbolic(&rational_entries(q)));
    }
    Ok(witt_decompose(q)?.is_hyperbolic())
}

pub fn anisotropic_dim(q: &QForm) -> Result<usize, FormError> {
    if q.field.depth() == 0 && q.field.is_rational_base() {
        return Ok(hilbert::anisotropic_dim(&rational_entries(q)));
    }
    Ok(witt_decompose(q)?.anisotropic_dim())
}

/// `q1 ⊥ (-q2)` hyperbolic.
pub fn witt_equivalent(q1: &QForm, q2: &QForm) -> Result<bool, FormError> {
    if q1.field != q2.field {
        return Err(FormError::Precondition("forms over different fields".into()));
    }
    is_hyperbolic(&q1.perp(&q2.negate()))
}

pub fn is_isotropic(q: &QForm) -> Result<bool, FormError> {
    if q.field.depth() == 0 && q.field.is_rational_base() {
        return Ok(hilbert::is_isotropic(&rational_entries(q)));
    }
    Ok(anisotropic_dim(q)? < q.dim())
}

/// Isotropy of `≪a_1, ..., a_r≫`, asserted to coincide with hyperbolicity.
pub fn pfister_isotropic(f: &Field, slots: &[FieldElement]) -> Result<bool, FormError> {
    let q = pfister(f, slots, PfisterSign::Minus)?;
    let iso = is_isotropic(&q)?;
    let hyp = is_hyperbolic(&q)?;
    assert_eq!(iso, hyp, "Pfister form {} isotropic but not hyperbolic", q.format());
    Ok(iso)
}
