//! Trace forms `x ↦ tr(x²)` of explicit étale algebras: power bases of
//! monic polynomials, multiquadratic algebras, and the Kummer towers
//! carrying an action of the modular group M(2^n).

use serde_json::{json, Value};

use crate::field::{gamma_mod2_rank, Field, FieldElement};
use crate::group::{build_group, frattini, PresentationSpec};

use super::matrix;
use super::witt::{witt_decompose, witt_equivalent, WittClass};
use super::{pfister, scaled_pfister, FormError, GramMatrix, PfisterSign, QForm};

/// Polynomial with coefficients listed from the constant term up.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    pub coeffs: Vec<FieldElement>,
}

impl Polynomial {
    pub fn from_ints(f: &Field, coeffs: &[i64]) -> Self {
        Polynomial { coeffs: coeffs.iter().map(|&c| f.from_int(c)).collect() }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Parses `x^4 - 4x^2 + 2` style text in the variable `x`; coefficients
    /// are integers or fractions.
    pub fn parse(f: &Field, s: &str) -> Result<Self, FormError> {
        let bad = |m: &str| FormError::Parse(format!("polynomial {s:?}: {m}"));
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if text.is_empty() {
            return Err(bad("empty"));
        }
        let mut terms = Vec::new();
        let mut start = 0;
        for (i, c) in text.char_indices() {
            if (c == '+' || c == '-') && i > 0 && !text[..i].ends_with('^') {
                terms.push(&text[start..i]);
                start = i;
            }
        }
        terms.push(&text[start..]);
        let mut coeffs: Vec<FieldElement> = Vec::new();
        for t in terms {
            let (neg, body) = match t.strip_prefix('-') {
                Some(b) => (true, b),
                None => (false, t.strip_prefix('+').unwrap_or(t)),
            };
            let (c, e) = match body.find('x') {
                None => (body, 0usize),
                Some(i) => {
                    let c = body[..i].trim_end_matches('*');
                    let rest = &body[i + 1..];
                    let e = if rest.is_empty() {
                        1
                    } else {
                        rest.strip_prefix('^').and_then(|r| r.parse().ok()).ok_or_else(|| bad("bad exponent"))?
                    };
                    (if c.is_empty() { "1" } else { c }, e)
                }
            };
            let mut c = f.parse(c).map_err(|_| bad("bad coefficient"))?;
            if neg {
                c = f.neg(&c);
            }
            if coeffs.len() <= e {
                coeffs.resize(e + 1, f.zero());
            }
            coeffs[e] = f.add(&coeffs[e], &c);
        }
        while coeffs.len() > 1 && f.is_zero(coeffs.last().unwrap()) {
            coeffs.pop();
        }
        Ok(Polynomial { coeffs })
    }
}

/// Power sums `p_0, ..., p_m` of the roots of a monic polynomial, from
/// Newton's identities without division.
pub fn power_sums(f: &Field, poly: &Polynomial, m: usize) -> Vec<FieldElement> {
    let n = poly.degree();
    // f = x^n + c_1 x^(n-1) + ... + c_n
    let c = |i: usize| &poly.coeffs[n - i];
    let mut p = vec![f.from_int(n as i64)];
    for k in 1..=m {
        let mut acc = f.zero();
        for i in 1..=k.min(n) {
            if i < k {
                acc = f.add(&acc, &f.mul(c(i), &p[k - i]));
            }
        }
        if k <= n {
            acc = f.add(&acc, &f.mul_int(c(k), k as i64));
        }
        p.push(f.neg(&acc));
    }
    p
}

/// Gram matrix `tr(x^(i+j))` of the trace form on the power basis of
/// `K[x]/(f)`.
pub fn trace_form_from_poly(f: &Field, poly: &Polynomial) -> Result<GramMatrix, FormError> {
    if f.characteristic() == 2 {
        return Err(FormError::CharacteristicTwo);
    }
    let n = poly.degree();
    if n == 0 {
        return Err(FormError::Precondition("polynomial must have degree at least 1".into()));
    }
    for c in &poly.coeffs {
        f.validate(c)?;
    }
    if !f.is_one(&poly.coeffs[n]) {
        return Err(FormError::Precondition("polynomial must be monic".into()));
    }
    let p = power_sums(f, poly, 2 * n - 2);
    let entries = (0..n).map(|i| (0..n).map(|j| p[i + j].clone()).collect()).collect();
    let g = GramMatrix { field: f.clone(), entries };
    if !g.is_nondegenerate() {
        return Err(FormError::Precondition("polynomial is not separable (zero discriminant)".into()));
    }
    Ok(g)
}

/// Trace form of `K[x_1..x_r]/(x_i² - a_i)` on the monomial basis, with traces
/// taken from the regular representation. When `ζ_4 ∈ K` the result is
/// asserted Witt-equivalent to `⟨2^r⟩ ⊗ ≪a_1, ..., a_r≫`.
pub fn trace_form_multiquadratic(f: &Field, slots: &[FieldElement]) -> Result<QForm, FormError> {
    if f.characteristic() == 2 {
        return Err(FormError::CharacteristicTwo);
    }
    for a in slots {
        f.validate(a)?;
        if f.is_zero(a) {
            return Err(FormError::ZeroEntry);
        }
    }
    let r = slots.len();
    let dim = 1usize << r;
    // x^e x^d = (∏_{i ∈ e∧d} a_i) x^(e xor d)
    let mul_basis = |e: usize, d: usize| -> (FieldElement, usize) {
        let c = f.product((0..r).filter(|i| (e & d) >> i & 1 == 1).map(|i| &slots[i]));
        (c, e ^ d)
    };
    let trace = |y: &[FieldElement]| -> FieldElement {
        let mut t = f.zero();
        for b in 0..dim {
            for (g, yg) in y.iter().enumerate() {
                if f.is_zero(yg) {
                    continue;
                }
                let (c, idx) = mul_basis(g, b);
                if idx == b {
                    t = f.add(&t, &f.mul(yg, &c));
                }
            }
        }
        t
    };
    let mut diag = Vec::with_capacity(dim);
    for e in 0..dim {
        for d in 0..dim {
            let (c, idx) = mul_basis(e, d);
            let mut y = vec![f.zero(); dim];
            y[idx] = c;
            let t = trace(&y);
            if e == d {
                diag.push(t);
            } else {
                assert!(f.is_zero(&t), "monomial basis must be orthogonal");
            }
        }
    }
    let q = QForm::new(f, diag)?;
    if f.zeta(2).is_some() {
        let reference = scaled_pfister(f, &f.from_int(dim as i64), slots, PfisterSign::Minus)?;
        assert!(
            witt_equivalent(&q, &reference)?,
            "multiquadratic trace form {} differs from {}",
            q.format(),
            reference.format()
        );
    }
    Ok(q)
}

/// K-linear map on a basis, each basis vector sent to a multiple of another.
#[derive(Clone, Debug, PartialEq)]
struct MonomialMap {
    image: Vec<(usize, FieldElement)>,
}

impl MonomialMap {
    fn identity(f: &Field, dim: usize) -> Self {
        MonomialMap { image: (0..dim).map(|i| (i, f.one())).collect() }
    }

    /// `self ∘ other`.
    fn compose(&self, f: &Field, other: &MonomialMap) -> Self {
        MonomialMap {
            image: other
                .image
                .iter()
                .map(|(j, c)| {
                    let (k, d) = &self.image[*j];
                    (*k, f.mul(c, d))
                })
                .collect(),
        }
    }

    fn apply(&self, f: &Field, x: &[FieldElement]) -> Vec<FieldElement> {
        let mut out = vec![f.zero(); x.len()];
        for (i, xi) in x.iter().enumerate() {
            if !f.is_zero(xi) {
                let (j, c) = &self.image[i];
                out[*j] = f.add(&out[*j], &f.mul(xi, c));
            }
        }
        out
    }

    fn matrix(&self, f: &Field) -> matrix::Matrix {
        let n = self.image.len();
        let mut m = matrix::zeros(f, n, n);
        for (i, (j, c)) in self.image.iter().enumerate() {
            m[*j][i] = c.clone();
        }
        m
    }
}

/// The étale algebra `L = K[β, α]/(β² - z, α^N - a)` with `N = 2^(n-1)` and
/// `z` a primitive `2^(n-2)`-th root of unity, acted on by
/// `σ: α ↦ βα, β ↦ β` and `τ: α ↦ α, β ↦ -β`. Basis `β^j α^k` has index
/// `j·N + k`.
#[derive(Clone, Debug)]
pub struct KummerTower {
    pub field: Field,
    pub n: u32,
    pub a: FieldElement,
    pub z: FieldElement,
    big_n: usize,
    sigma: MonomialMap,
    tau: MonomialMap,
    /// `σ^u τ^v` at index `v·N + u`.
    group: Vec<MonomialMap>,
}

impl KummerTower {
    /// Builds the algebra for any nonzero `a`; split algebras are allowed.
    pub fn new(f: &Field, n: u32, a: &FieldElement) -> Result<Self, FormError> {
        if n < 4 {
            return Err(FormError::Precondition(format!("n = {n} must be at least 4")));
        }
        if f.characteristic() == 2 {
            return Err(FormError::CharacteristicTwo);
        }
        f.validate(a)?;
        if f.is_zero(a) {
            return Err(FormError::ZeroEntry);
        }
        if f.max_two_power_root() != n - 2 {
            return Err(FormError::Precondition(format!(
                "{f} contains exactly the 2^{}-th roots of unity, need 2^{}",
                f.max_two_power_root(),
                n - 2
            )));
        }
        let z = f.zeta(n - 2).expect("root profile checked");
        let big_n = 1usize << (n - 1);
        let mut t = KummerTower {
            field: f.clone(),
            n,
            a: a.clone(),
            z,
            big_n,
            sigma: MonomialMap::identity(f, 2 * big_n),
            tau: MonomialMap::identity(f, 2 * big_n),
            group: Vec::new(),
        };
        t.sigma = MonomialMap {
            image: (0..2 * big_n)
                .map(|idx| {
                    let (j, k) = (idx / big_n, idx % big_n);
                    t.beta_power(j + k, k)
                })
                .collect(),
        };
        t.tau = MonomialMap {
            image: (0..2 * big_n)
                .map(|idx| (idx, if idx >= big_n { f.from_int(-1) } else { f.one() }))
                .collect(),
        };
        t.verify_action()?;
        let mut powers = vec![MonomialMap::identity(f, 2 * big_n)];
        for u in 1..big_n {
            powers.push(t.sigma.compose(f, &powers[u - 1]));
        }
        t.group = (0..2)
            .flat_map(|v| {
                let tv = if v == 0 { MonomialMap::identity(f, 2 * big_n) } else { t.tau.clone() };
                powers.iter().map(move |s| s.compose(f, &tv)).collect::<Vec<_>>()
            })
            .collect();
        for i in 0..t.group.len() {
            for j in 0..i {
                assert_ne!(t.group[i], t.group[j], "automorphisms must be distinct");
            }
        }
        Ok(t)
    }

    pub fn dim(&self) -> usize {
        2 * self.big_n
    }

    /// `β^m α^k` as (basis index, scalar).
    fn beta_power(&self, m: usize, k: usize) -> (usize, FieldElement) {
        let f = &self.field;
        let c = f.pow(&self.z, (m / 2) as u64);
        ((m % 2) * self.big_n + k, c)
    }

    /// Product of two basis elements.
    fn mul_basis(&self, i: usize, j: usize) -> (usize, FieldElement) {
        let f = &self.field;
        let (ji, ki) = (i / self.big_n, i % self.big_n);
        let (jj, kj) = (j / self.big_n, j % self.big_n);
        let mut k = ki + kj;
        let mut c = f.one();
        if k >= self.big_n {
            k -= self.big_n;
            c = self.a.clone();
        }
        let (idx, zc) = self.beta_power(ji + jj, k);
        (idx, f.mul(&c, &zc))
    }

    pub fn mul(&self, x: &[FieldElement], y: &[FieldElement]) -> Vec<FieldElement> {
        let f = &self.field;
        let mut out = vec![f.zero(); self.dim()];
        for (i, xi) in x.iter().enumerate() {
            if f.is_zero(xi) {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if f.is_zero(yj) {
                    continue;
                }
                let (k, c) = self.mul_basis(i, j);
                out[k] = f.add(&out[k], &f.mul(&f.mul(xi, yj), &c));
            }
        }
        out
    }

    fn basis_vector(&self, i: usize) -> Vec<FieldElement> {
        let f = &self.field;
        let mut v = vec![f.zero(); self.dim()];
        v[i] = f.one();
        v
    }

    /// Checks that σ and τ are algebra automorphisms satisfying
    /// `σ^N = τ² = 1` and `τστ = σ^(1 + N/2)`.
    fn verify_action(&self) -> Result<(), FormError> {
        let f = &self.field;
        let dim = self.dim();
        for g in [&self.sigma, &self.tau] {
            for i in 0..dim {
                for j in 0..dim {
                    let (k, c) = self.mul_basis(i, j);
                    let mut prod = vec![f.zero(); dim];
                    prod[k] = c;
                    let lhs = g.apply(f, &prod);
                    let rhs = self.mul(&g.apply(f, &self.basis_vector(i)), &g.apply(f, &self.basis_vector(j)));
                    if lhs != rhs {
                        return Err(FormError::Precondition("action is not multiplicative".into()));
                    }
                }
            }
        }
        let id = MonomialMap::identity(f, dim);
        let mut s = id.clone();
        for _ in 0..self.big_n {
            s = self.sigma.compose(f, &s);
        }
        let mut s_half = id.clone();
        for _ in 0..1 + self.big_n / 2 {
            s_half = self.sigma.compose(f, &s_half);
        }
        let tst = self.tau.compose(f, &self.sigma.compose(f, &self.tau));
        if s != id || self.tau.compose(f, &self.tau) != id || tst != s_half {
            return Err(FormError::Precondition("action violates the M(2^n) relations".into()));
        }
        Ok(())
    }

    /// `Σ_{g} g(x)` over the given automorphisms, checked to lie in K.
    fn trace_over(&self, maps: &[&MonomialMap], x: &[FieldElement]) -> FieldElement {
        let f = &self.field;
        let mut acc = vec![f.zero(); self.dim()];
        for g in maps {
            for (s, t) in acc.iter_mut().zip(g.apply(f, x)) {
                *s = f.add(s, &t);
            }
        }
        assert!(acc[1..].iter().all(|c| f.is_zero(c)), "trace must lie in the base field");
        acc.swap_remove(0)
    }

    pub fn trace(&self, x: &[FieldElement]) -> FieldElement {
        let all: Vec<&MonomialMap> = self.group.iter().collect();
        self.trace_over(&all, x)
    }

    /// Trace form of L/K on the basis `β^j α^k`.
    pub fn gram(&self) -> GramMatrix {
        let f = &self.field;
        let dim = self.dim();
        let mut entries = matrix::zeros(f, dim, dim);
        for i in 0..dim {
            for j in i..dim {
                let (k, c) = self.mul_basis(i, j);
                let mut prod = vec![f.zero(); dim];
                prod[k] = c;
                let t = self.trace(&prod);
                entries[i][j] = t.clone();
                entries[j][i] = t;
            }
        }
        GramMatrix { field: f.clone(), entries }
    }

    /// Fixed subalgebra of `H = ⟨σ^(2^j)⟩` and its trace form over K, traces
    /// summed over the cosets `σ^u τ^v H`, `u < 2^j`.
    pub fn fixed_trace_form(&self, j: u32) -> Result<(Vec<Vec<FieldElement>>, GramMatrix), FormError> {
        let f = &self.field;
        let step = 1usize << j;
        if step > self.big_n {
            return Err(FormError::Precondition(format!("σ^{step} is beyond the order of σ")));
        }
        let h = &self.group[step % self.big_n];
        let fixed = matrix::kernel(f, &matrix::sub(f, &h.matrix(f), &matrix::identity(f, self.dim())), self.dim());
        let reps: Vec<&MonomialMap> =
            (0..2).flat_map(|v| (0..step).map(move |u| v * self.big_n + u)).map(|i| &self.group[i]).collect();
        let entries = fixed
            .iter()
            .map(|x| fixed.iter().map(|y| self.trace_over(&reps, &self.mul(x, y))).collect())
            .collect();
        Ok((fixed, GramMatrix { field: f.clone(), entries }))
    }

    pub fn basis_label(&self, i: usize) -> String {
        let (j, k) = (i / self.big_n, i % self.big_n);
        match (j, k) {
            (0, 0) => "1".into(),
            (1, 0) => "β".into(),
            (0, 1) => "α".into(),
            (1, 1) => "βα".into(),
            (0, k) => format!("α^{k}"),
            (_, k) => format!("βα^{k}"),
        }
    }
}

/// Gram matrix of the trace form of the M(2^n)-Galois extension
/// `K(ζ_{2^(n-1)}, a^(1/2^(n-1)))` of K.
pub fn trace_form_kummer_tower(f: &Field, n: u32, a: &FieldElement) -> Result<GramMatrix, FormError> {
    if f.is_zero(a) {
        return Err(FormError::ZeroEntry);
    }
    if f.max_two_power_root() != n.saturating_sub(2) {
        return Err(FormError::Precondition(format!(
            "root-of-unity profile mismatch: {f} has 2^{}-th roots, need exactly 2^{}",
            f.max_two_power_root(),
            n.saturating_sub(2)
        )));
    }
    let z = f.zeta(n - 2).expect("root profile checked");
    if f.is_square(a)? || f.is_square(&f.mul(a, &z))? {
        return Err(FormError::Precondition(format!(
            "{} is a square in K′ = K(ζ_{})",
            f.format(a),
            1u64 << (n - 1)
        )));
    }
    Ok(KummerTower::new(f, n, a)?.gram())
}

/// An extension whose trace form and Frattini-fixed subalgebra are
/// computable.
#[derive(Clone, Debug)]
pub enum ExtensionSpec {
    Multiquadratic { field: Field, slots: Vec<FieldElement> },
    Kummer { field: Field, n: u32, a: FieldElement },
}

#[derive(Clone, Debug)]
pub struct Cor22Report {
    pub frattini_order: usize,
    pub full: WittClass,
    pub scaled_fixed: WittClass,
    /// `(j, holds)` for `H = ⟨σ^(2^j)⟩`, comparing `q_{L^H/K}` with
    /// `⟨[Fr:H]⟩ ⊗ q_{L^Fr/K}`.
    pub intermediate: Vec<(u32, bool)>,
}

impl Cor22Report {
    pub fn holds(&self) -> bool {
        self.full.same_class(&self.scaled_fixed) && self.intermediate.iter().all(|(_, ok)| *ok)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "frattini_order": self.frattini_order,
            "full": self.full.to_json(),
            "scaled_fixed": self.scaled_fixed.to_json(),
            "intermediate": self.intermediate.iter().map(|(j, ok)| json!({"j": j, "holds": ok})).collect::<Vec<_>>(),
            "holds": self.holds(),
        })
    }
}

/// Compares `q_{L/K}` with `⟨|Fr G|⟩ ⊗ q_{L^Fr/K}`, and for Kummer towers also
/// every intermediate `L^H` with `H ⊆ Fr G`.
pub fn corollary22_check(ext: &ExtensionSpec) -> Result<Cor22Report, FormError> {
    match ext {
        ExtensionSpec::Multiquadratic { field, slots } => {
            let q = trace_form_multiquadratic(field, slots)?;
            let full = witt_decompose(&q)?;
            // elementary abelian: Fr G = 1 and L^Fr = L
            let scaled_fixed = witt_decompose(&q.scale(&field.one()))?;
            Ok(Cor22Report { frattini_order: 1, full, scaled_fixed, intermediate: Vec::new() })
        }
        ExtensionSpec::Kummer { field, n, a } => {
            let f = field;
            let t = KummerTower::new(f, *n, a)?;
            let g = build_group(&PresentationSpec::ModularM2n { n: *n })?;
            let fr = frattini(&g)?.order();
            assert_eq!(fr, t.big_n / 2, "Frattini subgroup of M(2^n) is ⟨σ²⟩");
            let (full_q, _) = super::diagonalize(&t.gram())?;
            let full = witt_decompose(&full_q)?;
            let (_, fixed_gram) = t.fixed_trace_form(1)?;
            assert_eq!(fixed_gram.dim(), 4, "L^Fr is the biquadratic subalgebra");
            let (fixed_q, _) = super::diagonalize(&fixed_gram)?;
            let scaled_fixed = witt_decompose(&fixed_q.scale(&f.from_int(fr as i64)))?;
            let mut intermediate = Vec::new();
            for j in 2..*n {
                let (_, gram) = t.fixed_trace_form(j)?;
                let (qh, _) = super::diagonalize(&gram)?;
                let index = 1i64 << (j - 1);
                let ok = witt_equivalent(&qh, &fixed_q.scale(&f.from_int(index)))?;
                intermediate.push((j, ok));
            }
            Ok(Cor22Report { frattini_order: fr, full, scaled_fixed, intermediate })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WadsworthVerdict {
    pub independent: bool,
    pub pfister_hyperbolic: bool,
    pub anisotropic_dim: usize,
}

/// Valuation independence of `a_1..a_r` against hyperbolicity of
/// `≪a_1, ..., a_r, ζ_{2^s}≫`; independence must force anisotropy.
pub fn wadsworth_criterion(f: &Field, slots: &[FieldElement], s: u32) -> Result<WadsworthVerdict, FormError> {
    if f.depth() == 0 {
        return Err(FormError::Precondition("needs a Laurent tower".into()));
    }
    if slots.len() > f.depth() {
        return Err(FormError::Precondition(format!(
            "{} slots exceed the {} Laurent layers",
            slots.len(),
            f.depth()
        )));
    }
    let zeta = f.zeta(s).ok_or_else(|| FormError::Precondition(format!("ζ_{} is missing from {f}", 1u64 << s)))?;
    if f.zeta(s + 1).is_some() {
        return Err(FormError::Precondition(format!(
            "ζ_{} ∈ {f}, so ζ_{} is a square",
            1u64 << (s + 1),
            1u64 << s
        )));
    }
    let independent = gamma_mod2_rank(f, slots)? == slots.len();
    let mut all = slots.to_vec();
    all.push(zeta);
    let class = witt_decompose(&pfister(f, &all, PfisterSign::Minus)?)?;
    let v = WadsworthVerdict {
        independent,
        pfister_hyperbolic: class.is_hyperbolic(),
        anisotropic_dim: class.anisotropic_dim(),
    };
    assert!(!(v.independent && v.pfister_hyperbolic), "independent valuations must give a non-hyperbolic form");
    Ok(v)
}
