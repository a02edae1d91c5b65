//! Predicting hyperbolicity of trace forms from the Sylow 2-subgroup and a
//! declared profile of the base field, with the explicit computations of
//! [`crate::form`] as a cross-check.

use std::fmt;

use serde::{Deserialize, Serialize, Serializer};
use serde_json::{json, Value};

use crate::field::{Field, FieldDescriptor, FieldElement, FieldError};
use crate::form::{
    diagonalize, pfister, scaled_pfister, trace_form_kummer_tower, witt_decompose, witt_equivalent, FormError,
    PfisterSign, QForm, WittClass,
};
use crate::group::{all_subgroups, frattini_rank, sylow2, GroupError, GroupTable};
use crate::iwasawa::thm2_classify;

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("inconsistent field profile: {0}")]
    Profile(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

/// What is known about the base field. `c_i_level` and `cd2_bound` are
/// declared facts; nothing here computes them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldProfile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub descriptor: Option<FieldDescriptor>,
    /// Largest k with a primitive `2^k`-th root of unity in the field.
    pub m: u32,
    #[serde(default)]
    pub is_number_field: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_i_level: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cd2_bound: Option<u32>,
}

impl FieldProfile {
    pub fn declared(m: u32) -> Self {
        FieldProfile { descriptor: None, m, is_number_field: false, c_i_level: None, cd2_bound: None }
    }

    pub fn of_field(f: &Field) -> Self {
        FieldProfile { descriptor: Some(f.descriptor()), ..FieldProfile::declared(f.max_two_power_root()) }
    }

    pub fn with_c_i(mut self, i: u32) -> Self {
        self.c_i_level = Some(i);
        self
    }

    pub fn with_cd2(mut self, b: u32) -> Self {
        self.cd2_bound = Some(b);
        self
    }

    pub fn number_field(mut self) -> Self {
        self.is_number_field = true;
        self
    }

    pub fn validate(&self) -> Result<(), OracleError> {
        if let Some(d) = &self.descriptor {
            let f = Field::new(d)?;
            if f.max_two_power_root() != self.m {
                return Err(OracleError::Profile(format!(
                    "declared m = {} but {f} contains exactly the 2^{}-th roots of unity",
                    self.m,
                    f.max_two_power_root()
                )));
            }
        }
        if self.m < 2 {
            return Err(OracleError::Profile(format!("m = {} but a primitive 4th root of unity is required", self.m)));
        }
        Ok(())
    }
}

/// A group exponent, or the value for abelian groups.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Exponent {
    Finite(usize),
    Infinite,
}

impl Exponent {
    /// `log2` of a finite exponent.
    pub fn log2(self) -> Option<u32> {
        match self {
            Exponent::Finite(e) => Some(e.trailing_zeros()),
            Exponent::Infinite => None,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(e) => write!(f, "{e}"),
            Exponent::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(e) => s.serialize_u64(*e as u64),
            Exponent::Infinite => s.serialize_str("inf"),
        }
    }
}

/// Smallest exponent of a non-abelian subgroup of the 2-group `s`.
pub fn theorem0_e(s: &GroupTable) -> Result<Exponent, OracleError> {
    if !s.is_two_group() {
        return Err(GroupError::NotTwoGroup(s.order()).into());
    }
    if s.is_abelian() {
        return Ok(Exponent::Infinite);
    }
    let e = all_subgroups(s)?
        .iter()
        .filter(|h| !s.is_abelian_subgroup(h))
        .map(|h| s.exponent_of(h))
        .min()
        .expect("the whole group is non-abelian");
    Ok(Exponent::Finite(e))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rule {
    Thm0,
    Thm2,
    #[serde(rename = "Prop8.1a")]
    Prop81a,
    #[serde(rename = "Prop8.1b")]
    Prop81b,
    #[serde(rename = "Prop8.1c")]
    Prop81c,
    #[serde(rename = "Prop8.2")]
    Prop82,
    #[serde(rename = "none")]
    None,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::Thm0 => "Thm0",
            Rule::Thm2 => "Thm2",
            Rule::Prop81a => "Prop8.1a",
            Rule::Prop81b => "Prop8.1b",
            Rule::Prop81c => "Prop8.1c",
            Rule::Prop82 => "Prop8.2",
            Rule::None => "none",
        }
    }
}

/// `⟨scale⟩ ⊗ (r-fold Pfister form)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Shape {
    pub scale: usize,
    pub pfister_rank: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Prediction {
    pub hyperbolic_forced: bool,
    pub rule_fired: Rule,
    pub provenance: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shape: Option<Shape>,
    pub sylow_order: usize,
    pub sylow_abelian: bool,
    pub frattini_rank: u32,
    pub theorem0_e: Exponent,
}

impl Prediction {
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("prediction serializes")
    }
}

/// Runs the rules in a fixed order and reports the first one that forces
/// every trace form of a G-Galois algebra to be hyperbolic. Simplicity of
/// `g` is the caller's declaration.
pub fn predict(g: &GroupTable, profile: &FieldProfile, declared_simple: bool) -> Result<Prediction, OracleError> {
    profile.validate()?;
    let (s, _) = g.subgroup_table(&sylow2(g));
    let r = frattini_rank(&s)?;
    let e = theorem0_e(&s)?;
    let m = profile.m;
    let abelian = s.is_abelian();
    let report = thm2_classify(&s, m)?;

    let thm0 = !abelian && e.log2().is_some_and(|k| m >= k);
    if thm0 {
        assert!(!report.cond_c, "a non-abelian subgroup of exponent dividing 2^m must break condition (c)");
    }
    let below_rank = |b: Option<u32>| b.is_some_and(|b| b < r);
    let fired = if thm0 {
        Some((Rule::Thm0, format!("Thm0: S has a non-abelian subgroup of exponent {e} and K contains ζ_{e}")))
    } else if !report.cond_c {
        Some((Rule::Thm2, format!("Thm2: condition (c) fails for S at m = {m}")))
    } else if below_rank(profile.c_i_level) {
        Some((Rule::Prop81a, format!("Prop8.1a: K is C_{} and r = {r}", profile.c_i_level.unwrap())))
    } else if below_rank(profile.cd2_bound) {
        Some((Rule::Prop81b, format!("Prop8.1b: cd_2 K ≤ {} and r = {r}", profile.cd2_bound.unwrap())))
    } else if profile.is_number_field && r >= 3 {
        Some((Rule::Prop81c, format!("Prop8.1c: K is a number field and r = {r} ≥ 3")))
    } else if declared_simple && !abelian {
        Some((Rule::Prop82, "Prop8.2: G is simple with non-abelian Sylow 2-subgroup".to_string()))
    } else {
        None
    };
    let base = Prediction {
        hyperbolic_forced: fired.is_some(),
        rule_fired: Rule::None,
        provenance: String::new(),
        shape: None,
        sylow_order: s.order(),
        sylow_abelian: abelian,
        frattini_rank: r,
        theorem0_e: e,
    };
    Ok(match fired {
        Some((rule, provenance)) => Prediction { rule_fired: rule, provenance, ..base },
        None => Prediction {
            provenance: format!("Thm1: q ≃ ⟨{}⟩ ⊗ (a {r}-fold Pfister form)", s.order()),
            shape: Some(Shape { scale: s.order(), pfister_rank: r }),
            ..base
        },
    })
}

/// Slots `[a_1..a_r]` with `q ≃ ⟨scale⟩ ⊗ ≪a_1..a_r≫`, searched over the
/// square classes of a tower over GF(q).
pub fn match_pfister_shape(q: &QForm, scale: usize, r: u32) -> Result<Option<Vec<FieldElement>>, OracleError> {
    let f = &q.field;
    let reps = f.square_class_reps()?;
    let c = f.from_int(scale as i64);
    let mut idx = vec![0usize; r as usize];
    loop {
        let slots: Vec<FieldElement> = idx.iter().map(|&i| reps[i].clone()).collect();
        if witt_equivalent(q, &scaled_pfister(f, &c, &slots, PfisterSign::Minus)?)? {
            return Ok(Some(slots));
        }
        let Some(pos) = idx.iter().position(|&i| i + 1 < reps.len()) else {
            return Ok(None);
        };
        for i in &mut idx[..pos] {
            *i = 0;
        }
        idx[pos] += 1;
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ObstructionVerdict {
    pub frattini_rank: u32,
    pub e: usize,
    pub pfister: QForm,
    pub pfister_hyperbolic: bool,
}

impl ObstructionVerdict {
    pub fn unsolvable(&self) -> bool {
        !self.pfister_hyperbolic
    }

    pub fn message(&self) -> &'static str {
        if self.unsolvable() {
            "embedding problem unsolvable"
        } else {
            "no obstruction from Prop 8.3"
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "frattini_rank": self.frattini_rank,
            "e": self.e,
            "pfister": self.pfister.to_json(),
            "pfister_hyperbolic": self.pfister_hyperbolic,
            "unsolvable": self.unsolvable(),
            "verdict": self.message(),
        })
    }
}

/// A G-extension containing `K(√a_1, ..., √a_r)` as its Frattini-fixed
/// field needs `≪a_1, ..., a_r≫` hyperbolic.
pub fn extension_obstruction(
    f: &Field,
    slots: &[FieldElement],
    g: &GroupTable,
) -> Result<ObstructionVerdict, OracleError> {
    if !g.is_two_group() {
        return Err(GroupError::NotTwoGroup(g.order()).into());
    }
    if g.is_abelian() {
        return Err(OracleError::Precondition("G must be non-abelian".into()));
    }
    let r = frattini_rank(g)?;
    if slots.len() != r as usize {
        return Err(OracleError::Precondition(format!(
            "rank mismatch: {} entries for a group of Frattini rank {r}",
            slots.len()
        )));
    }
    let Exponent::Finite(e) = theorem0_e(g)? else { unreachable!("G is non-abelian") };
    let k = e.trailing_zeros();
    if f.max_two_power_root() < k {
        return Err(OracleError::Precondition(format!("missing root of unity: ζ_{e} ∉ {f}")));
    }
    let q = pfister(f, slots, PfisterSign::Minus)?;
    let pfister_hyperbolic = witt_decompose(&q)?.is_hyperbolic();
    Ok(ObstructionVerdict { frattini_rank: r, e, pfister: q, pfister_hyperbolic })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Prop92Witness {
    pub n: u32,
    pub a: FieldElement,
    pub trace_class: WittClass,
    pub pfister_class: WittClass,
    pub matches: bool,
}

impl Prop92Witness {
    pub fn is_hyperbolic(&self) -> bool {
        self.trace_class.is_hyperbolic()
    }

    pub fn to_json(&self) -> Value {
        let f = &self.trace_class.field;
        json!({
            "n": self.n,
            "a": f.to_json(&self.a),
            "trace_class": self.trace_class.to_json(),
            "pfister_class": self.pfister_class.to_json(),
            "matches": self.matches,
            "hyperbolic": self.is_hyperbolic(),
        })
    }
}

/// The M(2^n) trace form over `f` against `⟨2^n⟩ ⊗ ≪ζ_{2^(n-2)}, a≫`, with
/// `a` the first Laurent variable unless given.
pub fn prop92_witness(f: &Field, n: u32, a: Option<FieldElement>) -> Result<Prop92Witness, OracleError> {
    if n < 4 || f.max_two_power_root() != n - 2 {
        return Err(OracleError::Profile(format!(
            "{f} contains exactly the 2^{}-th roots of unity, n = {n} needs exactly 2^{}",
            f.max_two_power_root(),
            n.saturating_sub(2)
        )));
    }
    let a = match a {
        Some(a) => a,
        None if f.depth() > 0 => f.var(0),
        None => return Err(OracleError::Precondition(format!("{f} has no Laurent variable to use as a"))),
    };
    f.validate(&a)?;
    if f.is_zero(&a) {
        return Err(OracleError::Precondition("a must be nonzero".into()));
    }
    let z = f.zeta(n - 2).expect("profile checked");
    if f.is_square(&a)? || f.same_square_class(&a, &z)? {
        return Err(OracleError::Precondition(format!(
            "[{}] must differ from [1] and [{}]",
            f.format(&a),
            f.format(&z)
        )));
    }
    let gram = trace_form_kummer_tower(f, n, &a)?;
    let (diag, _) = diagonalize(&gram)?;
    let trace_class = witt_decompose(&diag)?;
    let target = scaled_pfister(f, &f.from_int(1i64 << n), &[z, a.clone()], PfisterSign::Minus)?;
    let pfister_class = witt_decompose(&target)?;
    let matches = trace_class.same_class(&pfister_class);
    assert_eq!(matches, witt_equivalent(&diag, &target)?, "Witt class comparison must agree with q ⊥ -q'");
    Ok(Prop92Witness { n, a, trace_class, pfister_class, matches })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_group, Permutation, PresentationSpec};

    fn grp(spec: PresentationSpec) -> GroupTable {
        build_group(&spec).unwrap()
    }

    fn perm_group(degree: usize, gens: &[&[&[usize]]]) -> GroupTable {
        let gens: Vec<Permutation> = gens.iter().map(|c| Permutation::from_cycles(degree, c).unwrap()).collect();
        Permutation::generate_table(degree, &gens).unwrap()
    }

    fn f5x() -> Field {
        Field::gf(5, 1).unwrap().laurent(["X"]).unwrap()
    }

    #[test]
    fn minimal_nonabelian_exponents() {
        assert_eq!(theorem0_e(&grp(PresentationSpec::Dihedral { order: 8 })).unwrap(), Exponent::Finite(4));
        assert_eq!(theorem0_e(&grp(PresentationSpec::ModularM2n { n: 4 })).unwrap(), Exponent::Finite(8));
        let c4c4 = grp(PresentationSpec::DirectProduct {
            factors: vec![PresentationSpec::Cyclic { n: 4 }, PresentationSpec::Cyclic { n: 4 }],
        });
        assert_eq!(theorem0_e(&c4c4).unwrap(), Exponent::Infinite);
        assert_eq!(theorem0_e(&grp(PresentationSpec::Dihedral { order: 16 })).unwrap(), Exponent::Finite(4));
        assert!(theorem0_e(&grp(PresentationSpec::Cyclic { n: 6 })).is_err());
    }

    #[test]
    fn m16_shape() {
        let p = predict(&grp(PresentationSpec::ModularM2n { n: 4 }), &FieldProfile::declared(2), false).unwrap();
        assert!(!p.hyperbolic_forced);
        assert_eq!(p.rule_fired, Rule::None);
        assert_eq!(p.shape, Some(Shape { scale: 16, pfister_rank: 2 }));
        // m = 3 reaches ζ_8 and exp M(16) = 8
        let p = predict(&grp(PresentationSpec::ModularM2n { n: 4 }), &FieldProfile::declared(3), false).unwrap();
        assert_eq!(p.rule_fired, Rule::Thm0);
    }

    #[test]
    fn dihedral_sylow_forced() {
        let s4 = perm_group(4, &[&[&[0, 1]], &[&[0, 1, 2, 3]]]);
        for g in [grp(PresentationSpec::Dihedral { order: 8 }), s4] {
            let p = predict(&g, &FieldProfile::declared(2), false).unwrap();
            assert!(p.hyperbolic_forced);
            assert_eq!(p.rule_fired, Rule::Thm0);
            assert_eq!(p.sylow_order, 8);
        }
    }

    #[test]
    fn number_field_rank_four() {
        let e16 = grp(PresentationSpec::DirectProduct { factors: vec![PresentationSpec::Cyclic { n: 2 }; 4] });
        let p = predict(&e16, &FieldProfile::declared(2).number_field(), false).unwrap();
        assert_eq!(p.rule_fired, Rule::Prop81c);
        assert!(p.hyperbolic_forced);
        let p = predict(&e16, &FieldProfile::declared(2), false).unwrap();
        assert_eq!(p.shape, Some(Shape { scale: 16, pfister_rank: 4 }));
        let p = predict(&e16, &FieldProfile::declared(2).with_c_i(3), false).unwrap();
        assert_eq!(p.rule_fired, Rule::Prop81a);
        let p = predict(&e16, &FieldProfile::declared(2).with_c_i(4).with_cd2(2), false).unwrap();
        assert_eq!(p.rule_fired, Rule::Prop81b);
    }

    #[test]
    fn simple_groups() {
        let a5 = perm_group(5, &[&[&[0, 1, 2]], &[&[0, 1, 2, 3, 4]]]);
        let p = predict(&a5, &FieldProfile::declared(2), true).unwrap();
        assert!(!p.hyperbolic_forced);
        assert_eq!(p.sylow_order, 4);
        let psl27 = perm_group(7, &[&[&[0, 1, 2, 3, 4, 5, 6]], &[&[2, 4], &[5, 6]]]);
        assert_eq!(psl27.order(), 168);
        let p = predict(&psl27, &FieldProfile::declared(2), true).unwrap();
        // Sylow D8 already breaks condition (c) before simplicity is consulted
        assert!(p.hyperbolic_forced);
        assert_eq!(p.sylow_order, 8);
        // rule order only: M(16) passes every group-theoretic rule at m = 2
        let m16 = grp(PresentationSpec::ModularM2n { n: 4 });
        assert_eq!(predict(&m16, &FieldProfile::declared(2), true).unwrap().rule_fired, Rule::Prop82);
    }

    #[test]
    fn profile_checks() {
        let mut prof = FieldProfile::of_field(&f5x());
        assert_eq!(prof.m, 2);
        prof.m = 3;
        assert!(matches!(prof.validate(), Err(OracleError::Profile(_))));
        assert!(predict(&grp(PresentationSpec::Cyclic { n: 2 }), &FieldProfile::declared(1), false).is_err());
    }

    #[test]
    fn obstruction_examples() {
        let f = Field::gf(5, 1).unwrap().laurent(["X", "Y"]).unwrap();
        let d8 = grp(PresentationSpec::Dihedral { order: 8 });
        let (x, y) = (f.var(0), f.var(1));
        let v = extension_obstruction(&f, &[x.clone(), y], &d8).unwrap();
        assert!(v.unsolvable());
        let v = extension_obstruction(&f, &[f.one(), f.one()], &d8).unwrap();
        assert!(!v.unsolvable());
        assert_eq!(v.message(), "no obstruction from Prop 8.3");
        let v = extension_obstruction(&f, &[f.from_int(2), x.clone()], &d8).unwrap();
        assert!(v.unsolvable());
        assert!(extension_obstruction(&f, &[x.clone()], &d8).is_err());
        let f3 = Field::gf(3, 1).unwrap().laurent(["X", "Y"]).unwrap();
        assert!(extension_obstruction(&f3, &[f3.var(0), f3.var(1)], &d8).is_err());
    }

    #[test]
    fn kummer_witness() {
        let f = f5x();
        let w = prop92_witness(&f, 4, None).unwrap();
        assert_eq!(w.a, f.var(0));
        assert!(w.matches);
        assert!(!w.is_hyperbolic());
        assert!(prop92_witness(&f, 4, Some(f.one())).is_err());
        assert!(prop92_witness(&f, 4, Some(f.from_int(2))).is_err());
        assert!(prop92_witness(&f, 5, None).is_err());
    }

    #[test]
    fn kummer_witness_gf25() {
        let f = Field::gf(5, 2).unwrap().laurent(["X"]).unwrap();
        let w = prop92_witness(&f, 5, None).unwrap();
        assert!(w.matches);
        assert!(!w.is_hyperbolic());
    }

    #[test]
    fn shape_search_recovers_slots() {
        let f = f5x();
        let tower = crate::form::KummerTower::new(&f, 4, &f.var(0)).unwrap();
        let (q, _) = diagonalize(&tower.gram()).unwrap();
        let slots = match_pfister_shape(&q, 16, 2).unwrap().expect("shape exists");
        assert_eq!(slots.len(), 2);
        let h = QForm::from_ints(&f, &[1, -1]).unwrap();
        assert!(match_pfister_shape(&h, 4, 1).unwrap().is_some());
        let odd = QForm::from_ints(&f, &[1]).unwrap();
        assert!(match_pfister_shape(&odd, 4, 1).unwrap().is_none());
    }
}
