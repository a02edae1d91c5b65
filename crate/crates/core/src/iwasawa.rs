//! Strength, Iwasawa structures, and the subgroup conditions deciding when a
//! 2-group has Galois algebras with non-hyperbolic trace forms.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::group::{all_subgroups, sylow2, GroupError, GroupTable, Subgroup};

/// A nonnegative integer or the abelian "unbounded" value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Level {
    Finite(u32),
    Infinite,
}

impl Level {
    pub fn at_least(self, m: u32) -> bool {
        match self {
            Level::Finite(s) => s >= m,
            Level::Infinite => true,
        }
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            Level::Finite(s) => Some(s),
            Level::Infinite => None,
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::Finite(s) => write!(f, "{s}"),
            Level::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Level {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Level::Finite(v) => s.serialize_u32(*v),
            Level::Infinite => s.serialize_str("inf"),
        }
    }
}

/// `(A, t, s)`: `A` normal abelian, `G = ⟨A, t⟩`, and `t a t⁻¹ = a^(1+2^s)`
/// for every `a ∈ A`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IwasawaStructure {
    #[serde(rename = "A")]
    pub a: Subgroup,
    pub t: usize,
    pub level: u32,
}

impl IwasawaStructure {
    pub fn describe(&self, g: &GroupTable) -> String {
        let gens: Vec<String> = g.generators(&self.a).iter().map(|&x| g.label(x)).collect();
        format!("(<{}>, {}, {})", gens.join(", "), g.label(self.t), self.level)
    }
}

fn require_two_group(g: &GroupTable) -> Result<(), GroupError> {
    if g.is_two_group() {
        Ok(())
    } else {
        Err(GroupError::NotTwoGroup(g.order()))
    }
}

fn log2_exponent(g: &GroupTable, h: &Subgroup) -> u32 {
    let e = g.exponent_of(h);
    debug_assert!(e.is_power_of_two());
    e.trailing_zeros()
}

/// Strength of a subgroup `H` of a 2-group: the largest `m` with
/// `[H,H] ⊆ H^(2^m)`.
pub fn subgroup_strength(g: &GroupTable, h: &Subgroup) -> Level {
    if g.is_abelian_subgroup(h) {
        return Level::Infinite;
    }
    let comm = g.commutator_of(h);
    let mut m = 0;
    loop {
        let p = g.power_subgroup_of(h, 1i64 << (m + 1));
        if !comm.is_subgroup_of(&p) {
            return Level::Finite(m);
        }
        m += 1;
    }
}

pub fn strength(g: &GroupTable) -> Result<Level, GroupError> {
    require_two_group(g)?;
    Ok(subgroup_strength(g, &g.whole()))
}

pub fn is_powerful(g: &GroupTable) -> Result<bool, GroupError> {
    Ok(strength(g)?.at_least(2))
}

fn relation_holds(g: &GroupTable, a_gens: &[usize], t: usize, s: u32) -> bool {
    let e = 1i64 + (1i64 << s);
    a_gens.iter().all(|&a| g.conj(t, a) == g.pow(a, e))
}

/// Largest `s` in `1..=bound` at which the conjugation relation holds.
fn structure_level(g: &GroupTable, a_gens: &[usize], t: usize, bound: u32) -> Option<u32> {
    (1..=bound).rev().find(|&s| relation_holds(g, a_gens, t, s))
}

fn generates_with(g: &GroupTable, a: &Subgroup, t: usize) -> bool {
    // A is normal, so ⟨A, t⟩ = A⟨t⟩ has order |A| times the order of tA
    let mut k = 1;
    let mut y = t;
    while !a.contains(y) {
        y = g.mul(y, t);
        k += 1;
    }
    a.order() * k == g.order()
}

/// Every Iwasawa structure of level at least `min_level`.
///
/// Normal abelian subgroups are visited by decreasing order, elements `t` by
/// increasing index; each pair gets the largest valid level up to
/// `log2 exp(A) + 1` (on abelian groups the level is unbounded and this cap
/// is what gets reported). Results are sorted by decreasing level, ties kept
/// in search order.
pub fn iwasawa_structures(g: &GroupTable, min_level: u32) -> Result<Vec<IwasawaStructure>, GroupError> {
    require_two_group(g)?;
    let mut normal_abelian: Vec<Subgroup> = all_subgroups(g)?
        .into_iter()
        .filter(|a| g.is_abelian_subgroup(a) && g.is_normal(a))
        .collect();
    normal_abelian.sort_by(|x, y| y.order().cmp(&x.order()).then_with(|| x.cmp(y)));
    let mut out = Vec::new();
    for a in normal_abelian {
        let gens = g.generators(&a);
        let bound = log2_exponent(g, &a) + 1;
        for t in 0..g.order() {
            if !generates_with(g, &a, t) {
                continue;
            }
            if let Some(level) = structure_level(g, &gens, t, bound) {
                if level >= min_level.max(1) {
                    out.push(IwasawaStructure { a: a.clone(), t, level });
                }
            }
        }
    }
    out.sort_by(|x, y| y.level.cmp(&x.level));
    Ok(out)
}

/// Maximum level over all Iwasawa structures: unbounded for abelian groups,
/// `None` when there is no structure at all.
///
/// For non-abelian groups with a structure of level ≥ 2 the maximum is
/// asserted to equal the strength.
pub fn max_iwasawa_level(g: &GroupTable) -> Result<Option<Level>, GroupError> {
    require_two_group(g)?;
    if g.is_abelian() {
        return Ok(Some(Level::Infinite));
    }
    let structures = iwasawa_structures(g, 1)?;
    let max = structures.first().map(|s| s.level);
    if let Some(m) = max.filter(|&m| m >= 2) {
        let str_g = strength(g)?;
        assert_eq!(
            Level::Finite(m),
            str_g,
            "maximum Iwasawa level {m} differs from strength {str_g}"
        );
    }
    Ok(max.map(Level::Finite))
}

/// Checks that `st` satisfies the definition on `g`.
pub fn validate_structure(g: &GroupTable, st: &IwasawaStructure) -> Result<(), GroupError> {
    let bad = |msg: &str| Err(GroupError::InvalidStructure(msg.to_string()));
    if st.a.parent_order() != g.order() || st.t >= g.order() {
        return bad("structure belongs to a different group");
    }
    if st.level == 0 {
        return bad("level must be positive");
    }
    if !g.is_abelian_subgroup(&st.a) {
        return bad("A is not abelian");
    }
    if !g.is_normal(&st.a) {
        return bad("A is not normal");
    }
    if !generates_with(g, &st.a, st.t) {
        return bad("A and t do not generate the group");
    }
    if !relation_holds(g, &g.generators(&st.a), st.t, st.level) {
        return bad("t a t^-1 != a^(1+2^s) for some a in A");
    }
    Ok(())
}

/// Outcome of a subgroup condition, with the smallest failing subgroup.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionC {
    pub holds: bool,
    pub witness: Option<Subgroup>,
}

/// Every subgroup paired with its strength, subgroups in ascending order.
pub fn subgroup_strengths(g: &GroupTable) -> Result<Vec<(Subgroup, Level)>, GroupError> {
    require_two_group(g)?;
    if g.is_abelian() {
        return Ok(vec![(g.whole(), Level::Infinite)]);
    }
    Ok(all_subgroups(g)?
        .into_iter()
        .map(|t| {
            let s = subgroup_strength(g, &t);
            (t, s)
        })
        .collect())
}

/// Condition (c) read off precomputed strengths.
pub fn condition_c_from(strengths: &[(Subgroup, Level)], m: u32) -> ConditionC {
    let witness = strengths.iter().find(|(_, s)| !s.at_least(m)).map(|(t, _)| t.clone());
    ConditionC { holds: witness.is_none(), witness }
}

/// Whether `T / T^(2^m)` is abelian for every subgroup `T`.
pub fn condition_c(g: &GroupTable, m: u32) -> Result<ConditionC, GroupError> {
    Ok(condition_c_from(&subgroup_strengths(g)?, m))
}

/// Whether `[H,H] ⊆ H^(2^m)` for every subgroup `H` of an arbitrary finite
/// group; asserted to agree with condition (c) on a Sylow 2-subgroup.
pub fn condition_c_prime(g: &GroupTable, m: u32) -> Result<bool, GroupError> {
    let direct = if g.is_abelian() {
        true
    } else {
        all_subgroups(g)?
            .iter()
            .all(|h| g.commutator_of(h).is_subgroup_of(&g.power_subgroup_of(h, 1i64 << m)))
    };
    let (s, _) = g.subgroup_table(&sylow2(g));
    let via_sylow = condition_c(&s, m)?.holds;
    assert_eq!(
        direct, via_sylow,
        "condition (c') on G disagrees with condition (c) on its Sylow 2-subgroup"
    );
    Ok(direct)
}

fn serialize_max_level<S: Serializer>(v: &Option<Level>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(l) => l.serialize(s),
        None => s.serialize_str("not Iwasawa"),
    }
}

fn serialize_witness<S: Serializer>(v: &Option<Subgroup>, s: S) -> Result<S::Ok, S::Error> {
    v.as_ref().map(|h| h.member_list()).serialize(s)
}

#[derive(Clone, Debug, Serialize)]
pub struct Thm2Report {
    pub m: u32,
    pub cond_c: bool,
    #[serde(serialize_with = "serialize_witness")]
    pub cond_c_witness: Option<Subgroup>,
    pub cond_d: bool,
    pub cond_d_witness: Option<IwasawaStructure>,
    pub strength: Level,
    /// Maximum Iwasawa level; `None` when the group is not an Iwasawa group.
    #[serde(serialize_with = "serialize_max_level")]
    pub max_level: Option<Level>,
}

/// Decides conditions (c) and (d) by independent routes and asserts that
/// they agree.
pub fn thm2_classify(g: &GroupTable, m: u32) -> Result<Thm2Report, GroupError> {
    let strengths = subgroup_strengths(g)?;
    thm2_classify_with(g, m, &strengths)
}

/// As [`thm2_classify`], reusing strengths from [`subgroup_strengths`].
pub fn thm2_classify_with(
    g: &GroupTable,
    m: u32,
    strengths: &[(Subgroup, Level)],
) -> Result<Thm2Report, GroupError> {
    require_two_group(g)?;
    if m < 2 {
        return Err(GroupError::InvalidStructure(format!("m = {m} must be at least 2")));
    }
    let c = condition_c_from(strengths, m);
    let str_g = strength(g)?;
    let (cond_d_witness, max_level) = if g.is_abelian() {
        let level = m.max(log2_exponent(g, &g.whole()));
        let st = IwasawaStructure { a: g.whole(), t: g.identity(), level };
        validate_structure(g, &st)?;
        (Some(st), Some(Level::Infinite))
    } else {
        let all = iwasawa_structures(g, 1)?;
        let top = all.first().map(|s| s.level).filter(|&l| l >= 2);
        if let Some(l) = top {
            assert_eq!(Level::Finite(l), str_g, "maximum Iwasawa level differs from strength");
        }
        let w = all.into_iter().find(|s| s.level >= m);
        (w, top.map(Level::Finite))
    };
    let cond_d = cond_d_witness.is_some();
    assert_eq!(
        cond_d,
        max_level.is_some() && str_g.at_least(m),
        "condition (d) must mean: Iwasawa group of strength at least m"
    );
    assert_eq!(
        c.holds, cond_d,
        "conditions (c) and (d) disagree for a group of order {} at m = {m}",
        g.order()
    );
    Ok(Thm2Report {
        m,
        cond_c: c.holds,
        cond_c_witness: c.witness,
        cond_d,
        cond_d_witness,
        strength: str_g,
        max_level,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lemma43Report {
    /// `[G,G] = A^(2^s)`.
    pub commutator: bool,
    /// `str(G) ≥ s`.
    pub strength: bool,
    /// `G^(2^m) = ⟨A^(2^m), t^(2^m)⟩`; required only for `s ≥ 2`.
    pub power_subgroup: bool,
    pub level: u32,
}

impl Lemma43Report {
    pub fn holds(&self) -> bool {
        self.commutator && self.strength && (self.level < 2 || self.power_subgroup)
    }
}

pub fn lemma43_report(g: &GroupTable, st: &IwasawaStructure, m: u32) -> Result<Lemma43Report, GroupError> {
    require_two_group(g)?;
    validate_structure(g, st)?;
    let s = st.level;
    let a_pow_s = g.power_subgroup_of(&st.a, 1i64 << s.min(62));
    let commutator = g.commutator_of(&g.whole()) == a_pow_s;
    let strength = subgroup_strength(g, &g.whole()).at_least(s);
    let e = 1i64 << m.min(62);
    let a_pow_m = g.power_subgroup_of(&st.a, e);
    let gens = g.generators(&a_pow_m);
    let rhs = g.join_elements(&a_pow_m, &gens, &[g.pow(st.t, e)]);
    let power_subgroup = g.power_subgroup_of(&g.whole(), e) == rhs;
    Ok(Lemma43Report { commutator, strength, power_subgroup, level: s })
}

pub fn lemma43_check(g: &GroupTable, st: &IwasawaStructure, m: u32) -> Result<bool, GroupError> {
    Ok(lemma43_report(g, st, m)?.holds())
}
