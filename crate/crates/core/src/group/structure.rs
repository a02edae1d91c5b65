use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::subgroup::ElementSet;
use super::{GroupError, GroupTable, Subgroup};

/// Bounds on exhaustive subgroup searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationLimits {
    /// Largest group order for which all subgroups are enumerated.
    pub max_order: usize,
    /// Abort once this many distinct subgroups have been found.
    pub max_subgroups: usize,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        EnumerationLimits { max_order: 512, max_subgroups: 200_000 }
    }
}

pub fn all_subgroups(g: &GroupTable) -> Result<Vec<Subgroup>, GroupError> {
    all_subgroups_with(g, &EnumerationLimits::default())
}

/// Every subgroup exactly once, sorted by order then member list.
///
/// Breadth-first closure: starting from the trivial subgroup, each found
/// subgroup is extended by every cyclic subgroup it does not contain.
pub fn all_subgroups_with(
    g: &GroupTable,
    limits: &EnumerationLimits,
) -> Result<Vec<Subgroup>, GroupError> {
    if g.order() > limits.max_order {
        return Err(GroupError::EnumerationInfeasible(format!(
            "group order {} exceeds subgroup enumeration cap {}",
            g.order(),
            limits.max_order
        )));
    }
    let mut cyclic_gens = Vec::new();
    let mut seen_cyclic = HashSet::new();
    for x in 0..g.order() {
        let c = g.closure(&[x]);
        if seen_cyclic.insert(c.set().clone()) {
            cyclic_gens.push(x);
        }
    }

    let mut found: HashSet<ElementSet> = HashSet::new();
    let mut queue: Vec<(Subgroup, Vec<usize>)> = vec![(g.trivial(), Vec::new())];
    found.insert(g.trivial().set().clone());
    let mut i = 0;
    while i < queue.len() {
        let (h, gens) = queue[i].clone();
        i += 1;
        for &c in &cyclic_gens {
            if h.contains(c) {
                continue;
            }
            let k = g.join_elements(&h, &gens, &[c]);
            if found.insert(k.set().clone()) {
                if found.len() > limits.max_subgroups {
                    return Err(GroupError::EnumerationInfeasible(format!(
                        "more than {} subgroups",
                        limits.max_subgroups
                    )));
                }
                let mut kg = gens.clone();
                kg.push(c);
                queue.push((k, kg));
            }
        }
    }
    let mut out: Vec<Subgroup> = queue.into_iter().map(|(h, _)| h).collect();
    out.sort();
    Ok(out)
}

/// `G^i = ⟨g^i | g ∈ G⟩`, which is always normal.
pub fn power_subgroup(g: &GroupTable, i: i64) -> Subgroup {
    let p = g.power_subgroup_of(&g.whole(), i);
    assert!(g.is_normal(&p), "power subgroup G^{i} must be normal");
    p
}

pub fn commutator_subgroup(g: &GroupTable) -> Subgroup {
    g.commutator_of(&g.whole())
}

pub fn center(g: &GroupTable) -> Subgroup {
    g.center_of(&g.whole())
}

pub fn exponent(g: &GroupTable) -> usize {
    g.exponent()
}

pub fn is_abelian(g: &GroupTable) -> bool {
    g.is_abelian()
}

/// Kernels of all nontrivial homomorphisms `G → Z/2`, found by propagating a
/// generator assignment along the Cayley graph.
fn index_two_kernels(g: &GroupTable) -> Vec<Subgroup> {
    let gens = g.whole_generators().to_vec();
    let k = gens.len();
    let mut kernels = Vec::new();
    for mask in 1u64..(1u64 << k) {
        let mut value: Vec<Option<bool>> = vec![None; g.order()];
        value[g.identity()] = Some(false);
        let mut stack = vec![g.identity()];
        let mut consistent = true;
        'walk: while let Some(x) = stack.pop() {
            let vx = value[x].unwrap();
            for (i, &s) in gens.iter().enumerate() {
                let y = g.mul(x, s);
                let vy = vx ^ (mask >> i & 1 == 1);
                match value[y] {
                    None => {
                        value[y] = Some(vy);
                        stack.push(y);
                    }
                    Some(v) if v != vy => {
                        consistent = false;
                        break 'walk;
                    }
                    _ => {}
                }
            }
        }
        if consistent {
            let members = (0..g.order()).filter(|&x| value[x] == Some(false));
            kernels.push(Subgroup::from_set(ElementSet::from_elements(g.order(), members)));
        }
    }
    kernels
}

/// The Frattini subgroup: the intersection of all maximal subgroups.
///
/// For 2-groups the maximal subgroups are the index-2 kernels, computed
/// without squares; the result is then checked against `G^2`.
pub fn frattini(g: &GroupTable) -> Result<Subgroup, GroupError> {
    if g.order() == 1 {
        return Ok(g.trivial());
    }
    let fr = if g.is_two_group() {
        index_two_kernels(g)
            .iter()
            .fold(g.whole(), |acc, k| acc.meet(k))
    } else {
        let subs = all_subgroups(g)?;
        let proper: Vec<&Subgroup> = subs.iter().filter(|h| !h.is_whole()).collect();
        let maximal = proper
            .iter()
            .filter(|h| !proper.iter().any(|k| k.order() > h.order() && h.is_subgroup_of(k)));
        maximal.fold(g.whole(), |acc, m| acc.meet(m))
    };
    if g.is_two_group() {
        assert_eq!(
            fr,
            power_subgroup(g, 2),
            "Frattini subgroup of a 2-group must equal the subgroup generated by squares"
        );
    }
    Ok(fr)
}

/// `r` with `|G / Fr(G)| = 2^r`.
pub fn frattini_rank(g: &GroupTable) -> Result<u32, GroupError> {
    if !g.is_two_group() {
        return Err(GroupError::NotTwoGroup(g.order()));
    }
    let fr = frattini(g)?;
    let r = (g.order() / fr.order()).trailing_zeros();
    let greedy = g.whole_generators().len() as u32;
    assert!(
        greedy >= r,
        "a generating set of size {greedy} cannot be smaller than the Frattini rank {r}"
    );
    Ok(r)
}

/// Size of a smallest generating set by exhaustive search, or `None` when
/// more than `budget` candidate subsets would be tried.
pub fn min_generating_set_size(g: &GroupTable, budget: usize) -> Option<usize> {
    if g.order() == 1 {
        return Some(0);
    }
    let mut tried = 0usize;
    fn search(
        g: &GroupTable,
        span: &Subgroup,
        gens: &mut Vec<usize>,
        start: usize,
        remaining: usize,
        tried: &mut usize,
        budget: usize,
    ) -> Option<bool> {
        if span.is_whole() {
            return Some(true);
        }
        if remaining == 0 {
            return Some(false);
        }
        for x in start..g.order() {
            if span.contains(x) {
                continue;
            }
            *tried += 1;
            if *tried > budget {
                return None;
            }
            let next = g.join_elements(span, gens, &[x]);
            gens.push(x);
            let r = search(g, &next, gens, x + 1, remaining - 1, tried, budget);
            gens.pop();
            if r? {
                return Some(true);
            }
        }
        Some(false)
    }
    for k in 1..=g.order() {
        let mut gens = Vec::new();
        if search(g, &g.trivial(), &mut gens, 0, k, &mut tried, budget)? {
            return Some(k);
        }
    }
    unreachable!("the whole group generates itself")
}

/// Quotient by a normal subgroup, on cosets labelled by their least element.
pub fn quotient(g: &GroupTable, n: &Subgroup) -> Result<(GroupTable, Vec<usize>), GroupError> {
    if !g.is_normal(n) {
        return Err(GroupError::NotNormal);
    }
    let mut coset_of = vec![usize::MAX; g.order()];
    let mut reps = Vec::new();
    for x in 0..g.order() {
        if coset_of[x] != usize::MAX {
            continue;
        }
        let idx = reps.len();
        reps.push(x);
        for m in n.members() {
            coset_of[g.mul(x, m)] = idx;
        }
    }
    let labels = reps.iter().map(|&r| format!("[{}]", g.label(r))).collect();
    let q = GroupTable::from_fn(reps.len(), |a, b| coset_of[g.mul(reps[a], reps[b])], Some(labels))?;
    Ok((q, coset_of))
}

/// A Sylow 2-subgroup, grown one step at a time inside normalizers.
pub fn sylow2(g: &GroupTable) -> Subgroup {
    grow_sylow2(g, None)
}

/// As [`sylow2`], but candidate elements are visited in a seeded random order.
pub fn sylow2_seeded(g: &GroupTable, seed: u64) -> Subgroup {
    grow_sylow2(g, Some(seed))
}

fn grow_sylow2(g: &GroupTable, seed: Option<u64>) -> Subgroup {
    let mut rng = seed.map(ChaCha8Rng::seed_from_u64);
    let mut p = g.trivial();
    let mut p_gens: Vec<usize> = Vec::new();
    while (g.order() / p.order()) % 2 == 0 {
        let norm = g.normalizer(&p);
        let mut candidates: Vec<usize> = norm.members().filter(|&x| !p.contains(x)).collect();
        if let Some(rng) = rng.as_mut() {
            candidates.shuffle(rng);
        }
        let step = candidates.iter().find_map(|&x| {
            let mut k = 1;
            let mut y = x;
            while !p.contains(y) {
                y = g.mul(y, x);
                k += 1;
            }
            (k % 2 == 0).then(|| g.pow(x, (k / 2) as i64))
        });
        let y = step.expect("a non-Sylow 2-subgroup has an even-index normalizer quotient");
        p = g.join_elements(&p, &p_gens, &[y]);
        p_gens.push(y);
        assert!(p.order().is_power_of_two());
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_group, Permutation, PresentationSpec};

    fn grp(spec: PresentationSpec) -> GroupTable {
        build_group(&spec).unwrap()
    }

    /// Brute-force oracle: close every subset of elements of size up to 3
    /// (Q8 and D8 are 2-generated, so this reaches every subgroup).
    fn brute_subgroup_count(g: &GroupTable) -> usize {
        let n = g.order();
        let mut set = HashSet::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    set.insert(g.closure(&[a, b, c]).set().clone());
                }
            }
        }
        set.len()
    }

    #[test]
    fn subgroup_counts() {
        let z4 = grp(PresentationSpec::Cyclic { n: 4 });
        assert_eq!(all_subgroups(&z4).unwrap().len(), 3);
        let q8 = grp(PresentationSpec::Quaternion { order: 8 });
        assert_eq!(brute_subgroup_count(&q8), 6);
        assert_eq!(all_subgroups(&q8).unwrap().len(), 6);
        let d8 = grp(PresentationSpec::Dihedral { order: 8 });
        assert_eq!(brute_subgroup_count(&d8), 10);
        assert_eq!(all_subgroups(&d8).unwrap().len(), 10);
    }

    #[test]
    fn enumeration_cap_is_explicit() {
        let g = grp(PresentationSpec::Cyclic { n: 1024 });
        assert!(matches!(all_subgroups(&g), Err(GroupError::EnumerationInfeasible(_))));
        let tight = EnumerationLimits { max_order: 512, max_subgroups: 3 };
        let d8 = grp(PresentationSpec::Dihedral { order: 8 });
        assert!(all_subgroups_with(&d8, &tight).is_err());
    }

    #[test]
    fn power_subgroups() {
        let z8sq = grp(PresentationSpec::DirectProduct {
            factors: vec![PresentationSpec::Cyclic { n: 8 }, PresentationSpec::Cyclic { n: 8 }],
        });
        let p = power_subgroup(&z8sq, 2);
        assert_eq!(p.order(), 16);
        let m16 = grp(PresentationSpec::ModularM2n { n: 4 });
        let p4 = power_subgroup(&m16, 4);
        assert_eq!(p4.order(), 2);
        let s = m16.find_label("σ").unwrap();
        assert!(p4.contains(m16.pow(s, 4)));
        let q8 = grp(PresentationSpec::Quaternion { order: 8 });
        assert!(power_subgroup(&q8, 4).is_trivial());
    }

    #[test]
    fn frattini_examples() {
        let m16 = grp(PresentationSpec::ModularM2n { n: 4 });
        let s = m16.find_label("σ").unwrap();
        assert_eq!(frattini(&m16).unwrap(), m16.closure(&[m16.pow(s, 2)]));
        let e8 = grp(PresentationSpec::DirectProduct {
            factors: vec![PresentationSpec::Cyclic { n: 2 }; 3],
        });
        assert!(frattini(&e8).unwrap().is_trivial());
        let d8 = grp(PresentationSpec::Dihedral { order: 8 });
        assert_eq!(frattini(&d8).unwrap(), center(&d8));
        assert_eq!(center(&d8).order(), 2);
    }

    #[test]
    fn frattini_of_non_two_group_via_maximal_subgroups() {
        let s4 = Permutation::generate_table(
            4,
            &[
                Permutation::from_cycles(4, &[&[0, 1]]).unwrap(),
                Permutation::from_cycles(4, &[&[0, 1, 2, 3]]).unwrap(),
            ],
        )
        .unwrap();
        assert!(frattini(&s4).unwrap().is_trivial());
    }

    #[test]
    fn frattini_ranks() {
        let m16 = grp(PresentationSpec::ModularM2n { n: 4 });
        assert_eq!(frattini_rank(&m16).unwrap(), 2);
        for r in 1..=4 {
            let e = grp(PresentationSpec::DirectProduct {
                factors: vec![PresentationSpec::Cyclic { n: 2 }; r],
            });
            assert_eq!(frattini_rank(&e).unwrap(), r as u32);
        }
        let ex44 = grp(PresentationSpec::IwasawaZ { a_exponents: vec![5], s: 3, q: 3, a0: vec![4] });
        assert_eq!(frattini_rank(&ex44).unwrap(), 2);
        let s3 = grp(PresentationSpec::Dihedral { order: 6 });
        assert_eq!(frattini_rank(&s3), Err(GroupError::NotTwoGroup(6)));
    }

    #[test]
    fn exhaustive_generating_sets_match_frattini_rank() {
        for spec in [
            PresentationSpec::ModularM2n { n: 5 },
            PresentationSpec::Quaternion { order: 16 },
            PresentationSpec::DirectProduct {
                factors: vec![PresentationSpec::Cyclic { n: 4 }; 3],
            },
        ] {
            let g = grp(spec);
            let r = frattini_rank(&g).unwrap() as usize;
            assert_eq!(min_generating_set_size(&g, 1_000_000), Some(r));
        }
    }

    #[test]
    fn commutator_quotient_center() {
        let m16 = grp(PresentationSpec::ModularM2n { n: 4 });
        let s = m16.find_label("σ").unwrap();
        assert_eq!(commutator_subgroup(&m16), m16.closure(&[m16.pow(s, 4)]));
        let z4z2 = grp(PresentationSpec::DirectProduct {
            factors: vec![PresentationSpec::Cyclic { n: 4 }, PresentationSpec::Cyclic { n: 2 }],
        });
        assert_eq!(exponent(&z4z2), 4);

        let ex44 = grp(PresentationSpec::IwasawaZ { a_exponents: vec![5], s: 3, q: 3, a0: vec![4] });
        let a = ex44.find_label("a").unwrap();
        let a8 = ex44.closure(&[ex44.pow(a, 8)]);
        assert_eq!(commutator_subgroup(&ex44), a8);
        let (q, _) = quotient(&ex44, &a8).unwrap();
        assert_eq!(q.order(), 64);
        assert!(q.is_abelian());
    }

    #[test]
    fn quotient_rejects_non_normal() {
        let d8 = grp(PresentationSpec::Dihedral { order: 8 });
        let s = d8.find_label("s").unwrap();
        assert_eq!(quotient(&d8, &d8.closure(&[s])).unwrap_err(), GroupError::NotNormal);
    }

    fn a5() -> GroupTable {
        Permutation::generate_table(
            5,
            &[
                Permutation::from_cycles(5, &[&[0, 1, 2]]).unwrap(),
                Permutation::from_cycles(5, &[&[0, 1, 2, 3, 4]]).unwrap(),
            ],
        )
        .unwrap()
    }

    #[test]
    fn sylow_subgroups() {
        let g = a5();
        assert_eq!(g.order(), 60);
        let p = sylow2(&g);
        assert_eq!(p.order(), 4);
        assert!(g.is_abelian_subgroup(&p));

        let s4 = Permutation::generate_table(
            4,
            &[
                Permutation::from_cycles(4, &[&[0, 1]]).unwrap(),
                Permutation::from_cycles(4, &[&[0, 1, 2, 3]]).unwrap(),
            ],
        )
        .unwrap();
        let p = sylow2(&s4);
        assert_eq!(p.order(), 8);
        assert!(!s4.is_abelian_subgroup(&p));
        assert_eq!(s4.exponent_of(&p), 4);

        let m16 = grp(PresentationSpec::ModularM2n { n: 4 });
        assert!(sylow2(&m16).is_whole());
    }

    #[test]
    fn seeded_sylow_orders_agree() {
        let g = a5();
        for seed in 0..10 {
            let p = sylow2_seeded(&g, seed);
            assert_eq!(p.order(), 4);
            assert_eq!(g.order() / p.order() % 2, 1);
        }
    }

    #[test]
    fn subgroup_list_closed_under_conjugation() {
        let g = grp(PresentationSpec::Semidihedral { order: 16 });
        let subs = all_subgroups(&g).unwrap();
        let set: HashSet<&Subgroup> = subs.iter().collect();
        for h in &subs {
            for x in 0..g.order() {
                assert!(set.contains(&g.conjugate_subgroup(h, x)));
            }
        }
    }
}
