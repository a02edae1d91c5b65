use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::subgroup::{ElementSet, Subgroup};
use super::GroupError;

/// Largest order for which a Cayley table is materialized.
pub const TABLE_CAP: usize = 4096;

/// Orders up to this bound get a full associativity check on construction.
const FULL_ASSOCIATIVITY_BOUND: usize = 64;
const RANDOM_ASSOCIATIVITY_TRIPLES: usize = 10_000;

/// A finite group given by an explicit multiplication table over the
/// elements `0..order`.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupTable {
    order: usize,
    mult: Vec<u16>,
    identity: usize,
    inv: Vec<u16>,
    labels: Option<Vec<String>>,
    whole_gens: std::sync::OnceLock<Vec<usize>>,
}

impl std::fmt::Debug for GroupTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GroupTable(order {})", self.order)
    }
}

impl GroupTable {
    /// Builds and validates a group from a row-major table.
    pub fn from_rows(rows: &[Vec<usize>], labels: Option<Vec<String>>) -> Result<Self, GroupError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(GroupError::InvalidTable("table is not square".into()));
        }
        Self::from_fn(n, |a, b| rows[a][b], labels)
    }

    /// Builds and validates a group of order `n` from a product function.
    pub fn from_fn(
        n: usize,
        mut mul: impl FnMut(usize, usize) -> usize,
        labels: Option<Vec<String>>,
    ) -> Result<Self, GroupError> {
        if n == 0 {
            return Err(GroupError::InvalidTable("empty table".into()));
        }
        if n > TABLE_CAP {
            return Err(GroupError::OrderCapExceeded { order: n, cap: TABLE_CAP });
        }
        if let Some(l) = &labels {
            if l.len() != n {
                return Err(GroupError::InvalidTable(format!(
                    "{} labels for {} elements",
                    l.len(),
                    n
                )));
            }
        }
        let mut mult = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let c = mul(a, b);
                if c >= n {
                    return Err(GroupError::InvalidTable(format!(
                        "entry {a}*{b} = {c} out of range"
                    )));
                }
                mult.push(c as u16);
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| mult[e * n + x] as usize == x && mult[x * n + e] as usize == x))
            .ok_or(GroupError::NoIdentity)?;
        let mut inv = vec![0u16; n];
        for a in 0..n {
            let b = (0..n)
                .find(|&b| mult[a * n + b] as usize == identity)
                .ok_or(GroupError::MissingInverse(a))?;
            if mult[b * n + a] as usize != identity {
                return Err(GroupError::MissingInverse(a));
            }
            inv[a] = b as u16;
        }
        let g = GroupTable { order: n, mult, identity, inv, labels, whole_gens: Default::default() };
        g.check_associative()?;
        Ok(g)
    }

    fn check_associative(&self) -> Result<(), GroupError> {
        let n = self.order;
        let check = |a: usize, b: usize, c: usize| -> Result<(), GroupError> {
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                Err(GroupError::NotAssociative { a, b, c })
            } else {
                Ok(())
            }
        };
        if n <= FULL_ASSOCIATIVITY_BOUND {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        check(a, b, c)?;
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            for _ in 0..RANDOM_ASSOCIATIVITY_TRIPLES {
                check(rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n))?;
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, g: usize) -> String {
        match &self.labels {
            Some(l) => l[g].clone(),
            None => g.to_string(),
        }
    }

    /// Index of the element with the given label, if labels are present.
    pub fn find_label(&self, label: &str) -> Option<usize> {
        self.labels.as_ref()?.iter().position(|l| l == label)
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|a| (0..self.order).map(|b| self.mul(a, b)).collect())
            .collect()
    }

    pub fn pow(&self, g: usize, k: i64) -> usize {
        let base = if k < 0 { self.inv(g) } else { g };
        let mut e = k.unsigned_abs();
        let mut acc = self.identity;
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, sq);
            }
            sq = self.mul(sq, sq);
            e >>= 1;
        }
        acc
    }

    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    /// The commutator `[x, y] = x y x⁻¹ y⁻¹`.
    pub fn commutator(&self, x: usize, y: usize) -> usize {
        self.mul(self.mul(x, y), self.mul(self.inv(x), self.inv(y)))
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut k = 1;
        let mut x = g;
        while x != self.identity {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn is_two_group(&self) -> bool {
        self.order.is_power_of_two()
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup::from_set(ElementSet::full(self.order))
    }

    pub fn trivial(&self) -> Subgroup {
        Subgroup::from_set(ElementSet::from_elements(self.order, [self.identity]))
    }

    /// The subgroup generated by `gens`.
    pub fn closure(&self, gens: &[usize]) -> Subgroup {
        self.extend_closure(&ElementSet::from_elements(self.order, [self.identity]), gens, gens)
    }

    /// Closure of `base ∪ extra`, where `base_gens` generate the subgroup
    /// `base`.
    fn extend_closure(&self, base: &ElementSet, base_gens: &[usize], extra: &[usize]) -> Subgroup {
        let mut set = base.clone();
        let mut list: Vec<usize> = set.iter().collect();
        let gens: Vec<usize> = base_gens.iter().chain(extra).copied().collect();
        for &g in extra {
            if set.insert(g) {
                list.push(g);
            }
        }
        let mut i = 0;
        while i < list.len() {
            let x = list[i];
            for &g in &gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    list.push(y);
                }
            }
            i += 1;
        }
        Subgroup::from_set(set)
    }

    /// `⟨h, extra⟩` for a subgroup `h` with known generators.
    pub fn join_elements(&self, h: &Subgroup, h_gens: &[usize], extra: &[usize]) -> Subgroup {
        self.extend_closure(h.set(), h_gens, extra)
    }

    pub fn join(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        let ga = self.generators(a);
        let gb = self.generators(b);
        self.join_elements(a, &ga, &gb)
    }

    /// A small generating set of `h`, found greedily (each generator is
    /// chosen outside the span of the previous ones, largest order first).
    pub fn generators(&self, h: &Subgroup) -> Vec<usize> {
        let mut by_order: Vec<(usize, usize)> =
            h.members().map(|g| (self.element_order(g), g)).collect();
        by_order.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        let mut gens = Vec::new();
        let mut span = self.trivial();
        for (_, g) in by_order {
            if span.order() == h.order() {
                break;
            }
            if !span.contains(g) {
                span = self.join_elements(&span, &gens, &[g]);
                gens.push(g);
            }
        }
        gens
    }

    /// Validates that a member list forms a subgroup.
    pub fn subgroup_from_members(&self, members: &[usize]) -> Result<Subgroup, GroupError> {
        if members.iter().any(|&m| m >= self.order) {
            return Err(GroupError::InvalidSubgroup("member out of range".into()));
        }
        let set = ElementSet::from_elements(self.order, members.iter().copied());
        if !set.contains(self.identity) {
            return Err(GroupError::InvalidSubgroup("identity missing".into()));
        }
        for a in set.iter() {
            if !set.contains(self.inv(a)) {
                return Err(GroupError::InvalidSubgroup(format!("inverse of {a} missing")));
            }
            for b in set.iter() {
                if !set.contains(self.mul(a, b)) {
                    return Err(GroupError::InvalidSubgroup(format!("{a}*{b} not a member")));
                }
            }
        }
        Ok(Subgroup::from_set(set))
    }

    pub fn conjugate_subgroup(&self, h: &Subgroup, g: usize) -> Subgroup {
        Subgroup::from_set(ElementSet::from_elements(
            self.order,
            h.members().map(|x| self.conj(g, x)),
        ))
    }

    /// Cached generating set of the whole group.
    pub fn whole_generators(&self) -> &[usize] {
        self.whole_gens.get_or_init(|| self.generators(&self.whole()))
    }

    pub fn is_normal(&self, h: &Subgroup) -> bool {
        let hg = self.generators(h);
        let gg = self.whole_generators();
        gg.iter().all(|&g| hg.iter().all(|&x| h.contains(self.conj(g, x))))
    }

    /// The smallest subgroup of `within` containing `gens` and normalized by
    /// every generator of `within`.
    pub fn normal_closure_in(&self, gens: &[usize], within: &Subgroup) -> Subgroup {
        let wg = if within.is_whole() {
            self.whole_generators().to_vec()
        } else {
            self.generators(within)
        };
        let mut current = self.closure(gens);
        loop {
            let cg = self.generators(&current);
            let extra: Vec<usize> = wg
                .iter()
                .flat_map(|&w| cg.iter().map(move |&c| (w, c)))
                .map(|(w, c)| self.conj(w, c))
                .filter(|&x| !current.contains(x))
                .collect();
            if extra.is_empty() {
                return current;
            }
            current = self.join_elements(&current, &cg, &extra);
        }
    }

    pub fn normalizer(&self, h: &Subgroup) -> Subgroup {
        let hg = self.generators(h);
        let members = (0..self.order).filter(|&g| hg.iter().all(|&x| h.contains(self.conj(g, x))));
        Subgroup::from_set(ElementSet::from_elements(self.order, members))
    }

    pub fn is_abelian_subgroup(&self, h: &Subgroup) -> bool {
        let gens = self.generators(h);
        gens.iter()
            .all(|&x| gens.iter().all(|&y| self.mul(x, y) == self.mul(y, x)))
    }

    pub fn is_abelian(&self) -> bool {
        self.is_abelian_subgroup(&self.whole())
    }

    pub fn exponent_of(&self, h: &Subgroup) -> usize {
        h.members()
            .map(|g| self.element_order(g))
            .fold(1, num_integer::lcm)
    }

    pub fn exponent(&self) -> usize {
        self.exponent_of(&self.whole())
    }

    /// `⟨h^i | h ∈ H⟩`.
    pub fn power_subgroup_of(&self, h: &Subgroup, i: i64) -> Subgroup {
        let mut powers: Vec<usize> = h.members().map(|g| self.pow(g, i)).collect();
        powers.sort_unstable();
        powers.dedup();
        self.closure(&powers)
    }

    /// `[H, H]`, as the normal closure in `H` of commutators of generators.
    pub fn commutator_of(&self, h: &Subgroup) -> Subgroup {
        let gens = self.generators(h);
        let mut comms = Vec::new();
        for (i, &x) in gens.iter().enumerate() {
            for &y in &gens[i + 1..] {
                comms.push(self.commutator(x, y));
            }
        }
        self.normal_closure_in(&comms, h)
    }

    pub fn center_of(&self, h: &Subgroup) -> Subgroup {
        let gens = self.generators(h);
        let members = h
            .members()
            .filter(|&z| gens.iter().all(|&g| self.mul(z, g) == self.mul(g, z)));
        Subgroup::from_set(ElementSet::from_elements(self.order, members))
    }

    /// Materializes a subgroup as its own table, returning the table and the
    /// embedding (new index → parent index).
    pub fn subgroup_table(&self, h: &Subgroup) -> (GroupTable, Vec<usize>) {
        let members = h.member_list();
        let mut index = vec![usize::MAX; self.order];
        for (i, &m) in members.iter().enumerate() {
            index[m] = i;
        }
        let labels = self
            .labels
            .as_ref()
            .map(|l| members.iter().map(|&m| l[m].clone()).collect());
        let t = GroupTable::from_fn(
            members.len(),
            |a, b| index[self.mul(members[a], members[b])],
            labels,
        )
        .expect("subgroup of a valid group is a group");
        (t, members)
    }

    /// Order profile `(element order, count)` in ascending order.
    pub fn order_profile(&self) -> Vec<(usize, usize)> {
        let mut counts = std::collections::BTreeMap::new();
        for g in 0..self.order {
            *counts.entry(self.element_order(g)).or_insert(0) += 1;
        }
        counts.into_iter().collect()
    }

    pub fn transported(&self, labels: Option<Vec<String>>) -> GroupTable {
        GroupTable { labels, whole_gens: Default::default(), ..self.clone() }
    }
}
