use std::collections::HashMap;

use serde::Serialize;

use super::subgroup::ElementSet;
use super::{all_subgroups, GroupError, GroupTable, Subgroup};

/// Largest subgroup lattice for which the cubic lattice checks run.
const LATTICE_CAP: usize = 400;

/// The subgroup lattice of a group with precomputed meet and join tables.
pub struct SubgroupLattice {
    subs: Vec<Subgroup>,
    index: HashMap<ElementSet, usize>,
    leq: Vec<Vec<bool>>,
    meet: Vec<Vec<usize>>,
    join: Vec<Vec<usize>>,
}

impl SubgroupLattice {
    pub fn new(g: &GroupTable) -> Result<Self, GroupError> {
        let subs = all_subgroups(g)?;
        if subs.len() > LATTICE_CAP {
            return Err(GroupError::EnumerationInfeasible(format!(
                "{} subgroups exceed the lattice cap {}",
                subs.len(),
                LATTICE_CAP
            )));
        }
        let n = subs.len();
        let index: HashMap<ElementSet, usize> =
            subs.iter().enumerate().map(|(i, h)| (h.set().clone(), i)).collect();
        let leq: Vec<Vec<bool>> = (0..n)
            .map(|i| (0..n).map(|j| subs[i].is_subgroup_of(&subs[j])).collect())
            .collect();
        let meet: Vec<Vec<usize>> = (0..n)
            .map(|i| (0..n).map(|j| index[subs[i].meet(&subs[j]).set()]).collect())
            .collect();
        // subs is sorted by order, so the first common upper bound is the join
        let join: Vec<Vec<usize>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).find(|&k| leq[i][k] && leq[j][k]).expect("G bounds everything"))
                    .collect()
            })
            .collect();
        Ok(SubgroupLattice { subs, index, leq, meet, join })
    }

    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subs
    }

    pub fn len(&self) -> usize {
        self.subs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subs.is_empty()
    }

    pub fn position(&self, h: &Subgroup) -> Option<usize> {
        self.index.get(h.set()).copied()
    }

    /// Whether `X ↦ X ∧ B` is a lattice isomorphism `[A, A∨B] → [A∧B, B]`.
    fn phi_is_iso(&self, a: usize, b: usize) -> bool {
        let top = self.join[a][b];
        let bottom = self.meet[a][b];
        let upper: Vec<usize> = (0..self.len()).filter(|&x| self.leq[a][x] && self.leq[x][top]).collect();
        let lower: Vec<usize> =
            (0..self.len()).filter(|&y| self.leq[bottom][y] && self.leq[y][b]).collect();
        if upper.len() != lower.len() {
            return false;
        }
        let image: Vec<usize> = upper.iter().map(|&x| self.meet[x][b]).collect();
        let mut sorted = image.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != upper.len() {
            return false;
        }
        for (i, &x) in upper.iter().enumerate() {
            for (j, &y) in upper.iter().enumerate() {
                if self.leq[x][y] != self.leq[image[i]][image[j]] {
                    return false;
                }
            }
        }
        true
    }

    fn modular_law_holds(&self) -> bool {
        let n = self.len();
        for x in 0..n {
            for z in 0..n {
                if !self.leq[x][z] {
                    continue;
                }
                for y in 0..n {
                    if self.join[x][self.meet[y][z]] != self.meet[self.join[x][y]][z] {
                        return false;
                    }
                }
            }
        }
        true
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LatticeReport {
    pub modular: bool,
    pub subgroup_count: usize,
    /// A pair `(A, B)` whose interval map is not an isomorphism.
    pub failing_pair: Option<(Subgroup, Subgroup)>,
}

pub fn phi_ab_is_isomorphism(g: &GroupTable, a: &Subgroup, b: &Subgroup) -> Result<bool, GroupError> {
    let lat = SubgroupLattice::new(g)?;
    let (ia, ib) = match (lat.position(a), lat.position(b)) {
        (Some(ia), Some(ib)) => (ia, ib),
        _ => return Err(GroupError::InvalidSubgroup("not a subgroup of this group".into())),
    };
    Ok(lat.phi_is_iso(ia, ib))
}

/// Modularity of the subgroup lattice, decided both by the interval maps
/// over all pairs and by the modular law over all triples.
pub fn is_lattice_modular(g: &GroupTable) -> Result<LatticeReport, GroupError> {
    let lat = SubgroupLattice::new(g)?;
    let n = lat.len();
    let failing = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .find(|&(a, b)| !lat.phi_is_iso(a, b));
    let by_pairs = failing.is_none();
    let by_triples = lat.modular_law_holds();
    assert_eq!(
        by_pairs, by_triples,
        "interval-map and modular-law criteria disagree"
    );
    Ok(LatticeReport {
        modular: by_pairs,
        subgroup_count: n,
        failing_pair: failing.map(|(a, b)| (lat.subs[a].clone(), lat.subs[b].clone())),
    })
}
