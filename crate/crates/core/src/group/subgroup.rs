use std::fmt;

use serde::{Deserialize, Serialize};

/// A set of elements of a finite group, stored as a bitset over the
/// canonical element ordering `0..order`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementSet {
    words: Vec<u64>,
    universe: usize,
}

impl ElementSet {
    pub fn empty(universe: usize) -> Self {
        ElementSet {
            words: vec![0; universe.div_ceil(64)],
            universe,
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::empty(universe);
        for i in 0..universe {
            s.insert(i);
        }
        s
    }

    pub fn from_elements(universe: usize, elems: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(universe);
        for e in elems {
            s.insert(e);
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    #[inline]
    pub fn contains(&self, e: usize) -> bool {
        self.words[e >> 6] >> (e & 63) & 1 == 1
    }

    /// Inserts `e`, returning true if it was not present.
    #[inline]
    pub fn insert(&mut self, e: usize) -> bool {
        let w = &mut self.words[e >> 6];
        let bit = 1u64 << (e & 63);
        let fresh = *w & bit == 0;
        *w |= bit;
        fresh
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn intersection(&self, other: &ElementSet) -> ElementSet {
        ElementSet {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
            universe: self.universe,
        }
    }

    pub fn union(&self, other: &ElementSet) -> ElementSet {
        ElementSet {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect(),
            universe: self.universe,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let tz = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + tz)
                }
            })
        })
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A subgroup of a [`GroupTable`](super::GroupTable), identified by its
/// member set. Subgroups do not borrow their parent; every operation that
/// needs the multiplication takes the parent table explicitly.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subgroup {
    members: ElementSet,
    order: usize,
}

impl Subgroup {
    /// Wraps a member set. The caller guarantees closure.
    pub(crate) fn from_set(members: ElementSet) -> Self {
        let order = members.len();
        Subgroup { members, order }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn parent_order(&self) -> usize {
        self.members.universe()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.members.contains(g)
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter()
    }

    pub fn member_list(&self) -> Vec<usize> {
        self.members.iter().collect()
    }

    pub fn set(&self) -> &ElementSet {
        &self.members
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn is_whole(&self) -> bool {
        self.order == self.members.universe()
    }

    pub fn meet(&self, other: &Subgroup) -> Subgroup {
        Subgroup::from_set(self.members.intersection(&other.members))
    }
}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by subgroup order first, then by sorted member list.
impl Ord for Subgroup {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.order
            .cmp(&other.order)
            .then_with(|| self.members.iter().cmp(other.members.iter()))
    }
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup(order {}, {:?})", self.order, self.members)
    }
}

impl Serialize for Subgroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.member_list().serialize(s)
    }
}

/// Member lists deserialize without a parent; [`GroupTable::subgroup_from_members`]
/// re-validates closure.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SubgroupMembers(pub Vec<usize>);
