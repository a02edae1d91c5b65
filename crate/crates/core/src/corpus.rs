//! The fixed list of named groups the suites and `group corpus-check` run
//! over.

use serde::{Deserialize, Serialize};

use crate::group::{build_group, GroupError, GroupTable, Permutation, PresentationSpec};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub name: String,
    pub spec: PresentationSpec,
}

impl CorpusEntry {
    fn new(name: impl Into<String>, spec: PresentationSpec) -> Self {
        CorpusEntry { name: name.into(), spec }
    }

    pub fn build(&self) -> Result<GroupTable, GroupError> {
        build_group(&self.spec)
    }
}

fn cyclic(n: usize) -> PresentationSpec {
    PresentationSpec::Cyclic { n }
}

fn product(factors: Vec<PresentationSpec>) -> PresentationSpec {
    PresentationSpec::DirectProduct { factors }
}

fn perms(degree: usize, gens: &[&[&[usize]]]) -> PresentationSpec {
    let generators = gens
        .iter()
        .map(|c| Permutation::from_cycles(degree, c).expect("valid cycles").images().to_vec())
        .collect();
    PresentationSpec::PermutationGenerated { degree, generators }
}

/// Generators of S3, S4, A4, A5 and PSL(2,7) (acting on the seven points
/// of the Fano plane with lines `{i, i+1, i+3}`).
pub fn s3() -> PresentationSpec {
    perms(3, &[&[&[0, 1]], &[&[0, 1, 2]]])
}

pub fn s4() -> PresentationSpec {
    perms(4, &[&[&[0, 1]], &[&[0, 1, 2, 3]]])
}

pub fn a4() -> PresentationSpec {
    perms(4, &[&[&[0, 1, 2]], &[&[0, 1], &[2, 3]]])
}

pub fn a5() -> PresentationSpec {
    perms(5, &[&[&[0, 1, 2]], &[&[0, 1, 2, 3, 4]]])
}

pub fn psl27() -> PresentationSpec {
    perms(7, &[&[&[0, 1, 2, 3, 4, 5, 6]], &[&[2, 4], &[5, 6]]])
}

/// The metacyclic group of order 256 with `a` of order 32, `t⁸ = a⁴` and
/// `t a t⁻¹ = a⁹`.
pub fn example_44() -> PresentationSpec {
    PresentationSpec::IwasawaZ { a_exponents: vec![5], s: 3, q: 3, a0: vec![4] }
}

/// Every entry, in a fixed order. Two-groups come first and have order at
/// most 256.
pub fn corpus() -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    for k in 1..=5 {
        out.push(CorpusEntry::new(format!("C{}", 1 << k), cyclic(1 << k)));
    }
    for e in 1..=4u32 {
        for r in 2..=3 {
            if e as usize * r <= 8 {
                let n = 1usize << e;
                out.push(CorpusEntry::new(format!("C{n}^{r}"), product(vec![cyclic(n); r])));
            }
        }
    }
    for ns in [&[2, 4][..], &[2, 8], &[4, 8], &[2, 2, 4], &[2, 4, 8], &[4, 16]] {
        let name = ns.iter().map(|n| format!("C{n}")).collect::<Vec<_>>().join("x");
        out.push(CorpusEntry::new(name, product(ns.iter().map(|&n| cyclic(n)).collect())));
    }
    for n in 4..=6 {
        out.push(CorpusEntry::new(format!("M{}", 1 << n), PresentationSpec::ModularM2n { n }));
    }
    for order in [8, 16, 32] {
        out.push(CorpusEntry::new(format!("D{order}"), PresentationSpec::Dihedral { order }));
        out.push(CorpusEntry::new(format!("Q{order}"), PresentationSpec::Quaternion { order }));
        if order > 8 {
            out.push(CorpusEntry::new(format!("SD{order}"), PresentationSpec::Semidihedral { order }));
        }
    }
    out.push(CorpusEntry::new("example-4.4", example_44()));
    // (Z/2^e)^r ⋊ ⟨t⟩ with t acting by a ↦ a^(1+2^s), split (t^(2^q) = 1);
    // only parameters where that automorphism has order dividing 2^q.
    for e in 1..=4u32 {
        for r in 1..=2u32 {
            for s in [2u32, 3] {
                for q in [1u32, 2] {
                    if s >= e || e - s > q || e * r + q > 8 {
                        continue;
                    }
                    out.push(CorpusEntry::new(
                        format!("iwasawa-e{e}-r{r}-s{s}-q{q}"),
                        PresentationSpec::IwasawaZ { a_exponents: vec![e; r as usize], s, q, a0: vec![0; r as usize] },
                    ));
                }
            }
        }
    }
    out.push(CorpusEntry::new("S3", s3()));
    out.push(CorpusEntry::new("S4", s4()));
    out.push(CorpusEntry::new("A4", a4()));
    out.push(CorpusEntry::new("A5", a5()));
    out.push(CorpusEntry::new("PSL(2,7)", psl27()));
    out.push(CorpusEntry::new("S3xM16", product(vec![s3(), PresentationSpec::ModularM2n { n: 4 }])));
    out.push(CorpusEntry::new("C3xQ8", product(vec![cyclic(3), PresentationSpec::Quaternion { order: 8 }])));
    out
}

/// The entries whose groups are 2-groups.
pub fn two_group_corpus() -> Vec<(CorpusEntry, GroupTable)> {
    corpus()
        .into_iter()
        .map(|e| {
            let g = e.build().expect("corpus entries build");
            (e, g)
        })
        .filter(|(_, g)| g.is_two_group())
        .collect()
}

pub fn find(name: &str) -> Option<CorpusEntry> {
    corpus().into_iter().find(|e| e.name == name)
}
