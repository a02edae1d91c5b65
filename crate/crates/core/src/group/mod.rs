//! Finite groups as explicit Cayley tables, and the structural subroutines
//! (power subgroups, Frattini, commutators, Sylow 2-subgroups, subgroup
//! lattices) everything downstream consumes.

mod build;
mod lattice;
mod perm;
mod structure;
mod subgroup;
mod table;

pub use build::{build_group, PresentationSpec};
pub use lattice::{is_lattice_modular, phi_ab_is_isomorphism, LatticeReport, SubgroupLattice};
pub use perm::Permutation;
pub use structure::{
    all_subgroups, all_subgroups_with, center, commutator_subgroup, exponent, frattini,
    frattini_rank, is_abelian, min_generating_set_size, power_subgroup, quotient, sylow2,
    sylow2_seeded, EnumerationLimits,
};
pub use subgroup::{ElementSet, Subgroup, SubgroupMembers};
pub use table::{GroupTable, TABLE_CAP};

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("invalid multiplication table: {0}")]
    InvalidTable(String),
    #[error("table has no identity element")]
    NoIdentity,
    #[error("element {0} has no two-sided inverse")]
    MissingInverse(usize),
    #[error("table is not associative at ({a}, {b}, {c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("group order {order} exceeds the configured cap {cap}")]
    OrderCapExceeded { order: usize, cap: usize },
    #[error("enumeration infeasible: {0}")]
    EnumerationInfeasible(String),
    #[error("inconsistent presentation: {0}")]
    InvalidPresentation(String),
    #[error("invalid subgroup: {0}")]
    InvalidSubgroup(String),
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("group of order {0} is not a 2-group")]
    NotTwoGroup(usize),
    #[error("invalid Iwasawa structure: {0}")]
    InvalidStructure(String),
}
