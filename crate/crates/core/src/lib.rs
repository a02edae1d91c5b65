//! Exact computations around trace forms of Galois algebras over fields
//! containing a primitive fourth root of unity.

pub mod cli;
pub mod corpus;
pub mod field;
pub mod form;
pub mod group;
pub mod iwasawa;
pub mod oracle;
pub mod suites;
