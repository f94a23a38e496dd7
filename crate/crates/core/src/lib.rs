//! Finite-scale verification of the information capacity of single-relation
//! schemas with keys and inclusion dependencies.
//!
//! The crate enumerates schema instances over bounded domains, evaluates
//! exact cardinality formulas, runs and checks generic injective mappings
//! between schemas, computes automorphism-based non-dominance certificates
//! and assembles dominance Hasse diagrams from the collected evidence.

pub mod counting;
pub mod enumeration;
pub mod equivariance;
pub mod error;
pub mod exec;
pub mod ids;
pub mod lattice;
pub mod mappings;
pub mod perm;
pub mod relmodel;
pub mod sbchain;

pub use error::{Error, Result};
pub use exec::Exec;
pub use perm::Permutation;
