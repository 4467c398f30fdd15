//! Nice unitary error bases, error groups and the quantum codes built from
//! characters of their normal subgroups, in exact cyclotomic arithmetic.

pub mod cli;
pub mod codes;
pub mod cyclo;
mod error;
pub mod error_basis;
pub mod gfpk;
pub mod groups;
pub mod instances;
pub mod numth;
pub mod transversal;
pub mod workspace;

pub use error::{Error, Result};
