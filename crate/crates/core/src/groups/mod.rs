//! Finite groups: closure of matrix generators, table-level structure,
//! character tables and isomorphism testing.

pub mod abstract_group;
pub mod chartable;
pub mod iso;
pub mod matrix_group;
pub mod named;

pub use abstract_group::{AbstractGroup, Quotient, TABLE_CAP};
pub use chartable::{CharacterTable, DEFAULT_CHARTABLE_CAP};
pub use iso::{find_isomorphism, isomorphic};
pub use matrix_group::{FiniteMatrixGroup, DEFAULT_CAP};
