//! Finite fields `GF(p^k)`, linear codes over them, and quantum codes from
//! nested pairs of such codes.

pub mod code;
pub mod field;
pub mod quantum;

pub use code::{check_dual_equality, AdditiveCode, LinearCode, ENUMERATION_CAP};
pub use field::{Elem, Field, LinearForm};
pub use quantum::{gfpk_code_report, invariance_scan, quantum_code_from_pair, shift_clock, InvarianceReport, PairCode, PairReport};
