//! Quantum codes cut out by characters of a normal subgroup of an error
//! group: projections, inertia subgroups, detection and recovery.

mod characters;
mod classify;
mod frame;
mod idempotents;
mod space;

pub use characters::{
    char_projection, check_lemmas, induced_characters, inertia_subgroup, Inertia, InducedCharacter, LemmaReport,
    NormalSubgroup,
};
pub use classify::{classify_errors, detectable_span_dimension, Classification, ErrorClass, SpanReport};
pub use frame::{
    correctable_set, idempotent_frame, recover, recover_numeric, syndrome_frame, Branch, CorrectableSet,
    NumericBranch, Syndrome, SyndromeFrame,
};
pub(crate) use frame::{phase_between, test_states};
pub use idempotents::{primitive_idempotents, Idempotent, IdempotentSplit, SplitMethod};
pub use space::{is_correctable_set, is_detectable, CodeKind, CodeSpace, CorrectabilityReport};

use serde_json::json;

use crate::error::Result;

/// The isotypic component `𝓒(χ)` of `χ`.
pub fn character_code(ns: &NormalSubgroup, chi: usize) -> Result<CodeSpace> {
    CodeSpace::from_projector(
        ns.projection(chi)?,
        CodeKind::Character,
        json!({ "normal_subgroup": ns.members(), "character": chi }),
    )
}
