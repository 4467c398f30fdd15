use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("cyclotomic order {0} exceeds the embedding cap")]
    OrderCap(u64),

    #[error("shape mismatch in {op}: {left:?} vs {right:?}")]
    ShapeMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("matrix is not invertible")]
    Singular,

    #[error("proportionality against the zero matrix is ambiguous")]
    ZeroReference,

    #[error("group too large or infinite: closure exceeded {cap} elements")]
    GroupTooLarge { cap: usize },

    #[error("group order {order} exceeds the cap {cap} for {what}")]
    GroupCap {
        what: &'static str,
        order: usize,
        cap: usize,
    },

    #[error("not a subgroup: {0}")]
    NotSubgroup(String),

    #[error("subgroup is not normal")]
    NotNormal,

    #[error("not a homomorphism: {0}")]
    NotHomomorphism(String),

    #[error("image outside the normalizer: {0}")]
    OutsideNormalizer(String),

    #[error("center is not mapped to scalars: {0}")]
    CenterNotScalar(String),

    #[error("not an irreducible character: {0}")]
    NotIrreducible(String),

    #[error("character does not appear in the representation")]
    CharacterAbsent,

    #[error("polynomial is reducible over Z_{p}")]
    ReduciblePolynomial { p: u64 },

    #[error("linear form is degenerate")]
    DegenerateForm,

    #[error("set is not detectable: {0}")]
    NotDetectable(String),

    #[error("state is not normalized")]
    NotNormalized,

    #[error("no exact normalization: {0}")]
    NoExactNormalization(String),

    #[error("numeric splitting failed: {0}")]
    NumericSplit(String),

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error("code too large: {0}")]
    CodeTooLarge(String),

    #[error("workspace: {0}")]
    Workspace(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable machine-readable tag, used by the CLI and the C ABI.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "invalid_argument",
            Error::OrderCap(_) => "order_cap",
            Error::ShapeMismatch { .. } => "shape_mismatch",
            Error::Singular => "singular",
            Error::ZeroReference => "zero_reference",
            Error::GroupTooLarge { .. } => "group_too_large",
            Error::GroupCap { .. } => "group_cap",
            Error::NotSubgroup(_) => "not_subgroup",
            Error::NotNormal => "not_normal",
            Error::NotHomomorphism(_) => "not_homomorphism",
            Error::OutsideNormalizer(_) => "outside_normalizer",
            Error::CenterNotScalar(_) => "center_not_scalar",
            Error::NotIrreducible(_) => "not_irreducible",
            Error::CharacterAbsent => "character_absent",
            Error::ReduciblePolynomial { .. } => "reducible_polynomial",
            Error::DegenerateForm => "degenerate_form",
            Error::NotDetectable(_) => "not_detectable",
            Error::NotNormalized => "not_normalized",
            Error::NoExactNormalization(_) => "no_exact_normalization",
            Error::NumericSplit(_) => "numeric_split",
            Error::Inconsistent(_) => "inconsistent",
            Error::CodeTooLarge(_) => "code_too_large",
            Error::Workspace(_) => "workspace",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }

    /// `{"error": {"kind": …, "message": …}}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "error": { "kind": self.kind(), "message": self.to_string() } })
    }
}
