use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("wrong number of arguments: expected {expected}, found {found}")]
    Arity { expected: usize, found: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("polytope is not full-dimensional")]
    NotFullDimensional,

    #[error("dimension {dim} exceeds the supported maximum of {max}")]
    DimensionCap { dim: usize, max: usize },

    #[error("direction vector must be nonzero")]
    ZeroVector,

    #[error("Newton polytope is degenerate (lower-dimensional)")]
    DegenerateNewtonPolytope,

    #[error("target model does not dominate the divisor's model")]
    NotDominating,

    #[error("divisors live on different models")]
    ModelMismatch,

    #[error("invalid divisor data: {0}")]
    InvalidDivisor(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("field size outside desk-scale caps: {0}")]
    FieldCap(String),

    #[error("enumeration of {points} torus points exceeds the cap of {cap}")]
    EnumerationCap { points: u128, cap: u128 },

    #[error("ring signature mismatch")]
    SignatureMismatch,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An internal consistency check failed, e.g. a root count above the
    /// mixed volume. Signals a bug, never a user error.
    #[error("invariant breach: {0}")]
    InvariantBreach(String),
}

impl Error {
    /// Stable machine-readable code used in CLI error reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::Arity { .. } => "arity",
            Error::Empty(_) => "empty_input",
            Error::NotFullDimensional => "not_full_dimensional",
            Error::DimensionCap { .. } => "dimension_cap",
            Error::ZeroVector => "zero_vector",
            Error::DegenerateNewtonPolytope => "degenerate_newton_polytope",
            Error::NotDominating => "not_dominating",
            Error::ModelMismatch => "model_mismatch",
            Error::InvalidDivisor(_) => "invalid_divisor",
            Error::NotPrime(_) => "not_prime",
            Error::FieldCap(_) => "field_cap",
            Error::EnumerationCap { .. } => "enumeration_cap",
            Error::SignatureMismatch => "signature_mismatch",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::InvariantBreach(_) => "invariant_breach",
        }
    }
}
