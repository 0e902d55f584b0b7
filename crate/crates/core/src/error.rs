use thiserror::Error;

/// Errors raised by constructors and verifiers in this crate.
///
/// Verification *outcomes* (relation violations, failed verdicts) are data in
/// reports; this type is reserved for rejected input and broken invariants.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("characteristic {0} is neither 0 nor a prime")]
    NotPrime(u64),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("invalid scalar {text:?}: {reason}")]
    Scalar { text: String, reason: String },

    #[error("not a cochain complex: d∘d is nonzero in degrees {degrees:?}")]
    InvalidComplex { degrees: Vec<i32> },

    #[error("not a chain map: f∘d ≠ d∘f in degree {degree}")]
    NotChainMap { degree: i32 },

    #[error("not a DG category: m_{arity} nonzero")]
    NotDg { arity: usize },

    #[error("relation check failed: {0}")]
    Relations(String),

    #[error("invalid category: {0}")]
    Category(String),

    #[error("invalid adjunction data: {0}")]
    Adjunction(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("internal consistency error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
