use thiserror::Error;

/// Errors raised by field arithmetic, linear algebra, verification and the
/// constructions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("invalid modulus: {0}")]
    InvalidModulus(String),

    #[error("modulus {0:?} is reducible over the prime field")]
    ReducibleModulus(Vec<u32>),

    #[error("field order {0} exceeds the supported maximum of 2^20")]
    FieldTooLarge(u128),

    #[error("{0} is not a prime power")]
    NotPrimePower(u64),

    #[error("operands belong to different fields")]
    MixedFields,

    #[error("division by zero")]
    DivisionByZero,

    #[error("value {value} is not an element of a field of order {order}")]
    InvalidElement { value: u64, order: u32 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("index {index} out of range (bound {bound})")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("duplicate index {0}")]
    DuplicateIndex(usize),

    #[error("field of order {order} is too small: {reason}")]
    FieldTooSmall { order: u32, reason: String },

    #[error("enumeration of {what} needs {needed} steps, over the budget of {budget}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        budget: u64,
    },

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("generator matrix has rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },

    #[error("not found: {0}")]
    NotFound(String),

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("gave up after {attempts} attempts: {reason}")]
    RetriesExhausted { attempts: u32, reason: String },

    #[error("puncturing would leave a code of dimension zero")]
    CodeCollapses,

    #[error("malformed code file: {0}")]
    Format(String),
}

impl Error {
    /// Short machine-readable category, stable across releases.
    pub fn category(&self) -> &'static str {
        match self {
            Error::NotPrime(_)
            | Error::InvalidModulus(_)
            | Error::ReducibleModulus(_)
            | Error::FieldTooLarge(_)
            | Error::NotPrimePower(_)
            | Error::FieldTooSmall { .. }
            | Error::InvalidParameters(_) => "invalid-parameters",
            Error::MixedFields
            | Error::DivisionByZero
            | Error::InvalidElement { .. }
            | Error::DimensionMismatch(_)
            | Error::IndexOutOfRange { .. }
            | Error::DuplicateIndex(_)
            | Error::RankDeficient { .. }
            | Error::CodeCollapses => "invalid-input",
            Error::BudgetExceeded { .. } => "budget-exceeded",
            Error::NotFound(_) => "not-found",
            Error::VerificationFailed(_) => "verification-failed",
            Error::RetriesExhausted { .. } => "retries-exhausted",
            Error::Format(_) => "parse",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
