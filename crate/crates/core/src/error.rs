use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("sqrt of zero has no C+ representative")]
    SqrtOfZero,

    /// Recoverable: the exact square root leaves Q(i). Callers switch to
    /// approximate arithmetic when they see this.
    #[error("irrational root: {0} is not a square in Q(i)")]
    IrrationalRoot(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("malformed scalar {input:?} at column {column}: {message}")]
    ParseScalar {
        input: String,
        column: usize,
        message: String,
    },

    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("degenerate {0} block")]
    Degenerate(&'static str),

    #[error("out of classified range: {0}")]
    OutOfRange(String),

    #[error("rotation undefined on isotropic vector")]
    IsotropicRotation,

    /// Internal verification failed. Indicates an arithmetic bug or an
    /// approximate witness that missed its tolerance.
    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
