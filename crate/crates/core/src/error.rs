use thiserror::Error;

/// Errors raised by the conal library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConalError {
    #[error("invalid dimension {0}: need d >= 2")]
    InvalidDimension(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("length mismatch: expected {expected} components, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    /// Input that is structurally wrong: non-square, non-hermitian, NaN/Inf.
    #[error("malformed input: {0}")]
    Malformed(String),

    /// Input outside an operation's mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("validation failed: {0}")]
    Validation(String),
}

pub type Result<T> = std::result::Result<T, ConalError>;
