use thiserror::Error;

/// Errors shared by all hamspec modules.
#[derive(Debug, Error)]
pub enum HamspecError {
    /// A full-cube operation was requested for a dimension that would not fit
    /// in memory (arrays of 2^n doubles are capped at n = 24).
    #[error("dimension n = {n} exceeds the full-cube capacity n <= {max}")]
    Capacity { n: usize, max: usize },

    /// Two functions (or a function and a code) live on cubes of different
    /// dimension.
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    /// An operation required the other domain tag (point vs Fourier).
    #[error("function is in the {found} domain, expected {expected}")]
    WrongDomain { expected: &'static str, found: &'static str },

    /// A numeric or combinatorial parameter violates an operation's
    /// precondition.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An internal consistency check failed. This signals a bug in the
    /// implementation (or a broken input file), not a property of the input.
    #[error("internal consistency error: {0}")]
    Internal(String),

    /// A verification operation found a violated identity or inequality.
    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, HamspecError>;
