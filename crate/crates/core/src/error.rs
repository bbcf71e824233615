use alloc::string::String;

/// Errors raised by game construction, equilibrium builders and the oracle.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("index {index} out of range for {len} types")]
    IndexOutOfRange { index: usize, len: usize },

    /// Parameters outside the range where a closed form is known.
    #[error("out of regime: {0}")]
    OutOfRegime(String),

    #[error("unsupported case: {0}")]
    Unsupported(String),
}

pub type Result<T> = core::result::Result<T, Error>;
