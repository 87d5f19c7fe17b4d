use thiserror::Error;

/// Errors raised by the kernel, series and transform machinery.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("dimension {0} is not supported (must be between {1} and {2})")]
    UnsupportedDimension(usize, usize, usize),

    #[error("kernel index {i} out of range for dimension {m} (must satisfy 0 <= i <= m - 2)")]
    IndexOutOfRange { m: usize, i: usize },

    #[error("Bessel order {0}/2 is not supported")]
    UnsupportedOrder(i64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("polynomial is not harmonic")]
    NonHarmonic,

    #[error("cannot divide by s: term with s-power 0 (order {twice_order}/2)")]
    NegativeSPower { twice_order: i32 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
