//! Error type shared across the crate. Variants map onto the CLI exit
//! codes: domain -> 3, overflow/capacity -> 4, I/O and cache -> 5,
//! malformed input files -> 2.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("coefficient table is not invertible: leading value is 0")]
    NonInvertible,

    #[error("non-integral coefficient at n = {0}; this spec is rational-valued")]
    NonIntegral(u64),

    #[error("truncation order too small: {0}")]
    InsufficientOrder(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("corrupt cache file: {0}")]
    CorruptCache(String),

    #[error("stale cache: spec hash mismatch (file {found:#018x}, expected {expected:#018x})")]
    StaleCache { found: u64, expected: u64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the CLI wrapper.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) => 2,
            Error::Domain(_) | Error::NonInvertible | Error::NonIntegral(_)
            | Error::InsufficientOrder(_) => 3,
            Error::Overflow(_) | Error::Capacity(_) => 4,
            Error::Io(_) | Error::CorruptCache(_) | Error::StaleCache { .. } => 5,
        }
    }
}
