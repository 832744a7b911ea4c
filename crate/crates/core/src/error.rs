use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid state partition: {0}")]
    InvalidPartition(String),

    #[error("value {0} is not covered by any state of the partition")]
    UnreachableState(f64),

    #[error("invalid coarsening groups: {0}")]
    InvalidGrouping(String),

    #[error("invalid signal: {0}")]
    InvalidSignal(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("embeddings come from different partitions ({left} vs {right})")]
    PartitionMismatch { left: String, right: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("coalition analysis over {m} signals exceeds the cap of {cap}")]
    CoalitionCapExceeded { m: usize, cap: usize },

    #[error("missing cumulative value for coalition {0}")]
    MissingCoalition(String),

    #[error("zero-mass measure cannot be normalized")]
    Vacuum,

    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
