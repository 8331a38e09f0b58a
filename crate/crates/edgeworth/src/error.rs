//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
#[non_exhaustive]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("multi-index must have at least one component")]
    EmptyIndex,

    #[error("integer overflow in multi-index factorial")]
    FactorialOverflow,

    #[error("order {got} exceeds the supported maximum {max}")]
    OrderTooHigh { got: usize, max: usize },

    #[error("tensor of order {have} is too short: order {needed} required")]
    InsufficientOrder { needed: usize, have: usize },

    #[error("order must be at least 1")]
    ZeroOrder,

    #[error("no samples supplied")]
    EmptySamples,

    #[error("weight vector is not on the unit sphere: |Σθ² − 1| = {excess:.3e}")]
    NotOnSphere { excess: f64 },

    #[error("second-order cumulants deviate from the identity pattern by {0:.3e}; \
             the expansion is defined around the standard Gaussian only")]
    NotStandardized(f64),

    #[error("distribution '{0}' has no finite discrete support")]
    NotDiscrete(String),

    #[error("enumeration over {n} summands exceeds the supported maximum {max}")]
    EnumerationTooLarge { n: usize, max: usize },

    #[error("invalid set: {0}")]
    InvalidSet(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code the CLI maps this error to: 2 for configuration and
    /// input problems, 3 for numeric failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Numeric(_) | Error::FactorialOverflow => 3,
            _ => 2,
        }
    }
}
