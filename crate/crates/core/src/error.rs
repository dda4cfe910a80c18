use thiserror::Error;

/// Errors raised by distribution, equilibrium, and model operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The mean feeding equilibrium level `level` is zero, so that level
    /// cannot be normalized.
    #[error("equilibrium level {level} is undefined: the previous level has zero mean")]
    ZeroMean { level: usize },

    #[error("did not converge: {0}")]
    NonConvergent(String),

    #[error("marginal distribution is degenerate (zero variance)")]
    ZeroVariance,

    #[error("dimension {n} is not supported here (supported: {supported})")]
    UnsupportedDimension { n: usize, supported: String },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A quantity that is provably non-negative came out clearly negative.
    #[error("integrity violation in {what}: value {value:e}")]
    Integrity { what: String, value: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
