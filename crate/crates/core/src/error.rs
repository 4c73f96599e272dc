use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Pivot index is 0-based.
    #[error("singular system: pivot {pivot} has magnitude {magnitude:e}")]
    Singular { pivot: usize, magnitude: f64 },

    #[error("near-singular system: reciprocal condition estimate {rcond:e}")]
    IllConditioned { rcond: f64 },

    #[error(
        "conditioning guard: n = {n} exceeds {max}; floating-point verification is not \
         meaningful at this size, exact rational verification is out of scope"
    )]
    ConditioningGuard { n: usize, max: usize },

    #[error("size guard: N = {size} exceeds {max}")]
    SizeGuard { size: usize, max: usize },

    #[error("degenerate shooting denominator: |v(b)| = {0:e}")]
    DegenerateShooting(f64),

    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),

    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
