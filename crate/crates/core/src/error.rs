use thiserror::Error;

/// Errors raised by the symbolic and numerical layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("frame mismatch: {0}")]
    FrameMismatch(String),

    #[error("operation requires n = 3 (T*R^3), got n = {0}")]
    NotThreeDimensional(usize),

    #[error("trajectory average does not vanish; offending resonant monomials: {monomials:?}")]
    NonzeroAverage { monomials: Vec<String> },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("quadrature did not converge: {0}")]
    NoConvergence(String),

    #[error("QR iteration failed to converge in active block [{lo}, {hi}] after {iterations} iterations")]
    QrNoConvergence { lo: usize, hi: usize, iterations: usize },

    #[error("regime mismatch: {0}")]
    Regime(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
