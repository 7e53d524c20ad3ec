use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A spectrum value fell below the negative tolerance.
    #[error("not a valid power spectral density: S[{index}] = {value:e}")]
    NotPositiveSemidefinite { index: usize, value: f64 },

    #[error("bad frequency grid: {0}")]
    BadGrid(String),

    #[error("bad transform block: {0}")]
    BadBlock(String),

    #[error("series too short: need at least {needed} samples, got {got}")]
    TooShort { needed: usize, got: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("{0}")]
    OutOfRange(String),

    #[error("covariance is not embeddable: minimum circulant eigenvalue {min_eigenvalue:e}")]
    NotEmbeddable { min_eigenvalue: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("bisection did not reach tolerance {tol:e} (residual {residual:e})")]
    NotConverged { tol: f64, residual: f64 },
}
