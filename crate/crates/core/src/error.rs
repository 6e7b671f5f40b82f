use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not positive definite (pivot {pivot:e} at index {index})")]
    NotPositiveDefinite { index: usize, pivot: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not symmetric (|a[{i}][{j}] - a[{j}][{i}]| = {diff:e})")]
    NotSymmetric { i: usize, j: usize, diff: f64 },

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("jacobi eigensolver did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("{0}")]
    Domain(String),

    #[error("partition {partition} is out of range: {reason}")]
    PartitionOutOfRange { partition: String, reason: String },

    #[error("zonal table degree {requested} exceeds the configured cap {cap}")]
    DegreeTooLarge { requested: usize, cap: usize },

    #[error("invalid hypergeometric parameters: {0}")]
    InvalidParameters(String),

    #[error("spectral radius {radius} of the argument is not below 1")]
    SpectralRadiusTooLarge { radius: f64 },

    #[error("hypergeometric series diverges (p > q + 1 with a non-zero argument)")]
    DivergentSeries,

    #[error("series did not converge within degree {degree_used} (partial value {value})")]
    NotConverged { value: f64, degree_used: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
