//! Error type shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Input lengths or shapes disagree with what the operation requires.
    #[error("dimension mismatch in {context}: expected {expected}, got {actual}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        actual: usize,
    },

    /// A hold-out column produced a median-of-means variance of exactly zero.
    /// Truncation levels and standardization weights are undefined in that case.
    #[error("degenerate variance estimate (zero) in coordinate {coord}")]
    DegenerateVariance { coord: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("matrix is not symmetric: |a[{i}][{j}] - a[{j}][{i}]| = {delta:e}")]
    NotSymmetric { i: usize, j: usize, delta: f64 },

    /// An eigenvalue fell below the clamping tolerance for PSD inputs.
    #[error("matrix is not positive semidefinite: eigenvalue {value:e}")]
    NotPositiveSemidefinite { value: f64 },

    #[error("Jacobi eigendecomposition did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("curve grids do not match: {reason}")]
    GridMismatch { reason: String },

    #[error("too few curves: need at least {needed}, got {got}")]
    TooFewCurves { needed: usize, got: usize },

    /// Configuration parse or validation failure; names the offending field.
    #[error("config field `{field}`: {reason}")]
    Config { field: String, reason: String },

    /// Malformed input data file (CSV records, timestamps, prices).
    #[error("malformed input at record {record}: {reason}")]
    Malformed { record: usize, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
