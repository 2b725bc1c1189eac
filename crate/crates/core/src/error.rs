use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by cone construction, projection and angle computation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConeError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("vector is not unit length (norm = {norm})")]
    NonUnit { norm: f64 },

    #[error("generator {index} is zero")]
    ZeroGenerator { index: usize },

    #[error("cone has no nonzero generators")]
    EmptyCone,

    #[error("unsupported ambient dimension {0}")]
    UnsupportedDimension(usize),

    /// Iteration cap hit; carries the best iterate found so far.
    #[error("no convergence after {iterations} iterations (residual {residual})")]
    Convergence {
        iterations: usize,
        best: Vec<f64>,
        residual: f64,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },

    #[error("protocol error: {0}")]
    Protocol(String),
}

pub type Result<T> = std::result::Result<T, ConeError>;
