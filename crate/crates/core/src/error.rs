use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, FluxError>;

#[derive(Debug, Error)]
pub enum FluxError {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("plane-wave cutoff {n_max} is below the minimum of 8")]
    CutoffTooSmall { n_max: usize },

    #[error("requested {requested} levels but the basis has dimension {dimension}")]
    TooManyLevels { requested: usize, dimension: usize },

    #[error("eigensolver residuals too large: {residuals:?}")]
    EigenNotConverged { residuals: Vec<f64> },

    #[error("matrix is not Hermitian: ‖H − H†‖ = {defect:e}, ‖H‖ = {norm:e}")]
    NotHermitian { defect: f64, norm: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("pulse grids differ: {0}")]
    GridMismatch(String),

    #[error("pulse sequence needs at least {min} samples, got {got}")]
    TooFewSamples { min: usize, got: usize },

    #[error("non-finite value at step {step}")]
    NonFinite { step: usize },

    #[error("unknown gate `{0}`")]
    UnknownGate(String),

    #[error("Krotov iteration {iteration} increased the cost from {previous:e} to {current:e}")]
    CostIncrease {
        iteration: usize,
        previous: f64,
        current: f64,
    },

    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error("no run data found in {0}")]
    MissingData(PathBuf),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl FluxError {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        FluxError::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        FluxError::Io {
            path: path.into(),
            source,
        }
    }
}
