use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("edge list contains no edges")]
    EmptyInput,

    #[error("invalid pin set: {0}")]
    InvalidPins(String),

    #[error("every node is pinned; the grounded view is empty")]
    EmptyView,

    #[error("budget k={k} must satisfy 1 <= k < N={n}")]
    InvalidBudget { k: usize, n: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(
        "eigensolver did not converge after {iterations} iterations \
         (best lambda1={lambda1}, residual={residual:e})"
    )]
    NoConvergence { lambda1: f64, residual: f64, iterations: usize, best: Vec<f64> },

    #[error("dense oracle limited to dimension {cap}, got {dim}")]
    DimensionTooLarge { dim: usize, cap: usize },

    #[error("exhaustive search over C({n},{k}) subsets exceeds the cap of {cap}")]
    CombinatorialCap { n: usize, k: usize, cap: u64 },

    #[error("simulation diverged at t={time}")]
    Divergence { time: f64 },

    #[error("grounded view is not grounded (lambda1 = 0)")]
    Ungrounded,

    #[error("dataset {name}: cannot read {path}: {source}")]
    MissingDataset { name: String, path: PathBuf, source: std::io::Error },

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
