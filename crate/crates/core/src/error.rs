use std::path::PathBuf;

use thiserror::Error;

/// Errors raised while specifying, planning, simulating or training.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate function: every sample is zero")]
    DegenerateFunction,

    #[error("function has singular points or zeros at {points:?}; use the singular planner")]
    Singularity { points: Vec<f64> },

    #[error("eta = {eta} exceeds 8*pi; raise k0 manually or use the singular planner")]
    EtaTooLarge { eta: f64 },

    #[error("interior singular point at {0} cannot be clustered")]
    UnsupportedSingularity(f64),

    #[error("bound |d2 log f|(2^(1-k)) * 4^(1-k) does not vanish: {0}")]
    BoundViolation(String),

    #[error("block index {k} out of range for {n} qubits")]
    Index { k: usize, n: usize },

    #[error("dimension mismatch: {left} vs {right} qubits")]
    Dimension { left: usize, right: usize },

    #[error("training diverged at step {step}: loss {loss} (initial {initial})")]
    Divergence {
        step: usize,
        loss: f64,
        initial: f64,
        trace: Vec<f64>,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
