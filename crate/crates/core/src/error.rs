use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the simulator, the theory engine and the harness.
#[derive(Debug, Error)]
pub enum QrgError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("quadrature did not converge on [{lo}, {hi}] within {budget} evaluations")]
    Quadrature { lo: f64, hi: f64, budget: usize },

    #[error("root solver failed: {0}")]
    Solver(String),

    #[error("fixed-point iteration did not converge after {iterations} iterations (last step {last_step:e})")]
    FixedPoint { iterations: usize, last_step: f64 },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("serialization error: {0}")]
    Serialize(String),

    #[error("replicate (n={n}, replicate={replicate}) panicked: {message}")]
    ReplicatePanicked {
        n: u64,
        replicate: u32,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, QrgError>;

pub(crate) fn domain(msg: impl Into<String>) -> QrgError {
    QrgError::Domain(msg.into())
}
