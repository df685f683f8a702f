use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the simulation pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("rate infeasible: {bits} bits requested but only {available:.3} bits available")]
    RateInfeasible { bits: usize, available: f64 },

    #[error("length mismatch: {what} (expected {expected}, got {actual})")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("inadmissible amplitude sequence: {0}")]
    Inadmissible(String),

    #[error("pilot index {index} out of range for {n_t} test sequences")]
    PilotIndex { index: usize, n_t: usize },

    #[error("metric undefined: {0}")]
    Metric(String),

    #[error("split-step sanity check failed: nonlinear phase {phase:.4} rad per step exceeds {bound} rad")]
    StepSize { phase: f64, bound: f64 },

    #[error("aliasing: {0}")]
    Aliasing(String),

    #[error("degenerate block: {0}")]
    Degenerate(String),

    #[error("insufficient samples: {0}")]
    Insufficient(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),

    #[error("config parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
