use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Inconsistent or out-of-range configuration (bad grid, unknown id, operator/genome mismatch).
    #[error("configuration error: {0}")]
    Config(String),

    /// A genetic operator was called with inputs it cannot handle.
    #[error("operator error: {0}")]
    Operator(String),

    /// The objective or a constraint produced a non-finite value.
    #[error("evaluation error at generation {generation}: {message} (genome {genome})")]
    Evaluation {
        generation: u64,
        genome: String,
        message: String,
    },

    /// Experiment-level failures (empty statistics input and similar).
    #[error("harness error: {0}")]
    Harness(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn operator(msg: impl Into<String>) -> Self {
        Error::Operator(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by the caller's configuration rather than by a run.
    pub fn is_config(&self) -> bool {
        matches!(self, Error::Config(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
