use std::path::PathBuf;

use completion_solver::SolveError;
use tensor_core::TensorError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum StError {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Solve(#[from] SolveError),

    #[error(transparent)]
    Tensor(#[from] TensorError),
}

pub type Result<T> = std::result::Result<T, StError>;
