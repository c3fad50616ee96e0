use data_io::DataError;
use tensor_core::TensorError;
use thiserror::Error;

use crate::trace::TraceRow;

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("numerical failure at iteration {iter}: {message}")]
    Numerical {
        iter: usize,
        message: String,
        trace: Vec<TraceRow>,
    },

    #[error(transparent)]
    Tensor(#[from] TensorError),

    #[error(transparent)]
    Data(#[from] DataError),
}

pub type Result<T> = std::result::Result<T, SolveError>;
