use completion_solver::SolveError;
use data_io::DataError;
use metrics::MetricsError;
use spatiotemporal::StError;
use tensor_core::TensorError;
use thiserror::Error;

/// Failure classes, one per process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error("i/o: {0}")]
    Io(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
            CliError::Numerical(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

impl From<DataError> for CliError {
    fn from(e: DataError) -> Self {
        match e {
            DataError::Io { .. } | DataError::Format { .. } => CliError::Io(e.to_string()),
            DataError::Config(_) | DataError::Tensor(_) => CliError::Usage(e.to_string()),
        }
    }
}

impl From<TensorError> for CliError {
    fn from(e: TensorError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<SolveError> for CliError {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::Config(_) | SolveError::Input(_) => CliError::Usage(e.to_string()),
            SolveError::Data(d) => d.into(),
            SolveError::Numerical { .. } | SolveError::Tensor(_) => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<StError> for CliError {
    fn from(e: StError) -> Self {
        match e {
            StError::Config(_) => CliError::Usage(e.to_string()),
            StError::Io { .. } => CliError::Io(e.to_string()),
            StError::Solve(s) => s.into(),
            StError::Tensor(_) => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<MetricsError> for CliError {
    fn from(e: MetricsError) -> Self {
        CliError::Usage(e.to_string())
    }
}
