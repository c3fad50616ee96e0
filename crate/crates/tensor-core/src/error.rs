use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TensorError {
    #[error("index {index} out of range for mode {mode} of size {size}")]
    Index { mode: usize, index: usize, size: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("non-finite entry at linear offset {0}")]
    NonFinite(usize),

    #[error("imaginary residue {residue:e} exceeds tolerance {tol:e}")]
    ImaginaryResidue { residue: f64, tol: f64 },
}

pub type Result<T> = std::result::Result<T, TensorError>;
