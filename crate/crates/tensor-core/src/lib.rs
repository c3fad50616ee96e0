//! Dense third-order tensor algebra.
//!
//! A [`Tensor3`] stores real entries with the first index varying fastest.
//! Mode-`u` slices fix one index and keep the remaining two in increasing
//! axis order, so a mode-1 slice is `n2 x n3`, a mode-2 slice is `n1 x n3`
//! and a mode-3 slice is `n1 x n2`. All indices in this API are zero-based.
//!
//! The generalized t-product `A *_u B` multiplies the block-circulant matrix
//! of `A` with the stacked slices of `B`. [`t_product`] evaluates it through
//! the mode-`u` DFT one spectral slice at a time, [`t_product_naive`] builds
//! the circulant matrix literally.

mod embed;
mod error;
mod product;
mod spectral;
mod tensor;

pub use embed::{embed_constraint, Placement};
pub use error::{Result, TensorError};
pub use product::{product_dims, t_product, t_product_naive};
pub use spectral::{
    mode_fft, mode_ifft, mode_ifft_with_tol, SpectralTensor, DEFAULT_IMAG_TOL,
};
pub use tensor::{Mode, Tensor3};

pub use num_complex::Complex64;

/// Real dense matrix.
pub type MatrixR = nalgebra::DMatrix<f64>;
/// Complex dense matrix.
pub type MatrixC = nalgebra::DMatrix<Complex64>;
