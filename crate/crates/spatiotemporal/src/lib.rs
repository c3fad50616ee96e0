//! Spatio-temporal constraints for tensor completion.
//!
//! Sequences of spatial maps (traffic matrices, video frames) are usually
//! smooth in time and correlated across locations. Three matrices encode
//! that: `H` differences consecutive frames, while `F` and `G` express each
//! row or column slice as a regression on the others. Their penalties are
//! attached to the three mode terms of the completion model and the factor
//! updates are adjusted accordingly; see [`model`] for the block objectives.

mod constraints;
mod error;
pub mod model;
mod pipeline;

pub use constraints::{
    build_spatial, build_temporal, default_ridge, matrix_csv, write_matrix_csv, ConstraintSet, Side,
};
pub use error::{Result, StError};
pub use model::{st_objective, st_objective_with, StModel};
pub use pipeline::{learn_spatial, run_st, StConfig, StResult};
