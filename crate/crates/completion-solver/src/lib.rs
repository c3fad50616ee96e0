//! Low multi-tubal-rank tensor completion.
//!
//! The completed tensor `C` is modelled, for each mode `u`, as a t-product
//! `X_u *_u Y_u` of two thin factors kept in the mode-`u` spectrum, one
//! factor pair per spectral slice. The weights `alpha_u` combine the three
//! modes. Each iteration
//!
//! 1. resets `C` to the combined reconstruction off the observed set and to
//!    the data on it,
//! 2. updates every `X_l`, then every `Y_l`, by a ridge-regularized
//!    proximal least-squares solve,
//! 3. optionally lowers slice ranks by the eigenvalue-gap rule,
//!
//! and stops once the reconstruction matches the observations to within
//! `epsilon` or after `max_iter` iterations.
//!
//! The TCTF configuration ([`Algorithm::Tctf`]) keeps mode 3 only, drops
//! the regularization and uses pseudo-inverse updates.

mod config;
mod error;
mod objective;
mod rank;
mod solve;
mod state;
mod trace;
mod update;

pub use config::{Algorithm, InitialRank, SolverConfig};
pub use error::{Result, SolveError};
pub use objective::{
    block_norm, data_residuals, factor_residuals, fit_sq, kkt_residual, mode_factor_residuals, objective,
    objective_with,
    spectra,
};
pub use rank::{decrease_mode, decrease_rank, energy_cut, gap_statistic, truncate_slice};
pub use solve::{
    obs_residual, run, run_model, step_sq, update_c, FactorModel, SolveResult, Standard, StopReason,
};
pub use state::{init_state, reconstruct, FactorState, ModeFactors};
pub use trace::{trace_csv, TraceRow};
pub use update::{
    pinv, shifted, solve_hpd, solve_hpd_right, update_x, update_x_pinv, update_y, update_y_pinv,
};
