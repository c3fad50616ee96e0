//! Numerical ranks of third-order tensors.
//!
//! The multi-tubal rank `(r1, r2, r3)` takes, for each mode, the largest
//! rank among the spectral slices of the mode DFT. The Tucker rank is the
//! rank of each mode matricization. For every tensor the multi-tubal rank of
//! one mode is bounded by the Tucker ranks of the other two; this is what
//! [`check_rank_bounds`] reports.

use tensor_core::{mode_fft, Mode, MatrixC, MatrixR, Tensor3};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RankError {
    #[error("rank tolerance must lie in (0, 1), got {0}")]
    Tolerance(f64),
}

/// Relative singular-value cutoff.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RankTolerance(f64);

impl RankTolerance {
    pub fn new(tau: f64) -> Result<Self, RankError> {
        if tau > 0.0 && tau < 1.0 {
            Ok(RankTolerance(tau))
        } else {
            Err(RankError::Tolerance(tau))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl Default for RankTolerance {
    fn default() -> Self {
        RankTolerance(1e-8)
    }
}

/// Per-mode ranks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct RankVector(pub [usize; 3]);

impl RankVector {
    pub fn get(&self, mode: Mode) -> usize {
        self.0[mode.axis()]
    }
}

/// Rank of a singular-value list and whether any value sits within a factor
/// of ten of the cutoff.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RankCount {
    pub rank: usize,
    pub near_threshold: bool,
}

fn count(sv: &[f64], cutoff: f64) -> RankCount {
    if cutoff <= 0.0 {
        return RankCount { rank: 0, near_threshold: false };
    }
    RankCount {
        rank: sv.iter().filter(|&&s| s > cutoff).count(),
        near_threshold: sv.iter().any(|&s| s > cutoff / 10.0 && s < cutoff * 10.0),
    }
}

fn max_of(sv: &[f64]) -> f64 {
    sv.iter().copied().fold(0.0, f64::max)
}

fn complex_sv(m: &MatrixC) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    m.clone().singular_values().iter().copied().collect()
}

fn real_sv(m: &MatrixR) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    m.clone().singular_values().iter().copied().collect()
}

/// Number of singular values above `tol * sigma_max`; zero for a zero matrix.
pub fn numerical_rank(m: &MatrixC, tol: RankTolerance) -> usize {
    let sv = complex_sv(m);
    count(&sv, tol.0 * max_of(&sv)).rank
}

/// Real-matrix counterpart of [`numerical_rank`].
pub fn numerical_rank_real(m: &MatrixR, tol: RankTolerance) -> RankCount {
    let sv = real_sv(m);
    count(&sv, tol.0 * max_of(&sv))
}

/// Per-slice rank counts of one mode, all measured against the largest
/// singular value found in any slice of that mode.
///
/// A common scale keeps slices that are zero up to roundoff from being
/// counted at full rank.
pub fn spectral_slice_ranks(t: &Tensor3, mode: Mode, tol: RankTolerance) -> Vec<RankCount> {
    let spec = mode_fft(t, mode);
    let sv: Vec<Vec<f64>> = spec.slices().iter().map(complex_sv).collect();
    let top = sv.iter().map(|s| max_of(s)).fold(0.0, f64::max);
    sv.iter().map(|s| count(s, tol.0 * top)).collect()
}

/// Multi-tubal rank with the near-threshold flag of each mode.
pub fn multi_tubal_rank_detail(t: &Tensor3, tol: RankTolerance) -> [RankCount; 3] {
    Mode::ALL.map(|mode| {
        let per = spectral_slice_ranks(t, mode, tol);
        RankCount {
            rank: per.iter().map(|c| c.rank).max().unwrap_or(0),
            near_threshold: per.iter().any(|c| c.near_threshold),
        }
    })
}

pub fn multi_tubal_rank(t: &Tensor3, tol: RankTolerance) -> RankVector {
    RankVector(multi_tubal_rank_detail(t, tol).map(|c| c.rank))
}

/// Tucker rank with the near-threshold flag of each matricization.
pub fn tucker_rank_detail(t: &Tensor3, tol: RankTolerance) -> [RankCount; 3] {
    Mode::ALL.map(|mode| numerical_rank_real(&t.matricize(mode), tol))
}

pub fn tucker_rank(t: &Tensor3, tol: RankTolerance) -> RankVector {
    RankVector(tucker_rank_detail(t, tol).map(|c| c.rank))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModeBound {
    pub multi_tubal: usize,
    /// `min` of the Tucker ranks of the two other modes.
    pub bound: usize,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankBoundReport {
    pub modes: [ModeBound; 3],
    pub multi_tubal: RankVector,
    pub tucker: RankVector,
    /// Some singular value was within a factor of ten of its cutoff.
    pub near_threshold: bool,
}

impl RankBoundReport {
    pub fn all_hold(&self) -> bool {
        self.modes.iter().all(|m| m.holds)
    }
}

/// Evaluates `r_u <= min(rank C_(v), rank C_(w))` for each mode `u`.
pub fn check_rank_bounds(t: &Tensor3, tol: RankTolerance) -> RankBoundReport {
    let mt = multi_tubal_rank_detail(t, tol);
    let tk = tucker_rank_detail(t, tol);
    let modes = Mode::ALL.map(|mode| {
        let (p, q) = mode.others();
        let bound = tk[p].rank.min(tk[q].rank);
        let r = mt[mode.axis()].rank;
        ModeBound { multi_tubal: r, bound, holds: r <= bound }
    });
    RankBoundReport {
        modes,
        multi_tubal: RankVector(mt.map(|c| c.rank)),
        tucker: RankVector(tk.map(|c| c.rank)),
        near_threshold: mt.iter().chain(tk.iter()).any(|c| c.near_threshold),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use tensor_core::Complex64;

    fn c(m: &MatrixR) -> MatrixC {
        m.map(|v| Complex64::new(v, 0.0))
    }

    #[test]
    fn matrix_ranks() {
        let tol = RankTolerance::default();
        assert_eq!(numerical_rank(&MatrixC::zeros(3, 4), tol), 0);
        assert_eq!(numerical_rank(&c(&MatrixR::identity(5, 5)), tol), 5);
        assert_eq!(numerical_rank(&c(&diag(&[1.0, 1e-4, 1e-12])), tol), 2);
    }

    fn diag(v: &[f64]) -> MatrixR {
        MatrixR::from_fn(v.len(), v.len(), |r, s| if r == s { v[r] } else { 0.0 })
    }

    #[test]
    fn tolerance_bounds() {
        assert!(RankTolerance::new(0.0).is_err());
        assert!(RankTolerance::new(1.0).is_err());
        assert_eq!(RankTolerance::new(1e-6).unwrap().value(), 1e-6);
    }

    #[test]
    fn near_threshold_flag() {
        let r = numerical_rank_real(&diag(&[1.0, 3e-8]), RankTolerance::default());
        assert_eq!(r.rank, 2);
        assert!(r.near_threshold);
    }

    #[test]
    fn zero_tensor() {
        let z = Tensor3::zeros([3, 4, 5]);
        let tol = RankTolerance::default();
        assert_eq!(multi_tubal_rank(&z, tol), RankVector([0, 0, 0]));
        assert_eq!(tucker_rank(&z, tol), RankVector([0, 0, 0]));
        assert!(check_rank_bounds(&z, tol).all_hold());
    }
}
