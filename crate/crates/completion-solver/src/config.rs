use tensor_core::{Mode, DEFAULT_IMAG_TOL};

use crate::error::{Result, SolveError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algorithm {
    /// All three modes, ridge-regularized proximal updates.
    Mtrtc,
    /// Mode 3 only, unregularized pseudo-inverse updates.
    Tctf,
}

/// Starting rank of every spectral slice.
#[derive(Clone, Debug, PartialEq)]
pub enum InitialRank {
    /// One rank per mode, shared by all slices of that mode.
    PerMode([usize; 3]),
    /// Explicit per-slice ranks; mirror slices `l` and `n_u - l` must agree.
    PerSlice([Vec<usize>; 3]),
}

impl InitialRank {
    pub fn slice_ranks(&self, mode: Mode, n: usize) -> Vec<usize> {
        match self {
            InitialRank::PerMode(r) => vec![r[mode.axis()]; n],
            InitialRank::PerSlice(v) => v[mode.axis()].clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    pub algorithm: Algorithm,
    pub alphas: [f64; 3],
    pub lambda: f64,
    pub epsilon: f64,
    pub max_iter: usize,
    pub initial_rank: InitialRank,
    pub seed: u64,
    pub rank_decrease: bool,
    /// Gap statistic that triggers a rank cut.
    pub tau_drop: f64,
    /// Fraction of pooled eigenvalue energy kept by a rank cut.
    pub energy: f64,
    /// Largest relative imaginary residue tolerated when leaving the spectrum.
    pub imag_tol: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            algorithm: Algorithm::Mtrtc,
            alphas: [1.0 / 3.0; 3],
            lambda: 0.1,
            epsilon: 1e-5,
            max_iter: 300,
            initial_rank: InitialRank::PerMode([5, 5, 5]),
            seed: 0,
            rank_decrease: true,
            tau_drop: 10.0,
            energy: 0.95,
            imag_tol: DEFAULT_IMAG_TOL,
        }
    }
}

impl SolverConfig {
    /// The mode-3-only baseline at the given tubal rank.
    pub fn tctf(rank: usize) -> Self {
        SolverConfig {
            algorithm: Algorithm::Tctf,
            alphas: [0.0, 0.0, 1.0],
            lambda: 0.0,
            initial_rank: InitialRank::PerMode([0, 0, rank]),
            ..SolverConfig::default()
        }
    }

    /// Configuration actually used by the solver: the baseline forces its
    /// weights, zero regularization and empty factors on modes 1 and 2.
    pub fn effective(&self) -> SolverConfig {
        let mut cfg = self.clone();
        if cfg.algorithm == Algorithm::Tctf {
            cfg.alphas = [0.0, 0.0, 1.0];
            cfg.lambda = 0.0;
            cfg.initial_rank = match &cfg.initial_rank {
                InitialRank::PerMode(r) => InitialRank::PerMode([0, 0, r[2]]),
                InitialRank::PerSlice(v) => {
                    InitialRank::PerSlice([Vec::new(), Vec::new(), v[2].clone()])
                }
            };
        }
        cfg
    }

    /// Checks the configuration against tensor dims.
    pub fn validate(&self, dims: [usize; 3]) -> Result<()> {
        let bad = |m: String| Err(SolveError::Config(m));
        if self.alphas.iter().any(|a| !(a.is_finite() && *a >= 0.0)) {
            return bad(format!("alphas {:?} must be nonnegative", self.alphas));
        }
        let sum: f64 = self.alphas.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return bad(format!("alphas {:?} must sum to 1", self.alphas));
        }
        match self.algorithm {
            Algorithm::Mtrtc if !(self.lambda > 0.0 && self.lambda.is_finite()) => {
                return bad(format!("lambda must be positive, got {}", self.lambda));
            }
            _ => {}
        }
        if !(self.epsilon > 0.0) {
            return bad(format!("epsilon must be positive, got {}", self.epsilon));
        }
        if !(self.tau_drop > 0.0) || !(self.energy > 0.0 && self.energy <= 1.0) {
            return bad("rank-decrease parameters out of range".into());
        }
        let eff = self.effective();
        for mode in Mode::ALL {
            if eff.algorithm == Algorithm::Tctf && mode != Mode::Three {
                continue;
            }
            let n = dims[mode.axis()];
            let (rows, cols) = mode.slice_shape(dims);
            let ranks = eff.initial_rank.slice_ranks(mode, n);
            if ranks.len() != n {
                return bad(format!(
                    "mode {} needs {} slice ranks, got {}",
                    mode.number(),
                    n,
                    ranks.len()
                ));
            }
            for (l, &r) in ranks.iter().enumerate() {
                if r > rows.min(cols) {
                    return bad(format!(
                        "initial rank {} of mode {} slice {} exceeds min({rows}, {cols})",
                        r,
                        mode.number(),
                        l
                    ));
                }
                if l > 0 && ranks[n - l] != r {
                    return bad(format!(
                        "mode {} slices {} and {} are conjugate and need equal ranks",
                        mode.number(),
                        l,
                        n - l
                    ));
                }
            }
        }
        Ok(())
    }
}
