//! Factor updates under the constraint penalties.
//!
//! For the mode whose term a constraint `W` with weight `beta` multiplies,
//! the block objective of one spectral slice is
//!
//! ```text
//! alpha/2 ||X Y - C||^2 + beta/2 ||X Y W||^2 + lambda/2 (||X||^2 + ||Y B^(1/2)||^2),
//! B = I + (beta/alpha) W W*
//! ```
//!
//! for a right-hand constraint, and symmetrically with `A = I + (beta/alpha) W* W`
//! weighting `X` for a left-hand one. Each factor step minimizes that block plus
//! the proximal term `lambda/2 ||.-.^t||^2` in the same weighted norm, which
//! has the closed forms used below and falls back to the plain updates when
//! `beta = 0`.

use completion_solver::{
    block_norm, data_residuals, mode_factor_residuals, objective_with, shifted, solve_hpd, solve_hpd_right,
    FactorModel, FactorState, ModeFactors, Result as SolveResult, SolveError, SolverConfig, Standard,
};
use data_io::ObservationMask;
use tensor_core::{Complex64, MatrixC, Mode, Tensor3};

use crate::constraints::{ConstraintSet, Side};
use crate::error::{Result, StError};

fn cx(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

#[derive(Clone, Debug)]
struct Active {
    beta: f64,
    side: Side,
    /// `B` for a right-hand constraint, `A` for a left-hand one.
    weight: MatrixC,
}

/// Spatio-temporal factor model over a fixed [`ConstraintSet`].
#[derive(Clone, Debug)]
pub struct StModel {
    constraints: ConstraintSet,
    active: [Option<Active>; 3],
}

impl StModel {
    /// Prepares the spectral constraint forms; a constrained mode needs `alpha_u > 0`.
    pub fn new(constraints: ConstraintSet, alphas: [f64; 3]) -> Result<Self> {
        let active = Mode::ALL.map(|mode| {
            constraints.on_mode(mode).map(|(beta, side)| (mode, beta, side))
        });
        let mut out: [Option<Active>; 3] = [None, None, None];
        for (slot, a) in out.iter_mut().zip(active) {
            let Some((mode, beta, side)) = a else { continue };
            let alpha = alphas[mode.axis()];
            if !(alpha > 0.0) {
                return Err(StError::Config(format!(
                    "mode {} carries a constraint but has zero weight",
                    mode.number()
                )));
            }
            let gram = match &side {
                Side::Right(w) => w * w.adjoint(),
                Side::Left(w) => w.adjoint() * w,
            };
            let mut weight = gram * cx(beta / alpha);
            for d in 0..weight.nrows() {
                weight[(d, d)] += cx(1.0);
            }
            *slot = Some(Active { beta, side, weight });
        }
        Ok(StModel { constraints, active: out })
    }

    pub fn constraints(&self) -> &ConstraintSet {
        &self.constraints
    }

    fn active(&self, mode: Mode) -> Option<&Active> {
        self.active[mode.axis()].as_ref()
    }
}

fn update_constrained(f: &mut ModeFactors, cbar: &[MatrixC], a: f64, lam: f64, act: &Active) -> SolveResult<()> {
    let n = f.n_slices();
    let half = n.min(n / 2 + 1);
    let ca = cx(a);
    let cl = cx(lam);
    for l in 0..half {
        if f.x[l].ncols() == 0 {
            continue;
        }
        let y = &f.y[l];
        let ya = y.adjoint();
        f.x[l] = match &act.side {
            Side::Right(w) => {
                let yw = y * w;
                let gram = shifted(&((y * &ya) * ca + (&yw * yw.adjoint()) * cx(act.beta)), 2.0 * lam);
                solve_hpd_right(&(&f.x[l] * cl + &cbar[l] * &ya * ca), &gram)?
            }
            Side::Left(_) => {
                let gram = shifted(&((y * &ya) * ca), 2.0 * lam);
                let wc = solve_hpd(&act.weight, &(&cbar[l] * &ya))?;
                solve_hpd_right(&(&f.x[l] * cl + wc * ca), &gram)?
            }
        };
    }
    for l in 0..half {
        if f.y[l].nrows() == 0 {
            continue;
        }
        let x = &f.x[l];
        let xa = x.adjoint();
        f.y[l] = match &act.side {
            Side::Right(_) => {
                let gram = shifted(&((&xa * x) * ca), 2.0 * lam);
                let rhs = &f.y[l] * &act.weight * cl + &xa * &cbar[l] * ca;
                solve_hpd_right(&solve_hpd(&gram, &rhs)?, &act.weight)?
            }
            Side::Left(w) => {
                let wx = w * x;
                let gram = shifted(&((&xa * x) * ca + (wx.adjoint() * &wx) * cx(act.beta)), 2.0 * lam);
                solve_hpd(&gram, &(&f.y[l] * cl + &xa * &cbar[l] * ca))?
            }
        };
    }
    f.mirror();
    Ok(())
}

/// `(sum_l ||W-term||^2 / n, sum_l ||weighted factor||^2 / n)` for one mode.
fn constraint_terms(f: &ModeFactors, side: &Side) -> (f64, f64) {
    let n = f.n_slices().max(1) as f64;
    let mut fit = 0.0;
    let mut reg = 0.0;
    for l in 0..f.n_slices() {
        match side {
            Side::Right(w) => {
                fit += (&f.x[l] * &f.y[l] * w).norm_squared();
                reg += (&f.y[l] * w).norm_squared();
            }
            Side::Left(w) => {
                fit += (w * &f.x[l] * &f.y[l]).norm_squared();
                reg += (w * &f.x[l]).norm_squared();
            }
        }
    }
    (fit / n, reg / n)
}

/// `g`: the plain objective plus the constraint penalties and their weighted
/// factor regularizers.
pub fn st_objective_with(
    state: &FactorState,
    cbars: &[Vec<MatrixC>; 3],
    model: &StModel,
    alphas: [f64; 3],
    lambda: f64,
) -> f64 {
    let mut g = objective_with(state, cbars, alphas, lambda);
    for mode in Mode::ALL {
        if let Some(act) = model.active(mode) {
            let (fit, reg) = constraint_terms(state.factors(mode), &act.side);
            g += 0.5 * act.beta * fit + 0.5 * lambda * (act.beta / alphas[mode.axis()]) * reg;
        }
    }
    g
}

/// [`st_objective_with`] at the spectra of `state.c`.
pub fn st_objective(state: &FactorState, model: &StModel, cfg: &SolverConfig) -> f64 {
    let cfg = cfg.effective();
    st_objective_with(state, &completion_solver::spectra(&state.c), model, cfg.alphas, cfg.lambda)
}

impl FactorModel for StModel {
    fn update_mode(&self, state: &mut FactorState, mode: Mode, cbar: &[MatrixC], cfg: &SolverConfig) -> SolveResult<()> {
        match self.active(mode) {
            None => Standard.update_mode(state, mode, cbar, cfg),
            Some(act) => {
                if cfg.lambda <= 0.0 {
                    return Err(SolveError::Config("constrained updates need lambda > 0".into()));
                }
                let a = cfg.alphas[mode.axis()];
                update_constrained(state.factors_mut(mode), cbar, a, cfg.lambda, act)
            }
        }
    }

    fn objective(&self, state: &FactorState, cbars: &[Vec<MatrixC>; 3], cfg: &SolverConfig) -> f64 {
        st_objective_with(state, cbars, self, cfg.alphas, cfg.lambda)
    }

    fn kkt(
        &self,
        state: &FactorState,
        cbars: &[Vec<MatrixC>; 3],
        g: &Tensor3,
        m: &Tensor3,
        mask: &ObservationMask,
        cfg: &SolverConfig,
    ) -> f64 {
        let (mut rx, mut ry) = (0.0f64, 0.0f64);
        let lam = cx(cfg.lambda);
        for mode in Mode::ALL {
            let Some(act) = self.active(mode) else {
                let (px, py) =
                    mode_factor_residuals(state.factors(mode), &cbars[mode.axis()], cfg.alphas[mode.axis()], cfg.lambda);
                rx = rx.max(px);
                ry = ry.max(py);
                continue;
            };
            let f = state.factors(mode);
            let a = cx(cfg.alphas[mode.axis()]);
            let b = cx(act.beta);
            let n = f.n_slices();
            let cbar = &cbars[mode.axis()];
            let gx = (0..n).map(|l| {
                let (x, y) = (&f.x[l], &f.y[l]);
                let r = (x * y - &cbar[l]) * a;
                match &act.side {
                    Side::Right(w) => {
                        let yw = y * w;
                        &r * y.adjoint() + x * &yw * yw.adjoint() * b + x * lam
                    }
                    Side::Left(w) => &r * y.adjoint() + w.adjoint() * w * x * y * y.adjoint() * b + &act.weight * x * lam,
                }
            });
            rx = rx.max(block_norm(gx, n));
            let gy = (0..n).map(|l| {
                let (x, y) = (&f.x[l], &f.y[l]);
                let r = (x * y - &cbar[l]) * a;
                match &act.side {
                    Side::Right(w) => x.adjoint() * &r + x.adjoint() * x * y * w * w.adjoint() * b + y * &act.weight * lam,
                    Side::Left(w) => {
                        let wx = w * x;
                        x.adjoint() * &r + wx.adjoint() * &wx * y * b + y * lam
                    }
                }
            });
            ry = ry.max(block_norm(gy, n));
        }
        let (on, off) = data_residuals(&state.c, g, m, mask);
        rx.max(ry).max(on).max(off) / (1.0 + state.c.frobenius())
    }
}
