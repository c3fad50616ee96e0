use std::time::Instant;

use data_io::ObservationMask;
use tensor_core::{MatrixC, Mode, Tensor3};

use crate::config::{Algorithm, SolverConfig};
use crate::error::{Result, SolveError};
use crate::objective::{data_residuals, factor_residuals, objective_with, spectra};
use crate::rank::decrease_rank;
use crate::state::{init_state, reconstruct, FactorState, ModeFactors};
use crate::trace::TraceRow;
use crate::update::{update_x, update_x_pinv, update_y, update_y_pinv};

/// The parts of the scheme that differ between model variants.
pub trait FactorModel {
    /// Updates every `X_l` of `mode`, then every `Y_l`, against the spectra of the current `C`.
    fn update_mode(&self, state: &mut FactorState, mode: Mode, cbar: &[MatrixC], cfg: &SolverConfig) -> Result<()>;

    /// Objective value at `state`, given the spectra of `state.c`.
    fn objective(&self, state: &FactorState, cbars: &[Vec<MatrixC>; 3], cfg: &SolverConfig) -> f64;

    /// Stationarity residual normalized by `1 + ||C||`; `g` is the current reconstruction.
    fn kkt(
        &self,
        state: &FactorState,
        cbars: &[Vec<MatrixC>; 3],
        g: &Tensor3,
        m: &Tensor3,
        mask: &ObservationMask,
        cfg: &SolverConfig,
    ) -> f64;
}

/// The plain model (and its TCTF degeneration).
#[derive(Clone, Copy, Debug, Default)]
pub struct Standard;

impl FactorModel for Standard {
    fn update_mode(&self, state: &mut FactorState, mode: Mode, cbar: &[MatrixC], cfg: &SolverConfig) -> Result<()> {
        let a = cfg.alphas[mode.axis()];
        let f = state.factors_mut(mode);
        let half = f.n_slices().min(f.n_slices() / 2 + 1);
        for l in 0..half {
            f.x[l] = match cfg.algorithm {
                Algorithm::Tctf => update_x_pinv(&f.x[l], &f.y[l], &cbar[l]),
                Algorithm::Mtrtc => update_x(&f.x[l], &f.y[l], &cbar[l], a, cfg.lambda)?,
            };
        }
        for l in 0..half {
            f.y[l] = match cfg.algorithm {
                Algorithm::Tctf => update_y_pinv(&f.x[l], &f.y[l], &cbar[l]),
                Algorithm::Mtrtc => update_y(&f.x[l], &f.y[l], &cbar[l], a, cfg.lambda)?,
            };
        }
        f.mirror();
        Ok(())
    }

    fn objective(&self, state: &FactorState, cbars: &[Vec<MatrixC>; 3], cfg: &SolverConfig) -> f64 {
        objective_with(state, cbars, cfg.alphas, cfg.lambda)
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
        let (rx, ry) = factor_residuals(state, cbars, cfg.alphas, cfg.lambda);
        let (on, off) = data_residuals(&state.c, g, m, mask);
        rx.max(ry).max(on).max(off) / (1.0 + state.c.frobenius())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopReason {
    /// The reconstruction matched the observations to within `epsilon`.
    Tolerance,
    MaxIter,
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    /// Observed entries from the data, the rest from the final reconstruction.
    pub completed: Tensor3,
    pub trace: Vec<TraceRow>,
    pub converged: bool,
    pub stop: StopReason,
    /// Stationarity residual of the final iterate.
    pub kkt: f64,
    pub state: FactorState,
}

/// C-update: the data on the observed set, the reconstruction `g` elsewhere.
pub fn update_c(g: &Tensor3, m: &Tensor3, mask: &ObservationMask) -> Result<Tensor3> {
    Ok(mask.merge(m, g)?)
}

/// `||P_Omega(g - m)|| / ||P_Omega(m)||`.
pub fn obs_residual(g: &Tensor3, m: &Tensor3, mask: &ObservationMask) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for ((&gv, &mv), &o) in g.data().iter().zip(m.data()).zip(mask.flags()) {
        if o {
            num += (gv - mv) * (gv - mv);
            den += mv * mv;
        }
    }
    (num / den).sqrt()
}

fn factor_step_sq(a: &ModeFactors, b: &ModeFactors) -> Option<f64> {
    let n = a.n_slices().max(1) as f64;
    let mut s = 0.0;
    for l in 0..a.n_slices() {
        if a.x[l].shape() != b.x[l].shape() || a.y[l].shape() != b.y[l].shape() {
            return None;
        }
        s += (&a.x[l] - &b.x[l]).norm_squared() + (&a.y[l] - &b.y[l]).norm_squared();
    }
    Some(s / n)
}

/// `||z_a - z_b||^2` over `C` and all factor tensors, or `None` if ranks differ.
pub fn step_sq(a: &FactorState, b: &FactorState) -> Option<f64> {
    let mut s = a.c.sub(&b.c).ok()?.frobenius_sq();
    for mode in Mode::ALL {
        s += factor_step_sq(a.factors(mode), b.factors(mode))?;
    }
    Some(s)
}

/// Runs the plain model from a seeded initial state.
pub fn run(m: &Tensor3, mask: &ObservationMask, cfg: &SolverConfig) -> Result<SolveResult> {
    run_model(m, mask, cfg, &Standard, None)
}

/// Runs `model`, starting from `start` when given.
pub fn run_model(
    m: &Tensor3,
    mask: &ObservationMask,
    cfg: &SolverConfig,
    model: &dyn FactorModel,
    start: Option<FactorState>,
) -> Result<SolveResult> {
    if mask.dims() != m.dims() {
        return Err(SolveError::Input(format!(
            "mask dims {:?} differ from tensor dims {:?}",
            mask.dims(),
            m.dims()
        )));
    }
    cfg.validate(m.dims())?;
    let eff = cfg.effective();
    if mask.project(m)?.frobenius() == 0.0 {
        return Err(SolveError::Input("observed entries are all zero".into()));
    }
    let mut state = match start {
        Some(s) => s,
        None => init_state(m, mask, &eff)?,
    };
    let cut_until = 0.9 * eff.max_iter as f64;

    let mut g = reconstruct(&state, eff.alphas, eff.imag_tol)?;
    let mut cbars = spectra(&state.c);
    let mut trace = vec![TraceRow {
        iter: state.iter,
        objective: model.objective(&state, &cbars, &eff),
        obs_residual: obs_residual(&g, m, mask),
        ranks: state.ranks(),
        ms: 0.0,
        rank_decreased: false,
        step_sq: 0.0,
        omega_block: data_residuals(&state.c, &g, m, mask).0,
    }];
    let mut stop = StopReason::MaxIter;

    for it in 1..=eff.max_iter {
        let clock = Instant::now();
        let prev = state.clone();
        state.c = update_c(&g, m, mask)?;
        let omega_block = data_residuals(&state.c, &g, m, mask).0;
        cbars = spectra(&state.c);
        for mode in Mode::ALL {
            model.update_mode(&mut state, mode, &cbars[mode.axis()], &eff)?;
        }
        let cut = eff.rank_decrease && (it as f64) <= cut_until;
        let rank_decreased = cut && decrease_rank(&mut state, &eff).iter().any(|&c| c);
        state.iter = it;

        let fail = |message: String, trace: &mut Vec<TraceRow>| SolveError::Numerical {
            iter: it,
            message,
            trace: std::mem::take(trace),
        };
        g = match reconstruct(&state, eff.alphas, eff.imag_tol) {
            Ok(g) => g,
            Err(e) => return Err(fail(e.to_string(), &mut trace)),
        };
        let objective = model.objective(&state, &cbars, &eff);
        let obs = obs_residual(&g, m, mask);
        trace.push(TraceRow {
            iter: it,
            objective,
            obs_residual: obs,
            ranks: state.ranks(),
            ms: clock.elapsed().as_secs_f64() * 1e3,
            rank_decreased,
            step_sq: step_sq(&state, &prev).unwrap_or(f64::NAN),
            omega_block,
        });
        if !objective.is_finite() || !obs.is_finite() {
            return Err(fail("objective is not finite".into(), &mut trace));
        }
        if obs < eff.epsilon {
            stop = StopReason::Tolerance;
            break;
        }
    }

    let kkt = model.kkt(&state, &cbars, &g, m, mask, &eff);
    Ok(SolveResult {
        completed: update_c(&g, m, mask)?,
        trace,
        converged: stop == StopReason::Tolerance,
        stop,
        kkt,
        state,
    })
}
