use completion_solver::{init_state, reconstruct, run_model, update_c, SolveResult, SolverConfig};
use data_io::ObservationMask;
use tensor_core::{MatrixR, Mode, Tensor3};

use crate::constraints::{build_spatial, build_temporal, default_ridge, ConstraintSet};
use crate::error::{Result, StError};
use crate::model::StModel;

#[derive(Clone, Debug, PartialEq)]
pub struct StConfig {
    /// Weights of the `F`, `G` and `H` penalties.
    pub betas: [f64; 3],
    /// Learn `F` and `G`; when off only the temporal penalty is used.
    pub spatial: bool,
    /// Start the constrained pass from the temporal pass's final iterate.
    pub warm_start: bool,
    /// Learn `F` and `G` from the first C-update of a single run instead of
    /// from a separate temporal pass.
    pub single_run: bool,
    /// Ridge for the spatial regressions; `None` picks [`default_ridge`].
    pub ridge: Option<f64>,
}

impl Default for StConfig {
    fn default() -> Self {
        StConfig {
            betas: [1.0, 1.0, 1.0],
            spatial: true,
            warm_start: false,
            single_run: false,
            ridge: None,
        }
    }
}

/// Outcome of [`run_st`].
#[derive(Clone, Debug)]
pub struct StResult {
    /// The run with all penalties in place.
    pub result: SolveResult,
    pub constraints: ConstraintSet,
    /// The temporal-only pass when one was run.
    pub first_pass: Option<SolveResult>,
}

/// `F` and `G` regressed from `c` as `betas` require.
pub fn learn_spatial(c: &Tensor3, betas: [f64; 3], ridge: Option<f64>) -> Result<(Option<MatrixR>, Option<MatrixR>)> {
    let fit = |mode: Mode, beta: f64| -> Result<Option<MatrixR>> {
        if beta > 0.0 {
            let delta = ridge.unwrap_or_else(|| default_ridge(c, mode));
            build_spatial(c, mode, delta).map(Some)
        } else {
            Ok(None)
        }
    };
    Ok((fit(Mode::One, betas[0])?, fit(Mode::Two, betas[1])?))
}

/// Spatio-temporal completion.
///
/// By default a temporal-only pass produces a full estimate, `F` and `G` are
/// regressed from it, and a second pass from a fresh seeded start uses all
/// three penalties.
pub fn run_st(m: &Tensor3, mask: &ObservationMask, cfg: &SolverConfig, st: &StConfig) -> Result<StResult> {
    if st.betas.iter().any(|b| !(b.is_finite() && *b >= 0.0)) {
        return Err(StError::Config(format!("betas {:?} must be nonnegative", st.betas)));
    }
    let dims = m.dims();
    let eff = cfg.effective();
    let h = if st.betas[2] > 0.0 { Some(build_temporal(dims[2])?) } else { None };
    let temporal = ConstraintSet { f: None, g: None, h: h.clone(), betas: [0.0, 0.0, st.betas[2]] };
    let spatial = st.spatial && (st.betas[0] > 0.0 || st.betas[1] > 0.0);

    if !spatial {
        temporal.validate(dims)?;
        let model = StModel::new(temporal.clone(), eff.alphas)?;
        let result = run_model(m, mask, cfg, &model, None)?;
        return Ok(StResult { result, constraints: temporal, first_pass: None });
    }

    if st.single_run {
        let start = init_state(m, mask, &eff)?;
        let g0 = reconstruct(&start, eff.alphas, eff.imag_tol)?;
        let c1 = update_c(&g0, m, mask)?;
        let (f, g) = learn_spatial(&c1, st.betas, st.ridge)?;
        let constraints = ConstraintSet { f, g, h, betas: st.betas };
        constraints.validate(dims)?;
        let model = StModel::new(constraints.clone(), eff.alphas)?;
        let result = run_model(m, mask, cfg, &model, Some(start))?;
        return Ok(StResult { result, constraints, first_pass: None });
    }

    let first = run_model(m, mask, cfg, &StModel::new(temporal, eff.alphas)?, None)?;
    let (f, g) = learn_spatial(&first.completed, st.betas, st.ridge)?;
    let constraints = ConstraintSet { f, g, h, betas: st.betas };
    constraints.validate(dims)?;
    let model = StModel::new(constraints.clone(), eff.alphas)?;
    let start = if st.warm_start {
        let mut s = first.state.clone();
        s.iter = 0;
        Some(s)
    } else {
        None
    };
    let result = run_model(m, mask, cfg, &model, start)?;
    Ok(StResult { result, constraints, first_pass: Some(first) })
}
