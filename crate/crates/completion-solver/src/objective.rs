use data_io::ObservationMask;
use tensor_core::{mode_fft, Complex64, MatrixC, Mode, Tensor3};

use crate::config::SolverConfig;
use crate::error::Result;
use crate::state::{primary_slices, reconstruct, FactorState, ModeFactors};

/// Spectral slices of `c` along all three modes.
pub fn spectra(c: &Tensor3) -> [Vec<MatrixC>; 3] {
    Mode::ALL.map(|m| mode_fft(c, m).slices())
}

/// Sum over slices of `||X_l Y_l - C_l||^2`, divided by `n_u`.
pub fn fit_sq(state: &FactorState, mode: Mode, cbar: &[MatrixC]) -> f64 {
    let f = state.factors(mode);
    let n = f.n_slices().max(1) as f64;
    primary_slices(f.n_slices())
        .map(|(l, w)| w * (&f.x[l] * &f.y[l] - &cbar[l]).norm_squared())
        .sum::<f64>()
        / n
}

/// Objective from precomputed spectra of the current `C`.
pub fn objective_with(state: &FactorState, cbars: &[Vec<MatrixC>; 3], alphas: [f64; 3], lambda: f64) -> f64 {
    Mode::ALL
        .iter()
        .map(|&mode| {
            let a = alphas[mode.axis()];
            let fit = if a == 0.0 { 0.0 } else { 0.5 * a * fit_sq(state, mode, &cbars[mode.axis()]) };
            let (xn, yn) = state.factors(mode).norms_sq();
            fit + 0.5 * lambda * (xn + yn)
        })
        .sum()
}

/// `f = sum_u alpha_u/2 ||X_u *_u Y_u - C||^2 + lambda/2 (||X_u||^2 + ||Y_u||^2)`.
pub fn objective(state: &FactorState, cfg: &SolverConfig) -> f64 {
    let cfg = cfg.effective();
    objective_with(state, &spectra(&state.c), cfg.alphas, cfg.lambda)
}

/// Tensor-domain norm of one gradient block, given its spectral slices.
pub fn block_norm(slices: impl Iterator<Item = MatrixC>, n: usize) -> f64 {
    (slices.map(|m| m.norm_squared()).sum::<f64>() / n.max(1) as f64).sqrt()
}

/// Residual norms of the `X` and `Y` stationarity blocks of one mode.
pub fn mode_factor_residuals(f: &ModeFactors, cbar: &[MatrixC], alpha: f64, lambda: f64) -> (f64, f64) {
    let lam = Complex64::new(lambda, 0.0);
    let a = Complex64::new(alpha, 0.0);
    let n = f.n_slices();
    let resid: Vec<MatrixC> = (0..n).map(|l| &f.x[l] * &f.y[l] - &cbar[l]).collect();
    let rx = block_norm((0..n).map(|l| &resid[l] * f.y[l].adjoint() * a + &f.x[l] * lam), n);
    let ry = block_norm((0..n).map(|l| f.x[l].adjoint() * &resid[l] * a + &f.y[l] * lam), n);
    (rx, ry)
}

/// Factor-block residuals `max_u ||alpha(XY - C)Y* + lambda X||` and the `Y` counterpart.
pub fn factor_residuals(
    state: &FactorState,
    cbars: &[Vec<MatrixC>; 3],
    alphas: [f64; 3],
    lambda: f64,
) -> (f64, f64) {
    let mut rx: f64 = 0.0;
    let mut ry: f64 = 0.0;
    for mode in Mode::ALL {
        let (px, py) = mode_factor_residuals(state.factors(mode), &cbars[mode.axis()], alphas[mode.axis()], lambda);
        rx = rx.max(px);
        ry = ry.max(py);
    }
    (rx, ry)
}

/// Observation-block residuals `(||P_Omega(C - M)||, ||P_Omega^c(G - C)||)`.
pub fn data_residuals(c: &Tensor3, g: &Tensor3, m: &Tensor3, mask: &ObservationMask) -> (f64, f64) {
    let mut on = 0.0;
    let mut off = 0.0;
    for (((&cv, &gv), &mv), &o) in c.data().iter().zip(g.data()).zip(m.data()).zip(mask.flags()) {
        if o {
            on += (cv - mv) * (cv - mv);
        } else {
            off += (gv - cv) * (gv - cv);
        }
    }
    (on.sqrt(), off.sqrt())
}

/// Largest stationarity-block residual, normalized by `1 + ||C||_F`.
pub fn kkt_residual(state: &FactorState, m: &Tensor3, mask: &ObservationMask, cfg: &SolverConfig) -> Result<f64> {
    let cfg = cfg.effective();
    let g = reconstruct(state, cfg.alphas, cfg.imag_tol)?;
    let (rx, ry) = factor_residuals(state, &spectra(&state.c), cfg.alphas, cfg.lambda);
    let (on, off) = data_residuals(&state.c, &g, m, mask);
    Ok(rx.max(ry).max(on).max(off) / (1.0 + state.c.frobenius()))
}
