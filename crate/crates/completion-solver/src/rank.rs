//! Eigenvalue-gap rank decrease.
//!
//! Per mode, the eigenvalues of `X_l* X_l` are pooled over all slices and
//! sorted. A large quotient between consecutive eigenvalues, measured by the
//! gap statistic `tau`, triggers a cut that keeps the leading eigenvalues
//! holding the requested energy fraction; every slice loses as many
//! directions as it had in the discarded tail.

use tensor_core::{Complex64, MatrixC, Mode};

use crate::config::SolverConfig;
use crate::state::{self_conjugate, FactorState, ModeFactors};

/// Position `T` (1-based) of the largest quotient `v_i / v_{i+1}` and the
/// statistic `tau = (T - 1) q_T / sum_{i != T} q_i`, for a descending list.
pub fn gap_statistic(desc: &[f64]) -> Option<(usize, f64)> {
    if desc.len() < 2 || !(desc[0] > 0.0) {
        return None;
    }
    let floor = desc[0] * 1e-30;
    let v: Vec<f64> = desc.iter().map(|&x| x.max(floor)).collect();
    let q: Vec<f64> = v.windows(2).map(|w| w[0] / w[1]).collect();
    let mut t = 0;
    for (i, &qi) in q.iter().enumerate() {
        if qi > q[t] {
            t = i;
        }
    }
    let rest: f64 = q.iter().enumerate().filter(|&(i, _)| i != t).map(|(_, &x)| x).sum();
    let num = t as f64 * q[t];
    let tau = if num == 0.0 {
        0.0
    } else if rest > 0.0 {
        num / rest
    } else {
        f64::INFINITY
    };
    Some((t + 1, tau))
}

/// Smallest `s` whose leading sum reaches `fraction` of the total.
pub fn energy_cut(desc: &[f64], fraction: f64) -> usize {
    let total: f64 = desc.iter().map(|v| v.max(0.0)).sum();
    if total <= 0.0 {
        return desc.len();
    }
    let mut acc = 0.0;
    for (i, v) in desc.iter().enumerate() {
        acc += v.max(0.0);
        if acc >= fraction * total {
            return i + 1;
        }
    }
    desc.len()
}

/// Best rank-`r` factorization `X = U_r S_r`, `Y = V_r*` of `x * y`.
pub fn truncate_slice(x: &MatrixC, y: &MatrixC, r: usize) -> (MatrixC, MatrixC) {
    let (rows, cols) = (x.nrows(), y.ncols());
    if r == 0 {
        return (MatrixC::zeros(rows, 0), MatrixC::zeros(0, cols));
    }
    let svd = (x * y).svd(true, true);
    let u = svd.u.as_ref().unwrap();
    let vt = svd.v_t.as_ref().unwrap();
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let mut nx = MatrixC::zeros(rows, r);
    let mut ny = MatrixC::zeros(r, cols);
    for (d, &o) in order.iter().take(r).enumerate() {
        let s = Complex64::new(svd.singular_values[o], 0.0);
        nx.set_column(d, &(u.column(o) * s));
        ny.set_row(d, &vt.row(o));
    }
    (nx, ny)
}

/// Applies the rank-decrease rule to one mode; returns the number of
/// directions removed over all slices.
pub fn decrease_mode(f: &mut ModeFactors, tau_drop: f64, energy: f64) -> usize {
    let n = f.n_slices();
    let mut pooled: Vec<(f64, usize)> = Vec::new();
    let mut eig_of_primary = vec![Vec::new(); n];
    for l in 0..=n / 2 {
        if l >= n || f.x[l].ncols() == 0 {
            continue;
        }
        let g = f.x[l].adjoint() * &f.x[l];
        eig_of_primary[l] = g.symmetric_eigenvalues().iter().copied().collect();
    }
    for l in 0..n {
        let src = if l <= n / 2 { l } else { n - l };
        for &e in &eig_of_primary[src] {
            pooled.push((e, l));
        }
    }
    pooled.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let values: Vec<f64> = pooled.iter().map(|p| p.0).collect();
    let Some((_, tau)) = gap_statistic(&values) else {
        return 0;
    };
    if tau < tau_drop {
        return 0;
    }
    let s = energy_cut(&values, energy);
    let mut tail = vec![0usize; n];
    for &(_, l) in &pooled[s..] {
        tail[l] += 1;
    }
    let mut removed = 0;
    for l in 0..=n / 2 {
        if l >= n {
            continue;
        }
        let mirror = (n - l) % n;
        let r = f.x[l].ncols();
        let m = tail[l].max(tail[mirror]).min(r);
        if m == 0 {
            continue;
        }
        let (nx, ny) = truncate_slice(&f.x[l], &f.y[l], r - m);
        if !self_conjugate(l, n) {
            f.x[mirror] = nx.conjugate();
            f.y[mirror] = ny.conjugate();
            removed += m;
        }
        f.x[l] = nx;
        f.y[l] = ny;
        removed += m;
    }
    removed
}

/// Rank decrease on every mode; returns whether each mode changed.
pub fn decrease_rank(state: &mut FactorState, cfg: &SolverConfig) -> [bool; 3] {
    Mode::ALL.map(|mode| decrease_mode(state.factors_mut(mode), cfg.tau_drop, cfg.energy) > 0)
}
