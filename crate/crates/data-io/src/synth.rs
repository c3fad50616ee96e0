use rand::seq::SliceRandom;
use tensor_core::{MatrixR, Mode, Tensor3};

use crate::error::{DataError, Result};
use crate::mask::ObservationMask;
use crate::rng::{seeded_rng, standard_normal};

/// Gaussian Tucker tensor `B x_1 U1 x_2 U2 x_3 U3`.
///
/// Draw order: the `r1 x r2 x r3` core in storage order, then `U1`, `U2`, `U3`
/// (each `n_u x r_u`) in column-major order.
pub fn synth_tensor(dims: [usize; 3], ranks: [usize; 3], seed: u64) -> Result<Tensor3> {
    if dims.contains(&0) {
        return Err(DataError::Config(format!("dims {dims:?} must be positive")));
    }
    if ranks.iter().zip(&dims).any(|(r, n)| r > n) {
        return Err(DataError::Config(format!("ranks {ranks:?} exceed dims {dims:?}")));
    }
    if ranks.contains(&0) {
        return Ok(Tensor3::zeros(dims));
    }
    let mut rng = seeded_rng(seed);
    let core = Tensor3::from_fn(ranks, |_, _, _| standard_normal(&mut rng));
    let mut t = core;
    for mode in Mode::ALL {
        let a = mode.axis();
        let mut u = MatrixR::zeros(dims[a], ranks[a]);
        for c in 0..ranks[a] {
            for r in 0..dims[a] {
                u[(r, c)] = standard_normal(&mut rng);
            }
        }
        t = t.mode_product(&u, mode)?;
    }
    Ok(t)
}

/// Marks exactly `round(p * N)` entries, chosen by a seeded Fisher-Yates shuffle.
pub fn sample_mask(dims: [usize; 3], p: f64, seed: u64) -> Result<ObservationMask> {
    if !(0.0..=1.0).contains(&p) {
        return Err(DataError::Config(format!("sampling ratio {p} outside [0, 1]")));
    }
    let n = dims[0] * dims[1] * dims[2];
    let take = ((p * n as f64).round() as usize).min(n);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut seeded_rng(seed));
    let mut flags = vec![false; n];
    for &o in &order[..take] {
        flags[o] = true;
    }
    ObservationMask::new(dims, flags)
}

/// Temporally smooth sequence of `n1 x n2` frames:
/// `scale * (sum_q a_q(i) b_q(j) cos(2 w_q t + phi_q) + t)` with `t = k / n3`,
/// Gaussian spatial profiles `a_q`, `b_q`, phases `phi_q` and frequencies `|w_q|`.
///
/// Draw order: `a` (`n1 x rank`, row-major), `b` likewise, the phases, then
/// the frequencies.
pub fn synth_smooth_sequence(dims: [usize; 3], rank: usize, scale: f64, seed: u64) -> Result<Tensor3> {
    if dims.contains(&0) {
        return Err(DataError::Config(format!("dims {dims:?} must be positive")));
    }
    if !scale.is_finite() {
        return Err(DataError::Config(format!("scale {scale} must be finite")));
    }
    let [n1, n2, n3] = dims;
    let mut rng = seeded_rng(seed);
    let mut draw = |n: usize| -> Vec<f64> { (0..n).map(|_| standard_normal(&mut rng)).collect() };
    let a = draw(n1 * rank);
    let b = draw(n2 * rank);
    let phase = draw(rank);
    let freq: Vec<f64> = draw(rank).into_iter().map(f64::abs).collect();
    Ok(Tensor3::from_fn(dims, |i, j, k| {
        let t = k as f64 / n3 as f64;
        let wave: f64 = (0..rank)
            .map(|q| a[i * rank + q] * b[j * rank + q] * (2.0 * freq[q] * t + phase[q]).cos())
            .sum();
        scale * (wave + t)
    }))
}
