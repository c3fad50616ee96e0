use completion_solver::*;
use data_io::{sample_mask, seeded_rng, standard_normal, synth_tensor, ObservationMask, Rng64};
use proptest::prelude::*;
use tensor_core::{t_product_naive, Complex64, MatrixC, Mode, Tensor3};

fn cmat(rng: &mut Rng64, rows: usize, cols: usize) -> MatrixC {
    MatrixC::from_fn(rows, cols, |_, _| Complex64::new(standard_normal(rng), standard_normal(rng)))
}

fn rse(a: &Tensor3, truth: &Tensor3) -> f64 {
    a.sub(truth).unwrap().frobenius() / truth.frobenius()
}

fn small_instance(seed: u64, p: f64) -> (Tensor3, ObservationMask) {
    let m = synth_tensor([8, 7, 6], [2, 2, 2], seed).unwrap();
    let mask = sample_mask([8, 7, 6], p, seed + 100).unwrap();
    (m, mask)
}

fn small_cfg(seed: u64) -> SolverConfig {
    SolverConfig {
        initial_rank: InitialRank::PerMode([2, 2, 2]),
        seed,
        max_iter: 40,
        ..SolverConfig::default()
    }
}

#[test]
fn x_update_solves_its_normal_equation() {
    let mut rng = seeded_rng(1);
    let (x, y, c) = (cmat(&mut rng, 6, 3), cmat(&mut rng, 3, 5), cmat(&mut rng, 6, 5));
    let (a, lam) = (0.4, 0.1);
    let xn = update_x(&x, &y, &c, a, lam).unwrap();
    let ca = Complex64::new(a, 0.0);
    let resid = (&xn * &y - &c) * y.adjoint() * ca + &xn * Complex64::new(2.0 * lam, 0.0) - &x * Complex64::new(lam, 0.0);
    assert!(resid.norm() < 1e-8, "{}", resid.norm());
}

#[test]
fn y_update_solves_its_normal_equation() {
    let mut rng = seeded_rng(2);
    let (x, y, c) = (cmat(&mut rng, 6, 3), cmat(&mut rng, 3, 5), cmat(&mut rng, 6, 5));
    let (a, lam) = (0.7, 0.3);
    let yn = update_y(&x, &y, &c, a, lam).unwrap();
    let ca = Complex64::new(a, 0.0);
    let resid = x.adjoint() * (&x * &yn - &c) * ca + &yn * Complex64::new(2.0 * lam, 0.0) - &y * Complex64::new(lam, 0.0);
    assert!(resid.norm() < 1e-8, "{}", resid.norm());
}

#[test]
fn zero_y_halves_x() {
    let mut rng = seeded_rng(3);
    let x = cmat(&mut rng, 4, 2);
    let c = cmat(&mut rng, 4, 3);
    let xn = update_x(&x, &MatrixC::zeros(2, 3), &c, 0.5, 0.1).unwrap();
    assert!((xn - &x * Complex64::new(0.5, 0.0)).norm() < 1e-14);
}

#[test]
fn tiny_lambda_y_update_is_a_direct_solve() {
    let mut rng = seeded_rng(4);
    let mut x = cmat(&mut rng, 4, 4);
    for d in 0..4 {
        x[(d, d)] += Complex64::new(6.0, 0.0);
    }
    let c = cmat(&mut rng, 4, 3);
    let y = cmat(&mut rng, 4, 3);
    let yn = update_y(&x, &y, &c, 1.0, 1e-10).unwrap();
    let direct = x.clone().lu().solve(&c).unwrap();
    assert!((yn - direct).norm() < 1e-6);
}

#[test]
fn pinv_updates_match_exact_solves_at_full_rank() {
    let mut rng = seeded_rng(5);
    let (x, y, c) = (cmat(&mut rng, 6, 3), cmat(&mut rng, 3, 5), cmat(&mut rng, 6, 5));
    let xn = update_x_pinv(&x, &y, &c);
    let direct = update_x(&x, &y, &c, 1.0, 1e-13).unwrap();
    assert!((&xn - direct).norm() < 1e-8);
    let normal = (&xn * &y - &c) * y.adjoint();
    assert!(normal.norm() < 1e-9);
    let yn = update_y_pinv(&xn, &y, &c);
    assert!((xn.adjoint() * (&xn * &yn - &c)).norm() < 1e-9);
}

#[test]
fn singular_gram_without_regularization_is_a_config_error() {
    let x = MatrixC::zeros(3, 2);
    let y = MatrixC::zeros(2, 3);
    let c = MatrixC::zeros(3, 3);
    assert!(matches!(update_y(&x, &y, &c, 1.0, 0.0), Err(SolveError::Config(_))));
}

#[test]
fn objective_matches_tensor_domain_evaluation() {
    let (m, mask) = small_instance(7, 0.6);
    let mut cfg = small_cfg(7);
    cfg.alphas = [0.2, 0.3, 0.5];
    let state = init_state(&m, &mask, &cfg).unwrap();
    let mut naive = 0.0;
    for mode in Mode::ALL {
        let (x, y) = state.factor_tensors(mode, 1e-9).unwrap();
        let prod = t_product_naive(&x, &y, mode).unwrap();
        let a = cfg.alphas[mode.axis()];
        naive += 0.5 * a * prod.sub(&state.c).unwrap().frobenius_sq();
        naive += 0.5 * cfg.lambda * (x.frobenius_sq() + y.frobenius_sq());
    }
    let f = objective(&state, &cfg);
    assert!((f - naive).abs() < 1e-9 * (1.0 + naive), "{f} vs {naive}");
}

#[test]
fn reconstruction_matches_naive_products() {
    let (m, mask) = small_instance(8, 0.5);
    let mut cfg = small_cfg(8);
    cfg.alphas = [0.5, 0.25, 0.25];
    let state = init_state(&m, &mask, &cfg).unwrap();
    let g = reconstruct(&state, cfg.alphas, 1e-9).unwrap();
    let mut naive = Tensor3::zeros(m.dims());
    for mode in Mode::ALL {
        let (x, y) = state.factor_tensors(mode, 1e-9).unwrap();
        let term = t_product_naive(&x, &y, mode).unwrap().scale(cfg.alphas[mode.axis()]);
        naive = naive.add(&term).unwrap();
    }
    assert!(g.max_abs_diff(&naive).unwrap() < 1e-10 * (1.0 + naive.max_abs()));
}

#[test]
fn c_update_takes_data_on_omega_and_reconstruction_elsewhere() {
    let (m, mask) = small_instance(9, 0.4);
    let g = Tensor3::from_fn(m.dims(), |i, j, k| (i + 2 * j + 3 * k) as f64);
    let c = update_c(&g, &m, &mask).unwrap();
    for k in 0..6 {
        for j in 0..7 {
            for i in 0..8 {
                let want = if mask.get(i, j, k) { m.get(i, j, k) } else { g.get(i, j, k) };
                assert_eq!(c.get(i, j, k), want);
            }
        }
    }
}

#[test]
fn initial_state_is_deterministic_and_real() {
    let (m, mask) = small_instance(10, 0.5);
    let cfg = small_cfg(3);
    let a = init_state(&m, &mask, &cfg).unwrap();
    let b = init_state(&m, &mask, &cfg).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.c, mask.project(&m).unwrap());
    for mode in Mode::ALL {
        assert!(a.factor_tensors(mode, 1e-12).is_ok());
        assert_eq!(a.factors(mode).ranks(), vec![2; m.dims()[mode.axis()]]);
    }
    let other = init_state(&m, &mask, &small_cfg(4)).unwrap();
    assert_ne!(a.modes, other.modes);
}

#[test]
fn zero_initial_rank_reconstructs_zero() {
    let (m, mask) = small_instance(11, 0.5);
    let mut cfg = small_cfg(0);
    cfg.initial_rank = InitialRank::PerMode([0, 0, 0]);
    let s = init_state(&m, &mask, &cfg).unwrap();
    assert_eq!(reconstruct(&s, cfg.alphas, 1e-9).unwrap(), Tensor3::zeros(m.dims()));
}

#[test]
fn gap_statistic_hand_cases() {
    let (t, tau) = gap_statistic(&[100.0, 90.0, 80.0, 1e-6]).unwrap();
    assert_eq!(t, 3);
    let q1 = 100.0 / 90.0;
    let q2 = 90.0 / 80.0;
    let want = 2.0 * (80.0 / 1e-6) / (q1 + q2);
    assert!((tau - want).abs() < 1e-9 * want);
    assert_eq!(energy_cut(&[100.0, 90.0, 80.0, 1e-6], 0.95), 3);

    let (t, tau) = gap_statistic(&[1.0; 4]).unwrap();
    assert_eq!(t, 1);
    assert_eq!(tau, 0.0);
    assert!(gap_statistic(&[3.0]).is_none());
}

#[test]
fn rank_decrease_drops_the_tail_eigenvalue() {
    let mut rng = seeded_rng(12);
    let mut x = MatrixC::zeros(4, 4);
    for (d, v) in [100.0f64, 90.0, 80.0, 1e-6].iter().enumerate() {
        x[(d, d)] = Complex64::new(v.sqrt(), 0.0);
    }
    let y = cmat(&mut rng, 4, 4).map(|z| Complex64::new(z.re, 0.0));
    let mut f = ModeFactors { x: vec![x], y: vec![y] };
    assert_eq!(decrease_mode(&mut f, 10.0, 0.95), 1);
    assert_eq!(f.ranks(), vec![3]);

    let mut flat = ModeFactors { x: vec![MatrixC::identity(4, 4)], y: vec![MatrixC::identity(4, 4)] };
    assert_eq!(decrease_mode(&mut flat, 10.0, 0.95), 0);
    assert_eq!(flat.ranks(), vec![4]);
}

#[test]
fn rank_decrease_keeps_conjugate_pairs() {
    let mut rng = seeded_rng(13);
    let n = 5;
    let mut x = Vec::new();
    let mut y = Vec::new();
    for l in 0..n {
        let mut xl = cmat(&mut rng, 6, 3);
        xl.set_column(2, &(xl.column(2) * Complex64::new(1e-5, 0.0)));
        if l == 0 {
            xl = xl.map(|z| Complex64::new(z.re, 0.0));
        }
        let yl = cmat(&mut rng, 3, 4).map(|z| if l == 0 { Complex64::new(z.re, 0.0) } else { z });
        x.push(xl);
        y.push(yl);
    }
    let mut f = ModeFactors { x, y };
    f.mirror();
    let removed = decrease_mode(&mut f, 10.0, 0.95);
    assert!(removed > 0);
    for l in 1..n {
        assert_eq!(f.x[l], f.x[n - l].conjugate());
        assert_eq!(f.y[l], f.y[n - l].conjugate());
    }
}

#[test]
fn truncation_is_the_best_low_rank_approximation() {
    let mut rng = seeded_rng(14);
    let (x, y) = (cmat(&mut rng, 7, 5), cmat(&mut rng, 5, 6));
    let p = &x * &y;
    let sv = p.clone().svd(false, false).singular_values;
    let mut s: Vec<f64> = sv.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    for r in 0..=5 {
        let (nx, ny) = truncate_slice(&x, &y, r);
        assert_eq!((nx.ncols(), ny.nrows()), (r, r));
        let err = (&nx * &ny - &p).norm();
        let best: f64 = s[r..].iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!((err - best).abs() < 1e-9 * (1.0 + p.norm()), "r={r}: {err} vs {best}");
    }
}

#[test]
fn kkt_residual_vanishes_at_the_trivial_point() {
    let dims = [3, 4, 5];
    let m = Tensor3::zeros(dims);
    let mask = ObservationMask::empty(dims);
    let mut cfg = SolverConfig::default();
    cfg.initial_rank = InitialRank::PerMode([0, 0, 0]);
    let state = init_state(&m, &mask, &cfg).unwrap();
    assert_eq!(kkt_residual(&state, &m, &mask, &cfg).unwrap(), 0.0);
}

#[test]
fn kkt_residual_decreases_along_a_run() {
    let (m, mask) = small_instance(15, 0.7);
    let mut cfg = small_cfg(15);
    cfg.rank_decrease = false;
    let start = init_state(&m, &mask, &cfg).unwrap();
    let k0 = kkt_residual(&start, &m, &mask, &cfg).unwrap();
    let r = run(&m, &mask, &cfg).unwrap();
    let k1 = kkt_residual(&r.state, &m, &mask, &cfg).unwrap();
    assert!(k1 < k0, "{k1} vs {k0}");
    assert!((r.kkt - k1).abs() <= 1e-12 * (1.0 + k1));
}

#[test]
fn descent_inequality_holds_on_fixed_rank_steps() {
    for seed in 0..3 {
        let m = synth_tensor([12, 12, 12], [3, 3, 3], seed).unwrap();
        let mask = sample_mask([12, 12, 12], 0.5, seed + 50).unwrap();
        let cfg = SolverConfig {
            initial_rank: InitialRank::PerMode([3, 3, 3]),
            seed,
            max_iter: 60,
            ..SolverConfig::default()
        };
        let r = run(&m, &mask, &cfg).unwrap();
        let c = cfg.lambda.min(1.0) / 2.0;
        for w in r.trace.windows(2) {
            if w[1].rank_decreased {
                continue;
            }
            let lhs = w[0].objective - w[1].objective;
            let rhs = c * w[1].step_sq - 1e-9 * (1.0 + w[0].objective);
            assert!(lhs >= rhs, "seed {seed} iter {}: {lhs} < {rhs}", w[1].iter);
        }
    }
}

#[test]
fn trace_invariants() {
    let (m, mask) = small_instance(16, 0.6);
    let r = run(&m, &mask, &small_cfg(16)).unwrap();
    assert_eq!(r.trace[0].iter, 0);
    for w in r.trace.windows(2) {
        for u in 0..3 {
            assert!(w[1].ranks[u] <= w[0].ranks[u]);
        }
        assert_eq!(w[1].iter, w[0].iter + 1);
        assert_eq!(w[1].omega_block, 0.0);
    }
    assert_eq!(mask.project(&r.completed).unwrap(), mask.project(&m).unwrap());
}

#[test]
fn objective_is_monotone_without_rank_decrease() {
    let (m, mask) = small_instance(17, 0.5);
    let mut cfg = small_cfg(17);
    cfg.rank_decrease = false;
    let r = run(&m, &mask, &cfg).unwrap();
    for w in r.trace.windows(2) {
        assert!(w[1].objective <= w[0].objective + 1e-12 * (1.0 + w[0].objective));
    }
}

#[test]
fn runs_are_deterministic() {
    let (m, mask) = small_instance(18, 0.5);
    let a = run(&m, &mask, &small_cfg(1)).unwrap();
    let b = run(&m, &mask, &small_cfg(1)).unwrap();
    let ua: Vec<_> = a.trace.iter().map(TraceRow::untimed).collect();
    let ub: Vec<_> = b.trace.iter().map(TraceRow::untimed).collect();
    assert_eq!(ua, ub);
    assert_eq!(a.completed, b.completed);
}

#[test]
fn full_observation_of_a_low_rank_tensor_is_recovered() {
    let dims = [10, 10, 10];
    let m = synth_tensor(dims, [2, 2, 2], 19).unwrap();
    let mask = ObservationMask::full(dims);
    let cfg = SolverConfig {
        initial_rank: InitialRank::PerMode([2, 2, 2]),
        seed: 19,
        max_iter: 50,
        rank_decrease: false,
        ..SolverConfig::default()
    };
    let r = run(&m, &mask, &cfg).unwrap();
    assert!(r.trace.len() <= 51);
    assert!(rse(&r.completed, &m) < 1e-6);
}

#[test]
fn uniform_weights_complete_a_half_observed_tensor() {
    let dims = [40, 40, 40];
    let m = synth_tensor(dims, [5, 5, 5], 0).unwrap();
    let mask = sample_mask(dims, 0.5, 1000).unwrap();
    let cfg = SolverConfig { rank_decrease: false, ..SolverConfig::default() };
    let r = run(&m, &mask, &cfg).unwrap();
    assert!(rse(&r.completed, &m) < 1e-3);
}

#[test]
fn zero_weight_modes_do_not_affect_c_updates() {
    let (m, mask) = small_instance(20, 0.5);
    let mut cfg = small_cfg(20);
    cfg.alphas = [0.0, 0.0, 1.0];
    cfg.rank_decrease = false;
    let with = init_state(&m, &mask, &cfg).unwrap();
    let mut without = with.clone();
    for mode in [Mode::One, Mode::Two] {
        let f = without.factors_mut(mode);
        for l in 0..f.n_slices() {
            f.x[l] = MatrixC::zeros(f.x[l].nrows(), 0);
            f.y[l] = MatrixC::zeros(0, f.y[l].ncols());
        }
    }
    let a = run_model(&m, &mask, &cfg, &Standard, Some(with)).unwrap();
    let b = run_model(&m, &mask, &cfg, &Standard, Some(without)).unwrap();
    assert_eq!(a.completed, b.completed);
    assert_eq!(a.state.c, b.state.c);
    let oa: Vec<f64> = a.trace.iter().map(|t| t.obs_residual).collect();
    let ob: Vec<f64> = b.trace.iter().map(|t| t.obs_residual).collect();
    assert_eq!(oa, ob);
}

#[test]
fn tctf_forces_its_configuration() {
    let (m, mask) = small_instance(21, 0.6);
    let mut cfg = SolverConfig::tctf(2);
    cfg.alphas = [0.5, 0.5, 0.0];
    cfg.lambda = 3.0;
    cfg.max_iter = 10;
    let eff = cfg.effective();
    assert_eq!(eff.alphas, [0.0, 0.0, 1.0]);
    assert_eq!(eff.lambda, 0.0);
    let r = run(&m, &mask, &cfg).unwrap();
    assert_eq!(r.trace[0].ranks, [0, 0, 2]);
}

#[test]
fn bad_inputs_are_rejected() {
    let (m, mask) = small_instance(22, 0.5);
    let zero = Tensor3::zeros(m.dims());
    assert!(matches!(run(&zero, &mask, &small_cfg(0)), Err(SolveError::Input(_))));
    let other = ObservationMask::full([2, 2, 2]);
    assert!(matches!(run(&m, &other, &small_cfg(0)), Err(SolveError::Input(_))));

    let mut cfg = small_cfg(0);
    cfg.alphas = [0.5, 0.5, 0.5];
    assert!(matches!(run(&m, &mask, &cfg), Err(SolveError::Config(_))));
    let mut cfg = small_cfg(0);
    cfg.lambda = 0.0;
    assert!(matches!(run(&m, &mask, &cfg), Err(SolveError::Config(_))));
    let mut cfg = small_cfg(0);
    cfg.initial_rank = InitialRank::PerMode([9, 2, 2]);
    assert!(matches!(run(&m, &mask, &cfg), Err(SolveError::Config(_))));
}

#[test]
fn trace_csv_has_the_fixed_header() {
    let (m, mask) = small_instance(23, 0.5);
    let mut cfg = small_cfg(0);
    cfg.max_iter = 3;
    let r = run(&m, &mask, &cfg).unwrap();
    let csv = trace_csv(&r.trace);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("iter,objective,obs_residual,r1,r2,r3,ms"));
    assert_eq!(lines.count(), r.trace.len());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn prox_updates_satisfy_normal_equations(
        rows in 1usize..7, cols in 1usize..7, r in 1usize..4,
        a in 0.05f64..1.0, lam in 0.01f64..2.0, seed in 0u64..1000,
    ) {
        let mut rng = seeded_rng(seed);
        let (x, y, c) = (cmat(&mut rng, rows, r), cmat(&mut rng, r, cols), cmat(&mut rng, rows, cols));
        let ca = Complex64::new(a, 0.0);
        let xn = update_x(&x, &y, &c, a, lam).unwrap();
        let rx = (&xn * &y - &c) * y.adjoint() * ca + &xn * Complex64::new(2.0 * lam, 0.0) - &x * Complex64::new(lam, 0.0);
        prop_assert!(rx.norm() < 1e-8 * (1.0 + c.norm() * y.norm()));
        let yn = update_y(&xn, &y, &c, a, lam).unwrap();
        let ry = xn.adjoint() * (&xn * &yn - &c) * ca + &yn * Complex64::new(2.0 * lam, 0.0) - &y * Complex64::new(lam, 0.0);
        prop_assert!(ry.norm() < 1e-8 * (1.0 + c.norm() * xn.norm()));
    }

    #[test]
    fn gap_statistic_is_well_formed(mut v in prop::collection::vec(1e-6f64..1e6, 2..30)) {
        v.sort_by(|a, b| b.total_cmp(a));
        let (t, tau) = gap_statistic(&v).unwrap();
        prop_assert!(t >= 1 && t < v.len());
        prop_assert!(tau >= 0.0);
        let s = energy_cut(&v, 0.95);
        prop_assert!(s >= 1 && s <= v.len());
        prop_assert!(energy_cut(&v, 0.5) <= s);
    }
}
