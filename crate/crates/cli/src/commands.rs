use std::path::{Path, PathBuf};
use std::time::Instant;

use completion_solver::{
    obs_residual, reconstruct, run, trace_csv, Algorithm, InitialRank, SolveError, SolveResult, SolverConfig,
    StopReason,
};
use data_io::{
    export_image, import_image, read_mask, read_tensor, read_video_dir, sample_mask, synth_tensor, write_mask,
    write_tensor,
};
use metrics::{default_grid, gap_cdf, gap_cdf_csv, MetricsReport};
use spatiotemporal::{run_st, StConfig, StError};
use tensor_core::Tensor3;

use crate::args::{Algo, CompleteArgs, Command, GapcdfArgs, MaskArgs, MetricsArgs, Preset, SynthArgs};
use crate::error::{CliError, Result};
use crate::manifest::{join, manifest_path, RunManifest};

pub(crate) fn dispatch(cmd: Command) -> Result<()> {
    match cmd {
        Command::Synth(a) => synth(a),
        Command::Mask(a) => mask(a),
        Command::Complete(a) => complete(a),
        Command::Metrics(a) => metrics_cmd(a),
        Command::Gapcdf(a) => gapcdf(a),
    }
}

fn is_image(path: &Path) -> bool {
    matches!(
        path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref(),
        Some("pgm" | "ppm")
    )
}

/// Reads a tensor file, a PGM/PPM image (by extension) or a directory of frames.
pub fn load_tensor(path: &Path) -> Result<Tensor3> {
    if path.is_dir() {
        Ok(read_video_dir(path)?)
    } else if is_image(path) {
        Ok(import_image(path)?)
    } else {
        Ok(read_tensor(path)?)
    }
}

/// Writes a tensor file, or an 8-bit image for a `.pgm`/`.ppm` path.
pub fn save_tensor(path: &Path, t: &Tensor3) -> Result<()> {
    if is_image(path) {
        Ok(export_image(path, t, 255)?)
    } else {
        Ok(write_tensor(path, t)?)
    }
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn synth(a: SynthArgs) -> Result<()> {
    let t = synth_tensor(a.dims, a.ranks, a.seed)?;
    write_tensor(&a.out, &t)?;
    let mut m = RunManifest::new("synth");
    m.set("dims", join(&a.dims));
    m.set("ranks", join(&a.ranks));
    m.set("seed", a.seed);
    m.set("out", a.out.display());
    m.write(&manifest_path(&a.out))
}

fn mask(a: MaskArgs) -> Result<()> {
    let k = sample_mask(a.dims, a.p, a.seed)?;
    write_mask(&a.out, &k)?;
    let mut m = RunManifest::new("mask");
    m.set("dims", join(&a.dims));
    m.set("p", a.p);
    m.set("seed", a.seed);
    m.set("observed", k.count());
    m.set("out", a.out.display());
    m.write(&manifest_path(&a.out))
}

struct Resolved {
    cfg: SolverConfig,
    st: StConfig,
}

fn resolve(a: &CompleteArgs) -> Resolved {
    let (max_iter, epsilon, rank0, spatial) = match a.preset {
        None | Some(Preset::Synthetic) => (300, 1e-5, [5, 5, 5], true),
        Some(Preset::Image) => (300, 1e-5, [2, 2, 30], true),
        Some(Preset::Video) => (800, 1e-5, [10, 10, 60], false),
    };
    let base = match a.algo {
        Algo::Tctf => SolverConfig::tctf(a.rank0.unwrap_or(rank0)[2]),
        Algo::Mtrtc | Algo::StMtrtc => SolverConfig::default(),
    };
    let mut cfg = SolverConfig {
        alphas: a.alphas.unwrap_or(base.alphas),
        lambda: a.lambda.unwrap_or(base.lambda),
        epsilon: a.epsilon.unwrap_or(epsilon),
        max_iter: a.max_iter.unwrap_or(max_iter),
        initial_rank: InitialRank::PerMode(a.rank0.unwrap_or(rank0)),
        seed: a.seed,
        rank_decrease: !a.no_rank_decrease,
        ..base
    };
    cfg = cfg.effective();
    let st = StConfig {
        betas: a.betas.unwrap_or([1.0, 1.0, 1.0]),
        spatial: spatial && !a.temporal_only,
        warm_start: a.warm_start,
        single_run: a.single_run,
        ridge: a.ridge,
    };
    Resolved { cfg, st }
}

fn algo_name(a: Algo) -> &'static str {
    match a {
        Algo::Mtrtc => "mtrtc",
        Algo::StMtrtc => "st-mtrtc",
        Algo::Tctf => "tctf",
    }
}

fn trace_path(a: &CompleteArgs) -> PathBuf {
    a.trace.clone().unwrap_or_else(|| {
        let mut s = a.out.as_os_str().to_owned();
        s.push(".trace.csv");
        PathBuf::from(s)
    })
}

fn complete(a: CompleteArgs) -> Result<()> {
    let m = load_tensor(&a.tensor)?;
    let k = read_mask(&a.mask)?;
    let Resolved { cfg, st } = resolve(&a);
    let trace_file = trace_path(&a);

    let mut man = RunManifest::new("complete");
    man.set("algo", algo_name(a.algo));
    man.set("tensor", a.tensor.display());
    man.set("mask", a.mask.display());
    man.set("dims", join(&m.dims()));
    man.set("preset", a.preset.map(|p| format!("{p:?}").to_lowercase()).unwrap_or_else(|| "none".into()));
    man.set("alphas", join(&cfg.alphas));
    man.set("lambda", cfg.lambda);
    man.set("epsilon", cfg.epsilon);
    man.set("max_iter", cfg.max_iter);
    if let InitialRank::PerMode(r) = &cfg.initial_rank {
        man.set("rank0", join(r));
    }
    man.set("seed", cfg.seed);
    man.set("rank_decrease", cfg.rank_decrease);
    man.set("tau_drop", cfg.tau_drop);
    man.set("energy", cfg.energy);
    man.set("imag_tol", cfg.imag_tol);
    man.set("pseudo_inverse", cfg.algorithm == Algorithm::Tctf);
    if a.algo == Algo::StMtrtc {
        man.set("betas", join(&st.betas));
        man.set("spatial", st.spatial);
        man.set("warm_start", st.warm_start);
        man.set("single_run", st.single_run);
        man.set("ridge", st.ridge.map(|r| r.to_string()).unwrap_or_else(|| "auto".into()));
    }
    man.set("out", a.out.display());
    man.set("trace", trace_file.display());

    let clock = Instant::now();
    let outcome: std::result::Result<(SolveResult, Option<spatiotemporal::ConstraintSet>), CliError> = match a.algo {
        Algo::Mtrtc | Algo::Tctf => run(&m, &k, &cfg).map(|r| (r, None)).map_err(|e| keep_trace(e, &trace_file)),
        Algo::StMtrtc => match run_st(&m, &k, &cfg, &st) {
            Ok(r) => Ok((r.result, Some(r.constraints))),
            Err(StError::Solve(e)) => Err(keep_trace(e, &trace_file)),
            Err(e) => Err(e.into()),
        },
    };
    let elapsed = clock.elapsed().as_secs_f64();
    let (res, constraints) = match outcome {
        Ok(v) => v,
        Err(e) => {
            man.set("status", "failed");
            man.write(&manifest_path(&a.out))?;
            return Err(e);
        }
    };

    save_tensor(&a.out, &res.completed)?;
    write_text(&trace_file, &trace_csv(&res.trace))?;
    if let (Some(dir), Some(c)) = (&a.export_constraints, &constraints) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
        c.export_csv(dir)?;
    }
    let g = reconstruct(&res.state, cfg.alphas, cfg.imag_tol)?;
    let rse_obs = obs_residual(&g, &m, &k);
    let last = res.trace.last().expect("trace has the initial row");
    man.set("status", "ok");
    man.set("iterations", last.iter);
    man.set("converged", res.converged);
    man.set("stop", if res.stop == StopReason::Tolerance { "tolerance" } else { "max_iter" });
    man.set("final_ranks", join(&last.ranks));
    man.set("rse_observed", format!("{rse_obs:e}"));
    man.set("kkt", format!("{:e}", res.kkt));
    man.set("elapsed_s", elapsed);
    man.write(&manifest_path(&a.out))?;
    println!(
        "rse_observed={rse_obs:e} converged={} iterations={} kkt={:e}",
        res.converged, last.iter, res.kkt
    );
    Ok(())
}

/// Writes the partial trace carried by a numerical failure before reporting it.
fn keep_trace(e: SolveError, path: &Path) -> CliError {
    if let SolveError::Numerical { trace, .. } = &e {
        if let Err(w) = write_text(path, &trace_csv(trace)) {
            eprintln!("error: {w}");
        }
    }
    e.into()
}

fn metrics_cmd(a: MetricsArgs) -> Result<()> {
    let truth = load_tensor(&a.truth)?;
    let est = load_tensor(&a.estimate)?;
    let mask = a.mask.as_deref().map(read_mask).transpose()?;
    let report = MetricsReport::evaluate(&est, &truth, mask.as_ref(), a.elapsed)?;
    let csv = format!("{}\n{}\n", MetricsReport::CSV_HEADER, report.csv_row());
    print!("{csv}");
    if let Some(out) = &a.out {
        write_text(out, &csv)?;
        let mut m = RunManifest::new("metrics");
        m.set("truth", a.truth.display());
        m.set("estimate", a.estimate.display());
        m.set("mask", a.mask.as_ref().map(|p| p.display().to_string()).unwrap_or_else(|| "none".into()));
        m.set("out", out.display());
        m.write(&manifest_path(out))?;
    }
    Ok(())
}

fn gapcdf(a: GapcdfArgs) -> Result<()> {
    let t = load_tensor(&a.tensor)?;
    let rows = gap_cdf(&t, &default_grid())?;
    write_text(&a.out, &gap_cdf_csv(&rows))?;
    let mut m = RunManifest::new("gapcdf");
    m.set("tensor", a.tensor.display());
    m.set("grid", "0:0.01:1");
    m.set("out", a.out.display());
    m.write(&manifest_path(&a.out))
}
