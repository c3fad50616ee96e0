use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Parses `a,b,c` into three values.
pub fn triple<T: FromStr>(s: &str) -> Result<[T; 3], String>
where
    T::Err: std::fmt::Display,
{
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated values, got {s:?}"));
    }
    let mut out = Vec::with_capacity(3);
    for p in parts {
        out.push(p.parse::<T>().map_err(|e| format!("{p:?}: {e}"))?);
    }
    out.try_into().map_err(|_| unreachable!())
}

fn probability(s: &str) -> Result<f64, String> {
    let p: f64 = s.parse().map_err(|e| format!("{s:?}: {e}"))?;
    if (0.0..=1.0).contains(&p) {
        Ok(p)
    } else {
        Err(format!("sampling ratio must lie in [0, 1], got {p}"))
    }
}

#[derive(Debug, Parser)]
#[command(name = "mtrtc", version, about = "Low multi-tubal-rank tensor completion")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic low-rank tensor.
    Synth(SynthArgs),
    /// Draw a uniform observation mask.
    Mask(MaskArgs),
    /// Complete a partially observed tensor.
    Complete(CompleteArgs),
    /// Compare an estimate with the ground truth.
    Metrics(MetricsArgs),
    /// Adjacent-frame gap CDF of a sequence.
    Gapcdf(GapcdfArgs),
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, value_parser = triple::<usize>)]
    pub dims: [usize; 3],
    #[arg(long, value_parser = triple::<usize>)]
    pub ranks: [usize; 3],
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct MaskArgs {
    #[arg(long, value_parser = triple::<usize>)]
    pub dims: [usize; 3],
    #[arg(long, value_parser = probability)]
    pub p: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Mtrtc,
    StMtrtc,
    Tctf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// 300 iterations, epsilon 1e-5.
    Synthetic,
    /// 300 iterations, epsilon 1e-5, initial ranks (2, 2, 30).
    Image,
    /// 800 iterations, epsilon 1e-5, initial ranks (10, 10, 60), temporal penalty only.
    Video,
}

#[derive(Debug, Args)]
pub struct CompleteArgs {
    #[arg(long, value_enum, default_value_t = Algo::Mtrtc)]
    pub algo: Algo,
    /// Tensor file, PGM/PPM image or directory of PGM frames.
    #[arg(long)]
    pub tensor: PathBuf,
    #[arg(long)]
    pub mask: PathBuf,
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    #[arg(long, value_parser = triple::<usize>)]
    pub rank0: Option<[usize; 3]>,
    #[arg(long, value_parser = triple::<f64>)]
    pub alphas: Option<[f64; 3]>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long, value_parser = triple::<f64>)]
    pub betas: Option<[f64; 3]>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Keep the initial ranks fixed.
    #[arg(long)]
    pub no_rank_decrease: bool,
    /// Skip the spatial regressions and use the temporal penalty only.
    #[arg(long)]
    pub temporal_only: bool,
    /// Start the constrained pass from the temporal pass's final iterate.
    #[arg(long)]
    pub warm_start: bool,
    /// Learn the spatial matrices from the first C-update of a single run.
    #[arg(long)]
    pub single_run: bool,
    /// Ridge for the spatial regressions.
    #[arg(long)]
    pub ridge: Option<f64>,
    /// Directory receiving F.csv, G.csv and H.csv.
    #[arg(long)]
    pub export_constraints: Option<PathBuf>,
    /// Completed tensor; `.pgm`/`.ppm` writes an image.
    #[arg(long)]
    pub out: PathBuf,
    /// Trace CSV, default `<out>.trace.csv`.
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MetricsArgs {
    #[arg(long)]
    pub truth: PathBuf,
    #[arg(long)]
    pub estimate: PathBuf,
    /// Observation mask; adds NMAE over the unobserved entries.
    #[arg(long)]
    pub mask: Option<PathBuf>,
    /// Running time to record with the metrics, in seconds.
    #[arg(long, default_value_t = 0.0)]
    pub elapsed: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GapcdfArgs {
    #[arg(long)]
    pub tensor: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}
