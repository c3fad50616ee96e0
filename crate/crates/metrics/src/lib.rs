//! Reconstruction metrics (RSE, PSNR, NMAE) and the adjacent-frame gap CDF
//! used to judge whether a sequence is temporally stable.

use std::fmt;

use data_io::ObservationMask;
use tensor_core::{Mode, Tensor3, TensorError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("invalid input: {0}")]
    Input(String),

    #[error(transparent)]
    Tensor(#[from] TensorError),
}

pub type Result<T> = std::result::Result<T, MetricsError>;

/// `||chat - m||_F / ||m||_F`.
pub fn rse(chat: &Tensor3, m: &Tensor3) -> Result<f64> {
    chat.check_same(m)?;
    let den = m.frobenius();
    if den == 0.0 {
        return Err(MetricsError::Input("reference tensor is zero".into()));
    }
    Ok(chat.sub(m)?.frobenius() / den)
}

/// `10 log10(N ||m||_inf^2 / ||chat - m||_F^2)`; `+inf` for an exact match.
pub fn psnr(chat: &Tensor3, m: &Tensor3) -> Result<f64> {
    chat.check_same(m)?;
    let peak = m.max_abs();
    if peak == 0.0 {
        return Err(MetricsError::Input("reference tensor is zero".into()));
    }
    let err = chat.sub(m)?.frobenius_sq();
    if err == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (m.len() as f64 * peak * peak / err).log10())
}

/// Entries an NMAE sum runs over.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum NmaeScope {
    /// The unobserved entries only.
    #[default]
    Unobserved,
    /// Every entry, for debugging.
    All,
}

/// `sum |m - chat| / sum |m|` over the unobserved entries.
pub fn nmae(chat: &Tensor3, m: &Tensor3, mask: &ObservationMask) -> Result<f64> {
    nmae_with(chat, m, mask, NmaeScope::Unobserved)
}

pub fn nmae_with(chat: &Tensor3, m: &Tensor3, mask: &ObservationMask, scope: NmaeScope) -> Result<f64> {
    chat.check_same(m)?;
    if mask.dims() != m.dims() {
        return Err(MetricsError::Input(format!(
            "mask dims {:?} differ from tensor dims {:?}",
            mask.dims(),
            m.dims()
        )));
    }
    let mut num = 0.0;
    let mut den = 0.0;
    let mut used = 0usize;
    for ((&c, &v), &o) in chat.data().iter().zip(m.data()).zip(mask.flags()) {
        if scope == NmaeScope::Unobserved && o {
            continue;
        }
        num += (v - c).abs();
        den += v.abs();
        used += 1;
    }
    if used == 0 {
        return Err(MetricsError::Input("no unobserved entries".into()));
    }
    if den == 0.0 {
        return Err(MetricsError::Input("reference is zero on the evaluated entries".into()));
    }
    Ok(num / den)
}

/// Adjacent-frame gaps `|C_k(i,j) - C_{k+1}(i,j)|` normalized by their maximum,
/// in storage order of `(i, j, k)`; all zero when every frame is the same.
pub fn normalized_gaps(video: &Tensor3) -> Result<Vec<f64>> {
    let [n1, n2, n3] = video.dims();
    if n3 < 2 {
        return Err(MetricsError::Input(format!("gap analysis needs at least two frames, got {n3}")));
    }
    let frames: Vec<_> = (0..n3).map(|k| video.slice(Mode::Three, k)).collect::<std::result::Result<_, _>>()?;
    let mut gaps = Vec::with_capacity(n1 * n2 * (n3 - 1));
    for k in 0..n3 - 1 {
        for j in 0..n2 {
            for i in 0..n1 {
                gaps.push((frames[k][(i, j)] - frames[k + 1][(i, j)]).abs());
            }
        }
    }
    let max = gaps.iter().copied().fold(0.0, f64::max);
    if max > 0.0 {
        for g in &mut gaps {
            *g /= max;
        }
    }
    Ok(gaps)
}

/// Thresholds `0.00, 0.01, ..., 1.00`.
pub fn default_grid() -> Vec<f64> {
    (0..=100).map(|i| i as f64 / 100.0).collect()
}

/// Empirical CDF of the normalized gaps at each threshold: the fraction of
/// gaps `<= t`.
pub fn gap_cdf(video: &Tensor3, grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    let mut gaps = normalized_gaps(video)?;
    gaps.sort_by(f64::total_cmp);
    let n = gaps.len() as f64;
    Ok(grid
        .iter()
        .map(|&t| (t, gaps.partition_point(|&g| g <= t) as f64 / n))
        .collect())
}

/// `(threshold, cumulative probability)` lines with a header.
pub fn gap_cdf_csv(rows: &[(f64, f64)]) -> String {
    let mut s = String::from("threshold,cdf\n");
    for (t, p) in rows {
        s.push_str(&format!("{t},{p}\n"));
    }
    s
}

/// Metric value for CSV output; infinities print as `inf`.
pub fn format_metric(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".into()
    } else {
        format!("{v:e}")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MetricsReport {
    pub rse: f64,
    pub psnr: f64,
    pub nmae: Option<f64>,
    pub elapsed_s: f64,
}

impl MetricsReport {
    pub const CSV_HEADER: &'static str = "rse,psnr,nmae,elapsed_s";

    /// RSE and PSNR of `chat`, plus NMAE when a mask is given.
    pub fn evaluate(chat: &Tensor3, m: &Tensor3, mask: Option<&ObservationMask>, elapsed_s: f64) -> Result<Self> {
        Ok(MetricsReport {
            rse: rse(chat, m)?,
            psnr: psnr(chat, m)?,
            nmae: mask.map(|k| nmae(chat, m, k)).transpose()?,
            elapsed_s,
        })
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{}",
            format_metric(self.rse),
            format_metric(self.psnr),
            self.nmae.map(format_metric).unwrap_or_default(),
            self.elapsed_s
        )
    }
}

impl fmt::Display for MetricsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rse {} psnr {}", format_metric(self.rse), format_metric(self.psnr))?;
        if let Some(n) = self.nmae {
            write!(f, " nmae {}", format_metric(n))?;
        }
        Ok(())
    }
}
