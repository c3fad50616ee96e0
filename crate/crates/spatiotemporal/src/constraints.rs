use std::fmt::Write as _;
use std::path::Path;

use tensor_core::{Complex64, MatrixC, MatrixR, Mode, Tensor3};

use crate::error::{Result, StError};

/// Temporal first-difference operator: `(n3 - 1) x n3`, `1` on the diagonal
/// and `-1` on the first superdiagonal.
pub fn build_temporal(n3: usize) -> Result<MatrixR> {
    if n3 < 2 {
        return Err(StError::Config(format!("temporal operator needs n3 >= 2, got {n3}")));
    }
    Ok(MatrixR::from_fn(n3 - 1, n3, |r, c| {
        if c == r {
            1.0
        } else if c == r + 1 {
            -1.0
        } else {
            0.0
        }
    }))
}

/// `1e-6` times the mean squared norm of the mode-`u` slices.
pub fn default_ridge(c: &Tensor3, mode: Mode) -> f64 {
    let n = c.dims()[mode.axis()].max(1) as f64;
    1e-6 * c.frobenius_sq() / n
}

fn solve_normal(a: MatrixR, b: &MatrixR) -> MatrixR {
    if let Some(ch) = a.clone().cholesky() {
        return ch.solve(b);
    }
    let svd = a.svd(true, true);
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let eps = (smax * 1e-12).max(f64::MIN_POSITIVE);
    svd.solve(b, eps).unwrap_or_else(|_| MatrixR::zeros(b.nrows(), b.ncols()))
}

/// Regression weights of every mode-`u` slice on the others, ridge `delta`.
///
/// Row `i` of the result has `1` on the diagonal and `-w_i(j)` elsewhere, where
/// `w_i` minimizes `||C_i - sum_{j != i} w_i(j) C_j||^2 + delta ||w_i||^2`.
pub fn build_spatial(c: &Tensor3, mode: Mode, delta: f64) -> Result<MatrixR> {
    if mode == Mode::Three {
        return Err(StError::Config("spatial constraints act on modes 1 and 2".into()));
    }
    let n = c.dims()[mode.axis()];
    if n < 2 {
        return Err(StError::Config(format!(
            "spatial regression on mode {} needs at least two slices",
            mode.number()
        )));
    }
    if !(delta >= 0.0 && delta.is_finite()) {
        return Err(StError::Config(format!("ridge must be nonnegative, got {delta}")));
    }
    let s = c.matricize(mode);
    let gram = &s * s.transpose();
    let mut out = MatrixR::identity(n, n);
    for i in 0..n {
        let others: Vec<usize> = (0..n).filter(|&j| j != i).collect();
        let k = others.len();
        let a = MatrixR::from_fn(k, k, |r, q| gram[(others[r], others[q])] + if r == q { delta } else { 0.0 });
        let b = MatrixR::from_fn(k, 1, |r, _| gram[(others[r], i)]);
        let w = solve_normal(a, &b);
        for (r, &j) in others.iter().enumerate() {
            out[(i, j)] = -w[(r, 0)];
        }
    }
    Ok(out)
}

/// Which side of a factor product a constraint multiplies, in the spectrum.
#[derive(Clone, Debug, PartialEq)]
pub enum Side {
    /// `W X_l Y_l` with `W` square.
    Left(MatrixC),
    /// `X_l Y_l W`.
    Right(MatrixC),
}

/// Spatial matrices `F`, `G`, the temporal operator `H` and their weights.
///
/// `F` acts on the first index of the mode-2 term, `G` on the second index
/// of the mode-3 term and `H` on the third index of the mode-1 term.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstraintSet {
    pub f: Option<MatrixR>,
    pub g: Option<MatrixR>,
    pub h: Option<MatrixR>,
    pub betas: [f64; 3],
}

impl ConstraintSet {
    pub fn none() -> Self {
        ConstraintSet { f: None, g: None, h: None, betas: [0.0; 3] }
    }

    /// Temporal smoothing only.
    pub fn temporal(n3: usize, beta3: f64) -> Result<Self> {
        let h = if beta3 > 0.0 { Some(build_temporal(n3)?) } else { None };
        Ok(ConstraintSet { f: None, g: None, h, betas: [0.0, 0.0, beta3] })
    }

    /// Checks shapes and weights against tensor dims.
    pub fn validate(&self, dims: [usize; 3]) -> Result<()> {
        if self.betas.iter().any(|b| !(b.is_finite() && *b >= 0.0)) {
            return Err(StError::Config(format!("betas {:?} must be nonnegative", self.betas)));
        }
        let check = |name: &str, m: &Option<MatrixR>, shape: (usize, usize)| match m {
            Some(m) if m.shape() != shape => Err(StError::Config(format!(
                "{name} is {:?}, expected {:?}",
                m.shape(),
                shape
            ))),
            _ => Ok(()),
        };
        let [n1, n2, n3] = dims;
        check("F", &self.f, (n1, n1))?;
        check("G", &self.g, (n2, n2))?;
        if let Some(h) = &self.h {
            if h.ncols() != n3 || h.nrows() == 0 {
                return Err(StError::Config(format!("H is {:?}, expected m x {n3}", h.shape())));
            }
        }
        Ok(())
    }

    /// Weight and spectral constraint acting on the factor product of `mode`,
    /// or `None` when that weight is zero or the matrix is absent. The
    /// spectral form is the same on every slice: `F`, `G^T` and `H^T`.
    pub fn on_mode(&self, mode: Mode) -> Option<(f64, Side)> {
        let cx = |m: &MatrixR| m.map(|v| Complex64::new(v, 0.0));
        match mode {
            Mode::One => self.h.as_ref().filter(|_| self.betas[2] > 0.0).map(|h| (self.betas[2], Side::Right(cx(&h.transpose())))),
            Mode::Two => self.f.as_ref().filter(|_| self.betas[0] > 0.0).map(|f| (self.betas[0], Side::Left(cx(f)))),
            Mode::Three => self.g.as_ref().filter(|_| self.betas[1] > 0.0).map(|g| (self.betas[1], Side::Right(cx(&g.transpose())))),
        }
    }

    /// Writes `F.csv`, `G.csv` and `H.csv` for the matrices present.
    pub fn export_csv(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        for (name, m) in [("F", &self.f), ("G", &self.g), ("H", &self.h)] {
            if let Some(m) = m {
                write_matrix_csv(dir.join(format!("{name}.csv")), m)?;
            }
        }
        Ok(())
    }
}

/// One line per row, comma-separated, shortest round-trip formatting.
pub fn matrix_csv(m: &MatrixR) -> String {
    let mut s = String::new();
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            if c > 0 {
                s.push(',');
            }
            let _ = write!(s, "{}", m[(r, c)]);
        }
        s.push('\n');
    }
    s
}

pub fn write_matrix_csv(path: impl AsRef<Path>, m: &MatrixR) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, matrix_csv(m)).map_err(|source| StError::Io { path: path.to_path_buf(), source })
}
