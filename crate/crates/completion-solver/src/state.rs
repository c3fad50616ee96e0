use data_io::{seeded_rng, standard_normal, ObservationMask, Rng64};
use tensor_core::{
    mode_ifft_with_tol, Complex64, MatrixC, Mode, SpectralTensor, Tensor3,
};

use crate::config::SolverConfig;
use crate::error::{Result, SolveError};

/// Spectral factors of one mode: slice `l` holds `X_l` (`rows x r_l`) and `Y_l` (`r_l x cols`).
#[derive(Clone, Debug, PartialEq)]
pub struct ModeFactors {
    pub x: Vec<MatrixC>,
    pub y: Vec<MatrixC>,
}

impl ModeFactors {
    pub fn n_slices(&self) -> usize {
        self.x.len()
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.x.iter().map(|x| x.ncols()).collect()
    }

    pub fn max_rank(&self) -> usize {
        self.x.iter().map(|x| x.ncols()).max().unwrap_or(0)
    }

    /// `X_l * Y_l` for every slice; the upper half is filled by conjugation.
    pub fn products(&self) -> Vec<MatrixC> {
        let n = self.n_slices();
        let mut out: Vec<MatrixC> = (0..n.min(n / 2 + 1)).map(|l| &self.x[l] * &self.y[l]).collect();
        for l in n / 2 + 1..n {
            out.push(out[n - l].conjugate());
        }
        out
    }

    /// Copies the conjugates of slices `1..(n+1)/2` into their partners.
    pub fn mirror(&mut self) {
        let n = self.n_slices();
        for l in n / 2 + 1..n {
            self.x[l] = self.x[n - l].conjugate();
            self.y[l] = self.y[n - l].conjugate();
        }
    }

    /// Tensor-domain squared norms `(||X||^2, ||Y||^2)`, i.e. slice sums over `n_u`.
    pub fn norms_sq(&self) -> (f64, f64) {
        let n = self.n_slices().max(1) as f64;
        let x: f64 = self.x.iter().map(|m| m.norm_squared()).sum();
        let y: f64 = self.y.iter().map(|m| m.norm_squared()).sum();
        (x / n, y / n)
    }
}

/// Iterate of the alternating scheme.
#[derive(Clone, Debug, PartialEq)]
pub struct FactorState {
    pub c: Tensor3,
    pub modes: [ModeFactors; 3],
    pub iter: usize,
}

impl FactorState {
    pub fn factors(&self, mode: Mode) -> &ModeFactors {
        &self.modes[mode.axis()]
    }

    pub fn factors_mut(&mut self, mode: Mode) -> &mut ModeFactors {
        &mut self.modes[mode.axis()]
    }

    /// Current multi-tubal rank estimate: the largest slice rank per mode.
    pub fn ranks(&self) -> [usize; 3] {
        Mode::ALL.map(|m| self.factors(m).max_rank())
    }

    /// `X_u *_u Y_u` assembled from the spectral slice products.
    pub fn mode_term(&self, mode: Mode, imag_tol: f64) -> Result<Tensor3> {
        let dims = self.c.dims();
        let f = self.factors(mode);
        if f.max_rank() == 0 {
            return Ok(Tensor3::zeros(dims));
        }
        let mut spec = SpectralTensor::zeros(mode, dims);
        for (l, p) in f.products().iter().enumerate() {
            spec.set_slice(l, p)?;
        }
        Ok(mode_ifft_with_tol(&spec, imag_tol)?)
    }

    /// Real factor tensors `(X_u, Y_u)`; requires equal ranks across slices.
    pub fn factor_tensors(&self, mode: Mode, imag_tol: f64) -> Result<(Tensor3, Tensor3)> {
        let f = self.factors(mode);
        let r = f.max_rank();
        if f.ranks().iter().any(|&q| q != r) || r == 0 {
            return Err(SolveError::Input("factor ranks differ across slices".into()));
        }
        let x = SpectralTensor::from_slices(mode, &f.x)?;
        let y = SpectralTensor::from_slices(mode, &f.y)?;
        Ok((mode_ifft_with_tol(&x, imag_tol)?, mode_ifft_with_tol(&y, imag_tol)?))
    }
}

/// `sum_u alpha_u X_u *_u Y_u`, summed in mode order.
pub fn reconstruct(state: &FactorState, alphas: [f64; 3], imag_tol: f64) -> Result<Tensor3> {
    let dims = state.c.dims();
    let mut acc = vec![0.0; dims.iter().product()];
    for mode in Mode::ALL {
        let a = alphas[mode.axis()];
        if a == 0.0 {
            continue;
        }
        let term = state.mode_term(mode, imag_tol)?;
        for (s, v) in acc.iter_mut().zip(term.data()) {
            *s += a * v;
        }
    }
    Tensor3::from_vec(dims, acc).map_err(|e| SolveError::Numerical {
        iter: state.iter,
        message: e.to_string(),
        trace: Vec::new(),
    })
}

/// Whether slice `l` of `n` is its own conjugate partner.
pub(crate) fn self_conjugate(l: usize, n: usize) -> bool {
    l == 0 || 2 * l == n
}

/// Slices `0..=n/2` with the number of times each occurs up to conjugation.
pub(crate) fn primary_slices(n: usize) -> impl Iterator<Item = (usize, f64)> {
    (0..n.min(n / 2 + 1)).map(move |l| (l, if self_conjugate(l, n) { 1.0 } else { 2.0 }))
}

fn gaussian_matrix(rng: &mut Rng64, rows: usize, cols: usize, real: bool) -> MatrixC {
    let mut m = MatrixC::zeros(rows, cols);
    for c in 0..cols {
        for r in 0..rows {
            let re = standard_normal(rng);
            let im = if real { 0.0 } else { standard_normal(rng) };
            m[(r, c)] = Complex64::new(re, im);
        }
    }
    m
}

/// Initial iterate: `C = P_Omega(M)` and Gaussian spectral factors.
///
/// Slices `0..=n/2` are drawn in order (X then Y, column-major, real part
/// before imaginary part); the self-conjugate slices are real and the
/// remaining slices are conjugates of their partners.
pub fn init_state(m: &Tensor3, mask: &ObservationMask, cfg: &SolverConfig) -> Result<FactorState> {
    if mask.dims() != m.dims() {
        return Err(SolveError::Input(format!(
            "mask dims {:?} differ from tensor dims {:?}",
            mask.dims(),
            m.dims()
        )));
    }
    cfg.validate(m.dims())?;
    let eff = cfg.effective();
    let dims = m.dims();
    let mut rng = seeded_rng(cfg.seed);
    let modes = Mode::ALL.map(|mode| {
        let n = dims[mode.axis()];
        let (rows, cols) = mode.slice_shape(dims);
        let ranks = if eff.algorithm == crate::Algorithm::Tctf && mode != Mode::Three {
            vec![0; n]
        } else {
            eff.initial_rank.slice_ranks(mode, n)
        };
        let mut x = vec![MatrixC::zeros(rows, 0); n];
        let mut y = vec![MatrixC::zeros(0, cols); n];
        for l in 0..=n / 2 {
            let real = self_conjugate(l, n);
            x[l] = gaussian_matrix(&mut rng, rows, ranks[l], real);
            y[l] = gaussian_matrix(&mut rng, ranks[l], cols, real);
        }
        for l in n / 2 + 1..n {
            x[l] = x[n - l].conjugate();
            y[l] = y[n - l].conjugate();
        }
        ModeFactors { x, y }
    });
    Ok(FactorState {
        c: mask.project(m)?,
        modes,
        iter: 0,
    })
}
