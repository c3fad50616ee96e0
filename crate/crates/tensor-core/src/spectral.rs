use rustfft::{FftDirection, FftPlanner};

use crate::error::{Result, TensorError};
use crate::tensor::{offset, Mode, Tensor3};
use crate::{Complex64, MatrixC};

/// Default bound on `||Im|| / ||t||` accepted when returning to the real domain.
pub const DEFAULT_IMAG_TOL: f64 = 1e-9;

/// Complex tensor holding the mode-`u` DFT of a real tensor.
///
/// Slice `l` along the transformed mode is the `l`-th diagonal block of the
/// block-diagonalized circulant matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralTensor {
    mode: Mode,
    dims: [usize; 3],
    data: Vec<Complex64>,
}

impl SpectralTensor {
    pub fn zeros(mode: Mode, dims: [usize; 3]) -> Self {
        SpectralTensor {
            mode,
            dims,
            data: vec![Complex64::new(0.0, 0.0); dims[0] * dims[1] * dims[2]],
        }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    /// Number of spectral slices, `n_u`.
    pub fn n_slices(&self) -> usize {
        self.dims[self.mode.axis()]
    }

    /// Spectral slice `l`, shaped like the mode slices of the origin tensor.
    pub fn slice(&self, l: usize) -> MatrixC {
        let (rows, cols) = self.mode.slice_shape(self.dims);
        MatrixC::from_fn(rows, cols, |r, c| {
            let [i, j, k] = self.mode.position(l, r, c);
            self.data[offset(self.dims, i, j, k)]
        })
    }

    pub fn slices(&self) -> Vec<MatrixC> {
        (0..self.n_slices()).map(|l| self.slice(l)).collect()
    }

    /// Writes `m` into slice `l`.
    pub fn set_slice(&mut self, l: usize, m: &MatrixC) -> Result<()> {
        let shape = self.mode.slice_shape(self.dims);
        if m.shape() != shape || l >= self.n_slices() {
            return Err(TensorError::Dimension(format!(
                "slice {l} of shape {:?} does not fit {:?}",
                m.shape(),
                shape
            )));
        }
        for c in 0..shape.1 {
            for r in 0..shape.0 {
                let [i, j, k] = self.mode.position(l, r, c);
                self.data[offset(self.dims, i, j, k)] = m[(r, c)];
            }
        }
        Ok(())
    }

    /// Assembles a spectral tensor from a full list of slices.
    pub fn from_slices(mode: Mode, slices: &[MatrixC]) -> Result<Self> {
        let first = slices
            .first()
            .ok_or_else(|| TensorError::Dimension("no slices given".into()))?;
        let (rows, cols) = first.shape();
        let (p, q) = mode.others();
        let mut dims = [0; 3];
        dims[mode.axis()] = slices.len();
        dims[p] = rows;
        dims[q] = cols;
        let mut out = SpectralTensor::zeros(mode, dims);
        for (l, s) in slices.iter().enumerate() {
            out.set_slice(l, s)?;
        }
        Ok(out)
    }

    /// `sum_l ||slice(l)||_F^2`.
    pub fn frobenius_sq(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// In-place DFT of every fiber along `axis`.
pub(crate) fn transform_fibers(
    data: &mut [Complex64],
    dims: [usize; 3],
    axis: usize,
    direction: FftDirection,
) {
    let n = dims[axis];
    if n <= 1 || data.is_empty() {
        return;
    }
    let stride = match axis {
        0 => 1,
        1 => dims[0],
        _ => dims[0] * dims[1],
    };
    let fft = FftPlanner::new().plan_fft(n, direction);
    let fibers = data.len() / n;
    let mut buf = vec![Complex64::new(0.0, 0.0); data.len()];
    let starts: Vec<usize> = fiber_starts(dims, axis).collect();
    debug_assert_eq!(starts.len(), fibers);
    for (f, &s) in starts.iter().enumerate() {
        for t in 0..n {
            buf[f * n + t] = data[s + t * stride];
        }
    }
    fft.process(&mut buf);
    for (f, &s) in starts.iter().enumerate() {
        for t in 0..n {
            data[s + t * stride] = buf[f * n + t];
        }
    }
}

fn fiber_starts(dims: [usize; 3], axis: usize) -> impl Iterator<Item = usize> {
    let mut ranges = dims;
    ranges[axis] = 1;
    (0..ranges[2]).flat_map(move |k| {
        (0..ranges[1]).flat_map(move |j| (0..ranges[0]).map(move |i| offset(dims, i, j, k)))
    })
}

/// Unnormalized forward DFT along mode `u`.
pub fn mode_fft(t: &Tensor3, mode: Mode) -> SpectralTensor {
    let dims = t.dims();
    let mut data: Vec<Complex64> = t.data().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    transform_fibers(&mut data, dims, mode.axis(), FftDirection::Forward);
    SpectralTensor { mode, dims, data }
}

/// Inverse DFT along the spectrum's mode with the default imaginary tolerance.
pub fn mode_ifft(s: &SpectralTensor) -> Result<Tensor3> {
    mode_ifft_with_tol(s, DEFAULT_IMAG_TOL)
}

/// Inverse DFT along the spectrum's mode, scaled by `1 / n_u`.
///
/// Fails when the imaginary part of the result exceeds `tol` relative to the
/// Frobenius norm of the complex result, and discards it otherwise.
pub fn mode_ifft_with_tol(s: &SpectralTensor, tol: f64) -> Result<Tensor3> {
    let mut data = s.data.clone();
    transform_fibers(&mut data, s.dims, s.mode.axis(), FftDirection::Inverse);
    let scale = 1.0 / s.n_slices() as f64;
    let mut im = 0.0;
    let mut total = 0.0;
    let re: Vec<f64> = data
        .iter()
        .map(|z| {
            let z = z * scale;
            im += z.im * z.im;
            total += z.norm_sqr();
            z.re
        })
        .collect();
    if im > 0.0 && im.sqrt() > tol * total.sqrt() {
        return Err(TensorError::ImaginaryResidue {
            residue: (im / total).sqrt(),
            tol,
        });
    }
    Tensor3::from_vec(s.dims, re)
}
