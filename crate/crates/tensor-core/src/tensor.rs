use crate::error::{Result, TensorError};
use crate::MatrixR;

/// One of the three tensor modes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    One,
    Two,
    Three,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::One, Mode::Two, Mode::Three];

    /// Zero-based axis of this mode.
    pub fn axis(self) -> usize {
        match self {
            Mode::One => 0,
            Mode::Two => 1,
            Mode::Three => 2,
        }
    }

    /// One-based mode number, as used on the command line and in traces.
    pub fn number(self) -> usize {
        self.axis() + 1
    }

    pub fn from_number(u: usize) -> Option<Mode> {
        match u {
            1 => Some(Mode::One),
            2 => Some(Mode::Two),
            3 => Some(Mode::Three),
            _ => None,
        }
    }

    /// The two remaining axes in increasing order: row and column axis of a slice.
    pub fn others(self) -> (usize, usize) {
        match self {
            Mode::One => (1, 2),
            Mode::Two => (0, 2),
            Mode::Three => (0, 1),
        }
    }

    /// Full `(i, j, k)` position of entry `(r, c)` of slice `l`.
    #[inline]
    pub(crate) fn position(self, l: usize, r: usize, c: usize) -> [usize; 3] {
        match self {
            Mode::One => [l, r, c],
            Mode::Two => [r, l, c],
            Mode::Three => [r, c, l],
        }
    }

    /// Shape `(rows, cols)` of a mode slice for a tensor of the given dims.
    pub fn slice_shape(self, dims: [usize; 3]) -> (usize, usize) {
        let (p, q) = self.others();
        (dims[p], dims[q])
    }
}

/// Dense real third-order tensor, first index fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor3 {
    dims: [usize; 3],
    data: Vec<f64>,
}

#[inline]
pub(crate) fn offset(dims: [usize; 3], i: usize, j: usize, k: usize) -> usize {
    i + dims[0] * (j + dims[1] * k)
}

impl Tensor3 {
    pub fn zeros(dims: [usize; 3]) -> Self {
        Tensor3 {
            dims,
            data: vec![0.0; dims[0] * dims[1] * dims[2]],
        }
    }

    /// Wraps a buffer laid out with `i` fastest, then `j`, then `k`.
    pub fn from_vec(dims: [usize; 3], data: Vec<f64>) -> Result<Self> {
        let n = dims[0] * dims[1] * dims[2];
        if data.len() != n {
            return Err(TensorError::Dimension(format!(
                "buffer of length {} for dims {:?}",
                data.len(),
                dims
            )));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(TensorError::NonFinite(pos));
        }
        Ok(Tensor3 { dims, data })
    }

    /// Builds a tensor entrywise.
    ///
    /// # Panics
    /// Panics if `f` returns a non-finite value.
    pub fn from_fn(dims: [usize; 3], mut f: impl FnMut(usize, usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(dims[0] * dims[1] * dims[2]);
        for k in 0..dims[2] {
            for j in 0..dims[1] {
                for i in 0..dims[0] {
                    let v = f(i, j, k);
                    assert!(v.is_finite(), "non-finite entry at ({i}, {j}, {k})");
                    data.push(v);
                }
            }
        }
        Tensor3 { dims, data }
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.data[offset(self.dims, i, j, k)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, v: f64) {
        let o = offset(self.dims, i, j, k);
        self.data[o] = v;
    }

    fn check_index(&self, mode: Mode, l: usize) -> Result<()> {
        let size = self.dims[mode.axis()];
        if l >= size {
            return Err(TensorError::Index {
                mode: mode.number(),
                index: l,
                size,
            });
        }
        Ok(())
    }

    /// Mode-`u` slice `l`: horizontal (mode 1), lateral (mode 2) or frontal (mode 3).
    pub fn slice(&self, mode: Mode, l: usize) -> Result<MatrixR> {
        self.check_index(mode, l)?;
        let (rows, cols) = mode.slice_shape(self.dims);
        Ok(MatrixR::from_fn(rows, cols, |r, c| {
            let [i, j, k] = mode.position(l, r, c);
            self.get(i, j, k)
        }))
    }

    /// Reassembles a tensor from its full list of mode slices.
    pub fn from_slices(mode: Mode, slices: &[MatrixR]) -> Result<Self> {
        let first = slices
            .first()
            .ok_or_else(|| TensorError::Dimension("no slices given".into()))?;
        let (rows, cols) = first.shape();
        let mut dims = [0; 3];
        let (p, q) = mode.others();
        dims[mode.axis()] = slices.len();
        dims[p] = rows;
        dims[q] = cols;
        let mut out = Tensor3::zeros(dims);
        for (l, s) in slices.iter().enumerate() {
            if s.shape() != (rows, cols) {
                return Err(TensorError::Dimension(format!(
                    "slice {l} has shape {:?}, expected {:?}",
                    s.shape(),
                    (rows, cols)
                )));
            }
            for c in 0..cols {
                for r in 0..rows {
                    let v = s[(r, c)];
                    let [i, j, k] = mode.position(l, r, c);
                    if !v.is_finite() {
                        return Err(TensorError::NonFinite(offset(dims, i, j, k)));
                    }
                    out.set(i, j, k, v);
                }
            }
        }
        Ok(out)
    }

    /// Stacks the mode-`u` slices vertically.
    pub fn unfold(&self, mode: Mode) -> MatrixR {
        let (rows, cols) = mode.slice_shape(self.dims);
        let n = self.dims[mode.axis()];
        MatrixR::from_fn(n * rows, cols, |rr, c| {
            let [i, j, k] = mode.position(rr / rows, rr % rows, c);
            self.get(i, j, k)
        })
    }

    /// Inverse of [`Tensor3::unfold`].
    pub fn fold(m: &MatrixR, mode: Mode, dims: [usize; 3]) -> Result<Self> {
        let (rows, cols) = mode.slice_shape(dims);
        let n = dims[mode.axis()];
        if m.shape() != (n * rows, cols) {
            return Err(TensorError::Dimension(format!(
                "cannot fold a {:?} matrix along mode {} into dims {:?}",
                m.shape(),
                mode.number(),
                dims
            )));
        }
        let mut out = Tensor3::zeros(dims);
        for c in 0..cols {
            for rr in 0..n * rows {
                let [i, j, k] = mode.position(rr / rows, rr % rows, c);
                out.set(i, j, k, m[(rr, c)]);
            }
        }
        if let Some(pos) = out.data.iter().position(|v| !v.is_finite()) {
            return Err(TensorError::NonFinite(pos));
        }
        Ok(out)
    }

    /// Block-circulant matrix whose block `(a, b)` is slice `(a - b) mod n_u`.
    pub fn bcirc(&self, mode: Mode) -> MatrixR {
        let (rows, cols) = mode.slice_shape(self.dims);
        let n = self.dims[mode.axis()];
        let slices: Vec<MatrixR> = (0..n).map(|l| self.slice(mode, l).unwrap()).collect();
        let mut out = MatrixR::zeros(n * rows, n * cols);
        for a in 0..n {
            for b in 0..n {
                let s = &slices[(a + n - b) % n];
                out.view_mut((a * rows, b * cols), (rows, cols)).copy_from(s);
            }
        }
        out
    }

    /// Mode-`u` matricization: mode-`u` fibers as columns of an `n_u x (N / n_u)` matrix.
    pub fn matricize(&self, mode: Mode) -> MatrixR {
        let ax = mode.axis();
        let (p, q) = mode.others();
        let n = self.dims[ax];
        let np = self.dims[p];
        MatrixR::from_fn(n, self.len() / n.max(1), |r, col| {
            let mut pos = [0; 3];
            pos[ax] = r;
            pos[p] = col % np;
            pos[q] = col / np;
            self.get(pos[0], pos[1], pos[2])
        })
    }

    /// The mode-`u` matrix product `t x_u m`, contracting mode `u` against `m`'s columns.
    pub fn mode_product(&self, m: &MatrixR, mode: Mode) -> Result<Self> {
        let ax = mode.axis();
        if m.ncols() != self.dims[ax] {
            return Err(TensorError::Dimension(format!(
                "mode-{} product needs {} matrix columns, got {}",
                mode.number(),
                self.dims[ax],
                m.ncols()
            )));
        }
        let mut dims = self.dims;
        dims[ax] = m.nrows();
        let mut out = Tensor3::zeros(dims);
        for k in 0..self.dims[2] {
            for j in 0..self.dims[1] {
                for i in 0..self.dims[0] {
                    let v = self.get(i, j, k);
                    if v == 0.0 {
                        continue;
                    }
                    let mut pos = [i, j, k];
                    let src = pos[ax];
                    for r in 0..m.nrows() {
                        pos[ax] = r;
                        let o = offset(dims, pos[0], pos[1], pos[2]);
                        out.data[o] += m[(r, src)] * v;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn inner(&self, other: &Tensor3) -> Result<f64> {
        self.check_same(other)?;
        Ok(self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum())
    }

    pub fn frobenius(&self) -> f64 {
        self.frobenius_sq().sqrt()
    }

    pub fn frobenius_sq(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn check_same(&self, other: &Tensor3) -> Result<()> {
        if self.dims != other.dims {
            return Err(TensorError::Dimension(format!(
                "{:?} vs {:?}",
                self.dims, other.dims
            )));
        }
        Ok(())
    }

    /// `self - other`.
    pub fn sub(&self, other: &Tensor3) -> Result<Tensor3> {
        self.zip_with(other, |a, b| a - b)
    }

    /// `self + other`.
    pub fn add(&self, other: &Tensor3) -> Result<Tensor3> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn scale(&self, s: f64) -> Tensor3 {
        Tensor3 {
            dims: self.dims,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn zip_with(&self, other: &Tensor3, f: impl Fn(f64, f64) -> f64) -> Result<Tensor3> {
        self.check_same(other)?;
        Tensor3::from_vec(
            self.dims,
            self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        )
    }

    /// Largest absolute entrywise difference.
    pub fn max_abs_diff(&self, other: &Tensor3) -> Result<f64> {
        self.check_same(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs())))
    }
}
