use tensor_core::Tensor3;

use crate::error::{DataError, Result};

/// Boolean third-order array marking the observed entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObservationMask {
    dims: [usize; 3],
    observed: Vec<bool>,
    count: usize,
}

impl ObservationMask {
    /// Wraps flags laid out like [`Tensor3`] data.
    pub fn new(dims: [usize; 3], observed: Vec<bool>) -> Result<Self> {
        if observed.len() != dims[0] * dims[1] * dims[2] {
            return Err(DataError::Config(format!(
                "{} mask flags for dims {:?}",
                observed.len(),
                dims
            )));
        }
        let count = observed.iter().filter(|&&b| b).count();
        Ok(ObservationMask { dims, observed, count })
    }

    pub fn full(dims: [usize; 3]) -> Self {
        let n = dims[0] * dims[1] * dims[2];
        ObservationMask { dims, observed: vec![true; n], count: n }
    }

    pub fn empty(dims: [usize; 3]) -> Self {
        let n = dims[0] * dims[1] * dims[2];
        ObservationMask { dims, observed: vec![false; n], count: 0 }
    }

    pub fn from_fn(dims: [usize; 3], mut f: impl FnMut(usize, usize, usize) -> bool) -> Self {
        let mut observed = Vec::with_capacity(dims[0] * dims[1] * dims[2]);
        for k in 0..dims[2] {
            for j in 0..dims[1] {
                for i in 0..dims[0] {
                    observed.push(f(i, j, k));
                }
            }
        }
        let count = observed.iter().filter(|&&b| b).count();
        ObservationMask { dims, observed, count }
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn len(&self) -> usize {
        self.observed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observed.is_empty()
    }

    /// Number of observed entries.
    pub fn count(&self) -> usize {
        self.count
    }

    pub fn flags(&self) -> &[bool] {
        &self.observed
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> bool {
        self.observed[i + self.dims[0] * (j + self.dims[1] * k)]
    }

    fn check(&self, t: &Tensor3) -> Result<()> {
        if t.dims() != self.dims {
            return Err(DataError::Config(format!(
                "mask dims {:?} do not match tensor dims {:?}",
                self.dims,
                t.dims()
            )));
        }
        Ok(())
    }

    /// Keeps observed entries and zeroes the rest.
    pub fn project(&self, t: &Tensor3) -> Result<Tensor3> {
        self.check(t)?;
        self.select(t, true)
    }

    /// Keeps unobserved entries and zeroes the rest.
    pub fn project_complement(&self, t: &Tensor3) -> Result<Tensor3> {
        self.check(t)?;
        self.select(t, false)
    }

    fn select(&self, t: &Tensor3, keep: bool) -> Result<Tensor3> {
        let data = t
            .data()
            .iter()
            .zip(&self.observed)
            .map(|(&v, &o)| if o == keep { v } else { 0.0 })
            .collect();
        Ok(Tensor3::from_vec(self.dims, data)?)
    }

    /// Takes `on` at observed entries and `off` elsewhere.
    pub fn merge(&self, on: &Tensor3, off: &Tensor3) -> Result<Tensor3> {
        self.check(on)?;
        self.check(off)?;
        let data = on
            .data()
            .iter()
            .zip(off.data())
            .zip(&self.observed)
            .map(|((&a, &b), &o)| if o { a } else { b })
            .collect();
        Ok(Tensor3::from_vec(self.dims, data)?)
    }
}
