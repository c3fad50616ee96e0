use crate::error::{Result, TensorError};
use crate::spectral::{mode_fft, mode_ifft, SpectralTensor};
use crate::tensor::{Mode, Tensor3};

/// Result dims of `a *_u b`, or an error if the operands do not conform.
///
/// Mode-`u` slices of `a` must be `p x r` and those of `b` must be `r x q`,
/// with both tensors sharing `n_u`.
pub fn product_dims(a: [usize; 3], b: [usize; 3], mode: Mode) -> Result<[usize; 3]> {
    let ax = mode.axis();
    let (p, q) = mode.others();
    if a[ax] != b[ax] || a[q] != b[p] {
        return Err(TensorError::Dimension(format!(
            "operands {a:?} and {b:?} do not conform for the mode-{} product",
            mode.number()
        )));
    }
    let mut out = [0; 3];
    out[ax] = a[ax];
    out[p] = a[p];
    out[q] = b[q];
    Ok(out)
}

/// Generalized t-product `a *_u b` evaluated slice by slice in the mode-`u` spectrum.
pub fn t_product(a: &Tensor3, b: &Tensor3, mode: Mode) -> Result<Tensor3> {
    let dims = product_dims(a.dims(), b.dims(), mode)?;
    let fa = mode_fft(a, mode);
    let fb = mode_fft(b, mode);
    let mut out = SpectralTensor::zeros(mode, dims);
    for l in 0..dims[mode.axis()] {
        out.set_slice(l, &(fa.slice(l) * fb.slice(l)))?;
    }
    mode_ifft(&out)
}

/// Generalized t-product computed literally as `fold(bcirc(a) * unfold(b))`.
pub fn t_product_naive(a: &Tensor3, b: &Tensor3, mode: Mode) -> Result<Tensor3> {
    let dims = product_dims(a.dims(), b.dims(), mode)?;
    let m = a.bcirc(mode) * b.unfold(mode);
    Tensor3::fold(&m, mode, dims)
}
