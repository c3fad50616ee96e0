//! Closed-form per-slice factor updates.

use tensor_core::{Complex64, MatrixC};

use crate::error::{Result, SolveError};

fn cx(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

/// `gram + shift * I`.
pub fn shifted(gram: &MatrixC, shift: f64) -> MatrixC {
    let mut a = gram.clone();
    for d in 0..a.nrows() {
        a[(d, d)] += cx(shift);
    }
    a
}

/// Solves `a z = b` for Hermitian positive definite `a`.
pub fn solve_hpd(a: &MatrixC, b: &MatrixC) -> Result<MatrixC> {
    let chol = a
        .clone()
        .cholesky()
        .ok_or_else(|| SolveError::Config("system matrix is not positive definite".into()))?;
    Ok(chol.solve(b))
}

/// Solves `z a = b` for Hermitian positive definite `a`.
pub fn solve_hpd_right(b: &MatrixC, a: &MatrixC) -> Result<MatrixC> {
    Ok(solve_hpd(a, &b.adjoint())?.adjoint())
}

/// `X+ = (lambda X + alpha C Y*) (alpha Y Y* + 2 lambda I)^{-1}`.
pub fn update_x(x: &MatrixC, y: &MatrixC, cbar: &MatrixC, alpha: f64, lambda: f64) -> Result<MatrixC> {
    if x.ncols() == 0 {
        return Ok(x.clone());
    }
    let ya = y.adjoint();
    let rhs = x * cx(lambda) + cbar * &ya * cx(alpha);
    let gram = shifted(&((y * &ya) * cx(alpha)), 2.0 * lambda);
    solve_hpd_right(&rhs, &gram)
}

/// `Y+ = (alpha X* X + 2 lambda I)^{-1} (lambda Y + alpha X* C)`.
pub fn update_y(x: &MatrixC, y: &MatrixC, cbar: &MatrixC, alpha: f64, lambda: f64) -> Result<MatrixC> {
    if y.nrows() == 0 {
        return Ok(y.clone());
    }
    let xa = x.adjoint();
    let rhs = y * cx(lambda) + &xa * cbar * cx(alpha);
    let gram = shifted(&((&xa * x) * cx(alpha)), 2.0 * lambda);
    solve_hpd(&gram, &rhs)
}

/// Moore-Penrose inverse with the conventional `max(m, n) * eps * sigma_max` cutoff.
pub fn pinv(a: &MatrixC) -> MatrixC {
    if a.is_empty() {
        return a.adjoint();
    }
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let eps = a.nrows().max(a.ncols()) as f64 * f64::EPSILON * smax;
    svd.pseudo_inverse(eps.max(f64::MIN_POSITIVE))
        .unwrap_or_else(|_| MatrixC::zeros(a.ncols(), a.nrows()))
}

/// Unregularized `X+ = C Y* (Y Y*)^+`.
pub fn update_x_pinv(x: &MatrixC, y: &MatrixC, cbar: &MatrixC) -> MatrixC {
    if x.ncols() == 0 {
        return x.clone();
    }
    let ya = y.adjoint();
    cbar * &ya * pinv(&(y * &ya))
}

/// Unregularized `Y+ = (X* X)^+ X* C`.
pub fn update_y_pinv(x: &MatrixC, y: &MatrixC, cbar: &MatrixC) -> MatrixC {
    if y.nrows() == 0 {
        return y.clone();
    }
    let xa = x.adjoint();
    pinv(&(&xa * x)) * xa * cbar
}
