use super::{axpy, dot, Matrix};
use crate::scalar::Real;

/// Solves `R x = b` in place for upper-triangular `R` (leading `n x n` block).
/// Returns the row of the first zero pivot on failure.
pub fn solve_upper<T: Real>(r: &Matrix<T>, b: &mut [T]) -> Result<(), usize> {
    let n = b.len();
    for k in (0..n).rev() {
        let d = r[(k, k)];
        if d == T::zero() {
            return Err(k);
        }
        b[k] /= d;
        let xk = b[k];
        if xk != T::zero() {
            axpy(-xk, &r.col(k)[..k], &mut b[..k]);
        }
    }
    Ok(())
}

/// Solves `R^T x = b` in place (forward substitution with the transpose).
pub fn solve_upper_transpose<T: Real>(r: &Matrix<T>, b: &mut [T]) -> Result<(), usize> {
    let n = b.len();
    for k in 0..n {
        let d = r[(k, k)];
        if d == T::zero() {
            return Err(k);
        }
        let s = dot(&r.col(k)[..k], &b[..k]);
        b[k] = (b[k] - s) / d;
    }
    Ok(())
}

/// Solves `L x = b` in place for lower-triangular `L`.
pub fn solve_lower<T: Real>(l: &Matrix<T>, b: &mut [T]) -> Result<(), usize> {
    let n = b.len();
    for k in 0..n {
        let d = l[(k, k)];
        if d == T::zero() {
            return Err(k);
        }
        b[k] /= d;
        let xk = b[k];
        if xk != T::zero() {
            axpy(-xk, &l.col(k)[k + 1..n], &mut b[k + 1..n]);
        }
    }
    Ok(())
}

/// Explicit inverse of the upper-triangular `n x n` matrix `r`.
pub fn upper_inverse<T: Real>(r: &Matrix<T>) -> Result<Matrix<T>, usize> {
    let n = r.ncols();
    let mut inv = Matrix::zeros(n, n);
    for j in 0..n {
        let col = inv.col_mut(j);
        col[j] = T::one();
        solve_upper(r, &mut col[..=j])?;
    }
    Ok(inv)
}
