//! Small dense linear algebra kernel: column-major matrices, Householder QR,
//! triangular solves and greedy column-pivoted QR.

mod matrix;
mod pivot;
mod qr;
mod triangular;

pub use matrix::Matrix;
pub use pivot::{greedy_columns, greedy_columns_by, ColumnSelection, PivotOptions};
pub use qr::HouseholderQr;
pub use triangular::{solve_lower, solve_upper, solve_upper_transpose, upper_inverse};

use crate::scalar::Real;

/// Euclidean norm with scaling to avoid overflow for large entries.
pub fn norm2<T: Real>(x: &[T]) -> T {
    let scale = x.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    if scale == T::zero() || !scale.is_finite() {
        return scale;
    }
    let inv = scale.recip();
    let ss: T = x
        .iter()
        .map(|&v| {
            let s = v * inv;
            s * s
        })
        .sum();
    scale * ss.sqrt()
}

#[inline]
pub(crate) fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = [T::zero(); 4];
    let chunks = a.len() / 4;
    for c in 0..chunks {
        let i = 4 * c;
        acc[0] += a[i] * b[i];
        acc[1] += a[i + 1] * b[i + 1];
        acc[2] += a[i + 2] * b[i + 2];
        acc[3] += a[i + 3] * b[i + 3];
    }
    let mut s = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    for i in 4 * chunks..a.len() {
        s += a[i] * b[i];
    }
    s
}

#[inline]
pub(crate) fn axpy<T: Real>(alpha: T, x: &[T], y: &mut [T]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Largest singular value by power iteration on `A^T A`, started from a
/// fixed non-symmetric vector. Converges from below.
pub fn spectral_norm_estimate<T: Real>(a: &Matrix<T>, iters: usize) -> T {
    let n = a.ncols();
    if n == 0 || a.nrows() == 0 {
        return T::zero();
    }
    let mut x: Vec<T> = (0..n).map(|i| T::one() + T::from_usize_lossy(i % 7) * T::lit(0.1)).collect();
    let mut sigma = T::zero();
    for _ in 0..iters {
        let nx = norm2(&x);
        if nx == T::zero() || !nx.is_finite() {
            return nx;
        }
        x.iter_mut().for_each(|v| *v /= nx);
        let y = a.mul_vec(&x);
        sigma = norm2(&y);
        x = a.tr_mul_vec(&y);
    }
    sigma
}

/// `c <- alpha op(a) b + beta c` on column-major slices with leading
/// dimensions; `op(a)` is `m x k`, transposed storage when `ta`.
#[allow(clippy::too_many_arguments)]
pub(crate) fn gemm_cm<T: Real>(
    ta: bool,
    (m, n, k): (usize, usize, usize),
    alpha: T,
    a: &[T],
    lda: usize,
    b: &[T],
    ldb: usize,
    beta: T,
    c: &mut [T],
    ldc: usize,
) {
    if m == 0 || n == 0 {
        return;
    }
    if k == 0 {
        for j in 0..n {
            c[j * ldc..j * ldc + m].iter_mut().for_each(|v| *v *= beta);
        }
        return;
    }
    let (rsa, csa) = if ta { (lda, 1) } else { (1, lda) };
    let a_need = if ta { (m - 1) * lda + k } else { (k - 1) * lda + m };
    assert!(a.len() >= a_need && b.len() >= (n - 1) * ldb + k && c.len() >= (n - 1) * ldc + m);
    assert!(ldb >= k && ldc >= m && lda >= if ta { k } else { m });
    // SAFETY: the asserts above keep every addressed element inside the
    // slices; `c` is a unique borrow so it cannot alias `a` or `b`.
    unsafe {
        T::gemm(
            m,
            k,
            n,
            alpha,
            a.as_ptr(),
            rsa as isize,
            csa as isize,
            b.as_ptr(),
            1,
            ldb as isize,
            beta,
            c.as_mut_ptr(),
            1,
            ldc as isize,
        );
    }
}
