use super::{axpy, dot, gemm_cm, norm2, triangular, Matrix};
use crate::scalar::Real;

/// Householder QR factorization `A = Q R` of an `m x n` matrix.
///
/// Reflectors are stored below the diagonal LAPACK style (unit leading
/// entry implicit), `R` on and above it.
#[derive(Clone, Debug)]
pub struct HouseholderQr<T: Real> {
    qr: Matrix<T>,
    tau: Vec<T>,
}

/// Turns `x` into a Householder vector in place. Returns `tau`; `x[0]`
/// receives the resulting diagonal entry.
pub(crate) fn make_reflector<T: Real>(x: &mut [T]) -> T {
    let alpha = x[0];
    let xnorm = norm2(&x[1..]);
    if xnorm == T::zero() {
        return T::zero();
    }
    let mut beta = alpha.hypot(xnorm);
    if alpha >= T::zero() {
        beta = -beta;
    }
    let tau = (beta - alpha) / beta;
    let scale = (alpha - beta).recip();
    for v in &mut x[1..] {
        *v *= scale;
    }
    x[0] = beta;
    tau
}

/// Applies `I - tau v v^T` (with `v[0] = 1` implicit) to `c`.
#[inline]
pub(crate) fn apply_reflector<T: Real>(v: &[T], tau: T, c: &mut [T]) {
    if tau == T::zero() {
        return;
    }
    let s = tau * (c[0] + dot(&v[1..], &c[1..]));
    c[0] -= s;
    axpy(-s, &v[1..], &mut c[1..]);
}

const BLOCK: usize = 32;

/// `A[j0.., j1..] <- Q^T A[j0.., j1..]` for the reflectors stored in columns
/// `j0..j1` of `a` below the diagonal.
fn apply_block<T: Real>(a: &mut Matrix<T>, j0: usize, j1: usize, tau: &[T]) {
    let (m, n) = a.shape();
    let (mm, nb, nc) = (m - j0, j1 - j0, n - j1);
    // explicit V with unit diagonal
    let mut v = Matrix::zeros(mm, nb);
    for c in 0..nb {
        let src = &a.col(j0 + c)[j0..];
        let dst = v.col_mut(c);
        dst[c] = T::one();
        dst[c + 1..].copy_from_slice(&src[c + 1..]);
    }
    // T upper triangular: T[..i, i] = -tau_i T[..i, ..i] V[:, ..i]^T v_i
    let mut t = Matrix::zeros(nb, nb);
    for i in 0..nb {
        t[(i, i)] = tau[i];
        if i == 0 || tau[i] == T::zero() {
            continue;
        }
        let vi = v.col(i);
        let w: Vec<T> = (0..i).map(|c| dot(&v.col(c)[i..], &vi[i..])).collect();
        for r in 0..i {
            let mut acc = T::zero();
            for c in r..i {
                acc += t[(r, c)] * w[c];
            }
            t[(r, i)] = -tau[i] * acc;
        }
    }
    let off = j1 * m + j0;
    let c_len = a.as_slice().len() - off;
    // W = V^T C, then W <- T^T W, then C <- C - V W
    let mut w = Matrix::zeros(nb, nc);
    gemm_cm(true, (nb, nc, mm), T::one(), v.as_slice(), mm, &a.as_slice()[off..], m, T::zero(), w.as_mut_slice(), nb);
    let mut w2 = Matrix::zeros(nb, nc);
    gemm_cm(true, (nb, nc, nb), T::one(), t.as_slice(), nb, w.as_slice(), nb, T::zero(), w2.as_mut_slice(), nb);
    debug_assert!(c_len >= (nc - 1) * m + mm);
    gemm_cm(
        false,
        (mm, nc, nb),
        -T::one(),
        v.as_slice(),
        mm,
        w2.as_slice(),
        nb,
        T::one(),
        &mut a.as_mut_slice()[off..],
        m,
    );
}

impl<T: Real> HouseholderQr<T> {
    /// Blocked in panels of `BLOCK` columns; the trailing columns are
    /// updated with the compact WY form `I - V T V^T` through gemm.
    pub fn new(mut a: Matrix<T>) -> Self {
        let (m, n) = a.shape();
        let k = m.min(n);
        let mut tau = Vec::with_capacity(k);
        let mut j0 = 0;
        while j0 < k {
            let j1 = (j0 + BLOCK).min(k);
            // unblocked panel
            for j in j0..j1 {
                let t = make_reflector(&mut a.col_mut(j)[j..]);
                tau.push(t);
                if t != T::zero() {
                    for c in j + 1..j1 {
                        let (v, col) = a.two_cols_mut(j, c);
                        apply_reflector(&v[j..], t, &mut col[j..]);
                    }
                }
            }
            if j1 < n {
                apply_block(&mut a, j0, j1, &tau[j0..j1]);
            }
            j0 = j1;
        }
        Self { qr: a, tau }
    }

    pub fn nrows(&self) -> usize {
        self.qr.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.qr.ncols()
    }

    /// The `min(m, n) x n` upper-triangular factor.
    pub fn r(&self) -> Matrix<T> {
        let k = self.tau.len();
        Matrix::from_fn(k, self.qr.ncols(), |i, j| if i <= j { self.qr[(i, j)] } else { T::zero() })
    }

    /// Packed storage; the upper triangle is `R`.
    pub fn packed(&self) -> &Matrix<T> {
        &self.qr
    }

    pub fn r_diag(&self) -> Vec<T> {
        (0..self.tau.len()).map(|i| self.qr[(i, i)]).collect()
    }

    /// `b <- Q^T b`.
    pub fn apply_qt(&self, b: &mut [T]) {
        assert_eq!(b.len(), self.qr.nrows());
        for (j, &t) in self.tau.iter().enumerate() {
            apply_reflector(&self.qr.col(j)[j..], t, &mut b[j..]);
        }
    }

    /// `b <- Q b`.
    pub fn apply_q(&self, b: &mut [T]) {
        assert_eq!(b.len(), self.qr.nrows());
        for (j, &t) in self.tau.iter().enumerate().rev() {
            apply_reflector(&self.qr.col(j)[j..], t, &mut b[j..]);
        }
    }

    /// Minimizes `||A x - b||_2`; requires `m >= n` and nonzero `R` diagonal.
    pub fn solve_least_squares(&self, b: &[T]) -> Result<Vec<T>, usize> {
        let n = self.qr.ncols();
        assert!(self.qr.nrows() >= n, "least squares needs a tall matrix");
        let mut y = b.to_vec();
        self.apply_qt(&mut y);
        y.truncate(n);
        triangular::solve_upper(&self.qr, &mut y)?;
        Ok(y)
    }

    /// Solves the square system `A x = b`.
    pub fn solve(&self, b: &[T]) -> Result<Vec<T>, usize> {
        assert_eq!(self.qr.nrows(), self.qr.ncols());
        self.solve_least_squares(b)
    }

    /// Solves the square system `A^T x = b`.
    pub fn solve_transpose(&self, b: &[T]) -> Result<Vec<T>, usize> {
        assert_eq!(self.qr.nrows(), self.qr.ncols());
        let mut y = b.to_vec();
        triangular::solve_upper_transpose(&self.qr, &mut y)?;
        self.apply_q(&mut y);
        Ok(y)
    }

    /// Explicit inverse of a square factorized matrix.
    pub fn inverse(&self) -> Result<Matrix<T>, usize> {
        let n = self.qr.ncols();
        assert_eq!(self.qr.nrows(), n);
        let mut inv = Matrix::zeros(n, n);
        for j in 0..n {
            let mut e = vec![T::zero(); n];
            e[j] = T::one();
            let x = self.solve(&e)?;
            inv.col_mut(j).copy_from_slice(&x);
        }
        Ok(inv)
    }

    /// `ln |det A|` for a square matrix; `-inf` when singular.
    pub fn log_abs_det(&self) -> T {
        self.r_diag().iter().map(|d| d.abs().ln()).sum()
    }

    /// Ratio of the largest to the smallest `|r_ii|`, a cheap lower bound
    /// on the 2-norm condition number.
    pub fn diag_condition(&self) -> T {
        let d = self.r_diag();
        let max = d.iter().fold(T::zero(), |m, v| m.max(v.abs()));
        let min = d.iter().fold(T::infinity(), |m, v| m.min(v.abs()));
        max / min
    }

    /// Explicit thin `Q` (`m x min(m, n)`).
    pub fn thin_q(&self) -> Matrix<T> {
        let m = self.qr.nrows();
        let k = self.tau.len();
        let mut q = Matrix::zeros(m, k);
        for j in 0..k {
            let col = q.col_mut(j);
            col[j] = T::one();
            self.apply_q(col);
        }
        q
    }
}
