use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Dense column-major matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    nrows: usize,
    ncols: usize,
    data: Vec<T>,
}

impl<T: Real> Matrix<T> {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self { nrows, ncols, data: vec![T::zero(); nrows * ncols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_fn(nrows: usize, ncols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(nrows * ncols);
        for j in 0..ncols {
            for i in 0..nrows {
                data.push(f(i, j));
            }
        }
        Self { nrows, ncols, data }
    }

    pub fn from_col_major(nrows: usize, ncols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != nrows * ncols {
            return Err(Error::Dimension(format!("{} values for a {nrows}x{ncols} matrix", data.len())));
        }
        Ok(Self { nrows, ncols, data })
    }

    /// Builds a matrix from row slices; all rows must share a length.
    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(Self::from_fn(nrows, ncols, |i, j| rows[i][j]))
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.nrows
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.ncols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.nrows, self.ncols)
    }

    #[inline]
    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    #[inline]
    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.data
    }

    #[inline]
    pub fn col(&self, j: usize) -> &[T] {
        &self.data[j * self.nrows..(j + 1) * self.nrows]
    }

    #[inline]
    pub fn col_mut(&mut self, j: usize) -> &mut [T] {
        &mut self.data[j * self.nrows..(j + 1) * self.nrows]
    }

    /// Two distinct columns, mutably; `a != b`.
    pub(crate) fn two_cols_mut(&mut self, a: usize, b: usize) -> (&mut [T], &mut [T]) {
        assert_ne!(a, b);
        let n = self.nrows;
        if a < b {
            let (lo, hi) = self.data.split_at_mut(b * n);
            (&mut lo[a * n..(a + 1) * n], &mut hi[..n])
        } else {
            let (lo, hi) = self.data.split_at_mut(a * n);
            (&mut hi[..n], &mut lo[b * n..(b + 1) * n])
        }
    }

    pub fn row(&self, i: usize) -> Vec<T> {
        (0..self.ncols).map(|j| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.ncols, self.nrows);
        // blocked to keep both access patterns cache friendly
        const B: usize = 32;
        for jb in (0..self.ncols).step_by(B) {
            for ib in (0..self.nrows).step_by(B) {
                for j in jb..(jb + B).min(self.ncols) {
                    for i in ib..(ib + B).min(self.nrows) {
                        t.data[i * self.ncols + j] = self.data[j * self.nrows + i];
                    }
                }
            }
        }
        t
    }

    /// `self * rhs`.
    pub fn matmul(&self, rhs: &Self) -> Self {
        Self::product(self, false, rhs, false)
    }

    /// `op(a) * op(b)` where `op` optionally transposes.
    pub fn product(a: &Self, ta: bool, b: &Self, tb: bool) -> Self {
        let (m, k) = if ta { (a.ncols, a.nrows) } else { (a.nrows, a.ncols) };
        let (k2, n) = if tb { (b.ncols, b.nrows) } else { (b.nrows, b.ncols) };
        assert_eq!(k, k2, "inner dimensions differ");
        let mut c = Self::zeros(m, n);
        if m == 0 || n == 0 || k == 0 {
            return c;
        }
        let (rsa, csa) = if ta { (a.nrows as isize, 1) } else { (1, a.nrows as isize) };
        let (rsb, csb) = if tb { (b.nrows as isize, 1) } else { (1, b.nrows as isize) };
        // SAFETY: shapes and strides are derived from owned buffers above and
        // `c` is a fresh allocation.
        unsafe {
            T::gemm(
                m,
                k,
                n,
                T::one(),
                a.data.as_ptr(),
                rsa,
                csa,
                b.data.as_ptr(),
                rsb,
                csb,
                T::zero(),
                c.data.as_mut_ptr(),
                1,
                m as isize,
            );
        }
        c
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.ncols);
        let mut y = vec![T::zero(); self.nrows];
        for (j, &xj) in x.iter().enumerate() {
            if xj != T::zero() {
                super::axpy(xj, self.col(j), &mut y);
            }
        }
        y
    }

    /// `self^T x`.
    pub fn tr_mul_vec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.nrows);
        (0..self.ncols).map(|j| super::dot(self.col(j), x)).collect()
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        Self::from_fn(rows.len(), self.ncols, |i, j| self[(rows[i], j)])
    }

    pub fn select_cols(&self, cols: &[usize]) -> Self {
        let mut data = Vec::with_capacity(self.nrows * cols.len());
        for &j in cols {
            data.extend_from_slice(self.col(j));
        }
        Self { nrows: self.nrows, ncols: cols.len(), data }
    }

    pub fn frobenius_norm(&self) -> T {
        super::norm2(&self.data)
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.shape(), rhs.shape());
        let data = self.data.iter().zip(&rhs.data).map(|(&a, &b)| a - b).collect();
        Self { nrows: self.nrows, ncols: self.ncols, data }
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn map<U: Real>(&self, f: impl Fn(T) -> U) -> Matrix<U> {
        Matrix { nrows: self.nrows, ncols: self.ncols, data: self.data.iter().map(|&v| f(v)).collect() }
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.nrows && j < self.ncols);
        &self.data[j * self.nrows + i]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.nrows && j < self.ncols);
        &mut self.data[j * self.nrows + i]
    }
}

impl<T: Real> std::fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.nrows, self.ncols)?;
        for i in 0..self.nrows.min(8) {
            let row: Vec<String> = (0..self.ncols.min(8)).map(|j| format!("{:.4e}", self[(i, j)])).collect();
            writeln!(f, "  {}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_matches_naive_for_all_transpositions() {
        let a = Matrix::<f64>::from_fn(3, 4, |i, j| (i * 4 + j) as f64 - 2.5);
        let b = Matrix::<f64>::from_fn(4, 2, |i, j| (i as f64 + 1.0) * (j as f64 - 0.5));
        let c = a.matmul(&b);
        for i in 0..3 {
            for j in 0..2 {
                let e: f64 = (0..4).map(|k| a[(i, k)] * b[(k, j)]).sum();
                assert!((c[(i, j)] - e).abs() < 1e-12);
            }
        }
        let at = a.transpose();
        let bt = b.transpose();
        assert_eq!(Matrix::product(&at, true, &b, false), c);
        assert_eq!(Matrix::product(&a, false, &bt, true), c);
        assert_eq!(Matrix::product(&at, true, &bt, true), c);
    }

    #[test]
    fn transpose_roundtrip_large() {
        let a = Matrix::<f32>::from_fn(70, 45, |i, j| (i * 100 + j) as f32);
        assert_eq!(a.transpose().transpose(), a);
        assert_eq!(a.transpose()[(44, 69)], a[(69, 44)]);
    }

    #[test]
    fn from_col_major_checks_length() {
        assert!(Matrix::<f64>::from_col_major(2, 2, vec![1.0; 3]).is_err());
    }
}
