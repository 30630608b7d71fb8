use super::qr::{apply_reflector, make_reflector};
use super::{norm2, Matrix};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Controls for [`greedy_columns`].
#[derive(Clone, Copy, Debug)]
pub struct PivotOptions<T> {
    /// Number of columns to select; clipped to `min(nrows, ncols)`.
    pub count: usize,
    /// A residual column norm at or below `rank_tol * max initial norm`
    /// counts as numerically zero.
    pub rank_tol: T,
    /// Norms within this relative distance of the largest one are ties; the
    /// tied column with the smallest priority wins.
    pub tie_tol: T,
}

impl<T: Real> PivotOptions<T> {
    pub fn new(count: usize) -> Self {
        Self { count, rank_tol: T::lit(1e-12), tie_tol: T::lit(1e-10) }
    }
}

/// Outcome of the greedy max-volume column selection.
#[derive(Clone, Debug)]
pub struct ColumnSelection<T> {
    /// Selected column indices in pick order.
    pub indices: Vec<usize>,
    /// Residual norm of each column at the moment it was picked (`|r_kk|`).
    pub pivots: Vec<T>,
    /// Largest column norm of the input.
    pub initial_max_norm: T,
}

impl<T: Real> ColumnSelection<T> {
    /// `ln |det|` of the selected square submatrix.
    pub fn log_abs_det(&self) -> T {
        self.pivots.iter().map(|p| p.ln()).sum()
    }

    /// `|r_11| / |r_kk|` for the last pick.
    pub fn pivot_ratio(&self) -> T {
        match (self.pivots.first(), self.pivots.last()) {
            (Some(&a), Some(&b)) => a / b,
            _ => T::one(),
        }
    }
}

/// Greedy selection of `opts.count` columns: repeatedly take the remaining
/// column with the largest residual norm and remove its direction from every
/// other column. This is Householder QR with column pivoting stopped after
/// `count` steps. Ties go to the lower column index.
pub fn greedy_columns<T: Real>(a: Matrix<T>, opts: PivotOptions<T>) -> Result<ColumnSelection<T>> {
    let priority: Vec<usize> = (0..a.ncols()).collect();
    greedy_columns_by(a, opts, &priority)
}

/// As [`greedy_columns`], with ties going to the smallest `priority[j]`.
/// The outcome does not depend on the column order when the priorities
/// are distinct.
pub fn greedy_columns_by<T: Real>(
    mut a: Matrix<T>,
    opts: PivotOptions<T>,
    priority: &[usize],
) -> Result<ColumnSelection<T>> {
    let (m, ncols) = a.shape();
    if priority.len() != ncols {
        return Err(Error::Dimension(format!("{} priorities for {ncols} columns", priority.len())));
    }
    let count = opts.count.min(m).min(ncols);
    let mut vn1: Vec<T> = (0..ncols).map(|j| norm2(a.col(j))).collect();
    let mut vn2 = vn1.clone();
    let initial_max_norm = vn1.iter().fold(T::zero(), |acc, &v| acc.max(v));
    let tol_downdate = T::epsilon().sqrt();
    let one_plus_tie = T::one() + opts.tie_tol;

    let mut taken = vec![false; ncols];
    let mut indices = Vec::with_capacity(count);
    let mut pivots = Vec::with_capacity(count);

    for k in 0..count {
        let top = (0..ncols)
            .filter(|&j| !taken[j])
            .map(|j| vn1[j])
            .fold(None, |acc: Option<T>, v| Some(acc.map_or(v, |a| a.max(v))));
        let Some(top) = top else { break };
        let Some(p) = (0..ncols).filter(|&j| !taken[j] && vn1[j] * one_plus_tie >= top).min_by_key(|&j| priority[j])
        else {
            // only non-finite norms left
            return Err(Error::RankDeficient { step: k, of: count, residual: f64::NAN });
        };
        let residual = norm2(&a.col(p)[k..]);
        if !(residual > opts.rank_tol * initial_max_norm) {
            return Err(Error::RankDeficient {
                step: k,
                of: count,
                residual: (residual / initial_max_norm).to_f64_lossy(),
            });
        }
        let tau = make_reflector(&mut a.col_mut(p)[k..]);
        pivots.push(a[(k, p)].abs());
        taken[p] = true;
        indices.push(p);

        for j in 0..ncols {
            if taken[j] {
                continue;
            }
            let (v, col) = a.two_cols_mut(p, j);
            apply_reflector(&v[k..], tau, &mut col[k..]);
            if vn1[j] != T::zero() {
                let ratio = col[k].abs() / vn1[j];
                let temp = (T::one() - ratio * ratio).max(T::zero());
                let scaled = vn1[j] / vn2[j];
                if temp * scaled * scaled <= tol_downdate {
                    vn1[j] = norm2(&col[k + 1..]);
                    vn2[j] = vn1[j];
                } else {
                    vn1[j] *= temp.sqrt();
                }
            }
        }
    }

    Ok(ColumnSelection { indices, pivots, initial_max_norm })
}
