//! Ordered polynomial bases of the bivariate space of total degree `n` and the
//! rectangular Vandermonde matrices built from them.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Domain, Point2, Rect};
use crate::linalg::Matrix;
use crate::mesh::Mesh;
use crate::quadrature;
use crate::scalar::Real;

/// `dim P_n` in two variables, `(n+1)(n+2)/2`.
pub const fn poly_dim(n: usize) -> usize {
    (n + 1) * (n + 2) / 2
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BasisFamily {
    #[serde(rename = "mon")]
    Monomial,
    #[serde(rename = "cheb")]
    ProductChebyshev,
    #[serde(rename = "logan-shepp")]
    LoganShepp,
}

impl BasisFamily {
    pub fn as_str(self) -> &'static str {
        match self {
            BasisFamily::Monomial => "mon",
            BasisFamily::ProductChebyshev => "cheb",
            BasisFamily::LoganShepp => "logan-shepp",
        }
    }
}

impl fmt::Display for BasisFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BasisFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mon" | "monomial" => Ok(BasisFamily::Monomial),
            "cheb" | "chebyshev" => Ok(BasisFamily::ProductChebyshev),
            "logan-shepp" | "los" => Ok(BasisFamily::LoganShepp),
            other => Err(Error::Parse(format!("unknown basis '{other}' (expected mon, cheb, logan-shepp)"))),
        }
    }
}

/// A basis of `P_n` with a fixed degree-lexicographic order, optionally
/// composed with the affine map of a box onto `[-1,1]^2`.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisSpec<T> {
    pub family: BasisFamily,
    pub degree: usize,
    pub pre_map: Option<Rect<T>>,
}

impl<T: Real> BasisSpec<T> {
    pub fn new(family: BasisFamily, degree: usize) -> Self {
        Self { family, degree, pre_map: None }
    }

    pub fn with_box(mut self, rect: Rect<T>) -> Self {
        self.pre_map = Some(rect);
        self
    }

    /// Basis composed with the bounding-box map of `dom`.
    pub fn for_domain(family: BasisFamily, degree: usize, dom: &Domain<T>) -> Self {
        Self::new(family, degree).with_box(dom.bbox())
    }

    pub fn dim(&self) -> usize {
        poly_dim(self.degree)
    }

    /// Same family and pre-map at another degree.
    pub fn at_degree(&self, degree: usize) -> Self {
        Self { degree, ..self.clone() }
    }

    /// `(alpha, beta)` exponent pairs in basis order: total degree ascending,
    /// and within a degree the power of `x` descending. For Logan-Shepp the
    /// pair is `(k, j)`: ridge degree and direction index.
    pub fn ordering(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.dim());
        for d in 0..=self.degree {
            match self.family {
                BasisFamily::LoganShepp => out.extend((0..=d).map(|j| (d, j))),
                _ => out.extend((0..=d).rev().map(|a| (a, d - a))),
            }
        }
        out
    }

    fn normalize(&self, p: Point2<T>) -> Point2<T> {
        match &self.pre_map {
            None => p,
            Some(r) => {
                let two = T::lit(2.0);
                Point2::new((two * p.x - (r.x_lo + r.x_hi)) / r.width(), (two * p.y - (r.y_lo + r.y_hi)) / r.height())
            }
        }
    }

    /// Writes all `dim()` basis values at `pt` into `out`.
    pub fn eval_into(&self, pt: Point2<T>, out: &mut [T]) {
        debug_assert_eq!(out.len(), self.dim());
        let n = self.degree;
        let p = self.normalize(pt);
        match self.family {
            BasisFamily::Monomial | BasisFamily::ProductChebyshev => {
                let mut xs = vec![T::one(); n + 1];
                let mut ys = vec![T::one(); n + 1];
                if self.family == BasisFamily::Monomial {
                    powers(p.x, &mut xs);
                    powers(p.y, &mut ys);
                } else {
                    chebyshev_t(p.x, &mut xs);
                    chebyshev_t(p.y, &mut ys);
                }
                let mut idx = 0;
                for d in 0..=n {
                    for a in (0..=d).rev() {
                        out[idx] = xs[a] * ys[d - a];
                        idx += 1;
                    }
                }
            }
            BasisFamily::LoganShepp => {
                let c = T::one() / T::PI().sqrt();
                let mut idx = 0;
                for k in 0..=n {
                    let kk = T::from_usize_lossy(k + 1);
                    for j in 0..=k {
                        let theta = T::PI() * T::from_usize_lossy(j) / kk;
                        let t = p.x * theta.cos() + p.y * theta.sin();
                        out[idx] = c * chebyshev_u(k, t);
                        idx += 1;
                    }
                }
            }
        }
    }

    pub fn eval(&self, pt: Point2<T>) -> Vec<T> {
        let mut out = vec![T::zero(); self.dim()];
        self.eval_into(pt, &mut out);
        out
    }

    /// `dim x M` matrix; column `j` holds the basis at `points[j]`.
    pub fn eval_cols(&self, points: &[Point2<T>]) -> Matrix<T> {
        let mut m = Matrix::zeros(self.dim(), points.len());
        for (j, &p) in points.iter().enumerate() {
            self.eval_into(p, m.col_mut(j));
        }
        m
    }

    /// `M x dim` matrix; row `i` holds the basis at `points[i]`.
    pub fn eval_rows(&self, points: &[Point2<T>]) -> Matrix<T> {
        self.eval_cols(points).transpose()
    }
}

fn powers<T: Real>(x: T, out: &mut [T]) {
    for k in 1..out.len() {
        out[k] = out[k - 1] * x;
    }
}

/// First-kind Chebyshev values `T_0..T_n` by the three-term recurrence.
fn chebyshev_t<T: Real>(x: T, out: &mut [T]) {
    if out.len() > 1 {
        out[1] = x;
    }
    let two_x = x + x;
    for k in 2..out.len() {
        out[k] = two_x * out[k - 1] - out[k - 2];
    }
}

/// Second-kind Chebyshev `U_k(t)` by recurrence.
fn chebyshev_u<T: Real>(k: usize, t: T) -> T {
    let two_t = t + t;
    let (mut prev, mut cur) = (T::one(), two_t);
    if k == 0 {
        return prev;
    }
    for _ in 1..k {
        let next = two_t * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Values on `points` of polynomials of total degree `<= n` that are
/// orthonormal there (unit root-mean-square, mutually orthogonal), `M x N`.
///
/// Arnoldi steps with pivoting: the candidates for degree `d` are `x` and `y`
/// times every degree `d - 1` element; after removing lower degrees (block
/// Gram-Schmidt, twice) the `d + 1` with the largest remainders are kept.
/// A fixed choice of multipliers (always `x`, `y` only for the last one)
/// loses the span on the simplex from degree 20 on; pivoting keeps it to
/// about 1e-12 there.
///
/// The recurrence is not kept. Replaying it elsewhere is as unstable as the
/// unpivoted fit, so callers needing values on several sets fit once on
/// their union, see `Basis::rows_on`.
pub fn discrete_orthonormal<T: Real>(degree: usize, points: &[Point2<T>]) -> Result<Matrix<T>> {
    let dim = poly_dim(degree);
    if points.len() < dim {
        return Err(Error::NotDetermining { points: points.len(), required: dim });
    }
    let bb = Rect::bounding(points.iter().copied());
    let half = T::lit(0.5);
    let (cx, cy) = (half * (bb.x_lo + bb.x_hi), half * (bb.y_lo + bb.y_hi));
    let scale = half * bb.width().max(bb.height());
    let xs: Vec<T> = points.iter().map(|p| (p.x - cx) / scale).collect();
    let ys: Vec<T> = points.iter().map(|p| (p.y - cy) / scale).collect();
    let m = points.len();
    let inv_m = T::from_usize_lossy(m).recip();
    let mut q = Matrix::zeros(m, dim);
    q.col_mut(0).iter_mut().for_each(|v| *v = T::one());
    for d in 1..=degree {
        let p = poly_dim(d - 1);
        let mut w = raise(&q, d, &xs, &ys);
        let c = w.ncols();
        let before: Vec<T> = (0..c).map(|j| crate::linalg::norm2(w.col(j))).collect();
        // block classical Gram-Schmidt against lower degrees, twice
        for _ in 0..2 {
            let mut h = Matrix::zeros(p, c);
            let qs = &q.as_slice()[..m * p];
            crate::linalg::gemm_cm(true, (p, c, m), inv_m, qs, m, w.as_slice(), m, T::zero(), h.as_mut_slice(), p);
            crate::linalg::gemm_cm(false, (m, c, p), -T::one(), qs, m, h.as_slice(), p, T::one(), w.as_mut_slice(), m);
        }
        // keep the d + 1 candidates with the largest new components
        let mut left: Vec<usize> = (0..c).collect();
        for j in 0..=d {
            let (pos, &k) = left
                .iter()
                .enumerate()
                .max_by(|a, b| {
                    let na = crate::linalg::norm2(w.col(*a.1));
                    let nb = crate::linalg::norm2(w.col(*b.1));
                    na.partial_cmp(&nb).unwrap_or(std::cmp::Ordering::Equal)
                })
                .expect("candidates left");
            left.remove(pos);
            let mut col = w.col(k).to_vec();
            for i in 0..j {
                let qi = q.col(p + i);
                let h = crate::linalg::dot(qi, &col) * inv_m;
                crate::linalg::axpy(-h, qi, &mut col);
            }
            let nrm = crate::linalg::norm2(&col);
            if !(nrm > T::lit(1e-12) * before[k]) {
                let residual = (nrm / before[k]).to_f64_lossy();
                return Err(Error::RankDeficient { step: p + j, of: dim, residual });
            }
            let inv = (nrm * inv_m.sqrt()).recip();
            for (o, &v) in q.col_mut(p + j).iter_mut().zip(&col) {
                *o = v * inv;
            }
            let qj = q.col(p + j).to_vec();
            for &r in &left {
                let h = crate::linalg::dot(&qj, w.col(r)) * inv_m;
                crate::linalg::axpy(-h, &qj, w.col_mut(r));
            }
        }
    }
    Ok(q)
}

/// Degree-`d` candidates: `x` and `y` times every degree `d - 1` element.
fn raise<T: Real>(q: &Matrix<T>, d: usize, xs: &[T], ys: &[T]) -> Matrix<T> {
    let first_parent = if d >= 2 { poly_dim(d - 2) } else { 0 };
    let mut w = Matrix::zeros(q.nrows(), 2 * d);
    for (j, (off, var)) in (0..d).flat_map(|o| [(o, xs), (o, ys)]).enumerate() {
        for ((o, &v), &t) in w.col_mut(j).iter_mut().zip(q.col(first_parent + off)).zip(var) {
            *o = v * t;
        }
    }
    w
}

/// A basis of `P_n`: one of the fixed families, or the discrete orthonormal
/// basis of whatever point set it is evaluated on. The second has no
/// pointwise meaning by itself, only quantities that do not depend on the
/// basis (cardinal functions, fits, weights) should be derived from it.
#[derive(Clone, Debug)]
pub enum Basis<T: Real> {
    Family(BasisSpec<T>),
    Discrete { degree: usize },
}

impl<T: Real> Basis<T> {
    pub fn degree(&self) -> usize {
        match self {
            Basis::Family(s) => s.degree,
            Basis::Discrete { degree } => *degree,
        }
    }

    pub fn dim(&self) -> usize {
        poly_dim(self.degree())
    }

    /// Values on each of `sets` (rows are points), all in one common basis.
    /// A discrete basis is fitted on the union of the sets.
    pub fn rows_on(&self, sets: &[&[Point2<T>]]) -> Result<Vec<Matrix<T>>> {
        match self {
            Basis::Family(s) => Ok(sets.iter().map(|pts| s.eval_rows(pts)).collect()),
            Basis::Discrete { degree } => {
                let all: Vec<Point2<T>> = sets.iter().flat_map(|pts| pts.iter().copied()).collect();
                let q = discrete_orthonormal(*degree, &all)?;
                let mut start = 0;
                Ok(sets
                    .iter()
                    .map(|pts| {
                        let rows: Vec<usize> = (start..start + pts.len()).collect();
                        start += pts.len();
                        q.select_rows(&rows)
                    })
                    .collect())
            }
        }
    }
}

/// Rectangular Vandermonde matrix `[p_i(a_j)]`: rows follow the basis order,
/// columns the mesh order.
#[derive(Clone, Debug)]
pub struct Vandermonde<T: Real> {
    pub entries: Matrix<T>,
    pub spec: BasisSpec<T>,
    pub points: Vec<Point2<T>>,
}

impl<T: Real> Vandermonde<T> {
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn len(&self) -> usize {
        self.entries.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.ncols() == 0
    }
}

/// Assembles `V = [p(a)]`; fails when the mesh has fewer than `dim P_n` points.
pub fn vandermonde<T: Real>(spec: &BasisSpec<T>, mesh: &Mesh<T>) -> Result<Vandermonde<T>> {
    let required = spec.dim();
    if mesh.len() < required {
        return Err(Error::NotDetermining { points: mesh.len(), required });
    }
    Ok(Vandermonde { entries: spec.eval_cols(mesh.points()), spec: spec.clone(), points: mesh.points().to_vec() })
}

/// `max |<p_i, p_j>_disk - delta_ij|` for a Logan-Shepp basis, integrals by a
/// polar Gauss rule exact to degree `2n + 2`.
pub fn orthonormality_defect<T: Real>(spec: &BasisSpec<T>) -> Result<T> {
    if spec.family != BasisFamily::LoganShepp {
        return Err(Error::UnsupportedFamily("orthonormality defect (needs logan-shepp)"));
    }
    let rule = quadrature::domain_rule(&Domain::UnitDisk, 2 * spec.degree + 2)?;
    let phi = spec.eval_cols(&rule.points);
    let weighted = Matrix::from_fn(phi.nrows(), phi.ncols(), |i, j| phi[(i, j)] * rule.weights[j]);
    let gram = Matrix::product(&weighted, false, &phi, true);
    let defect = gram.sub(&Matrix::identity(spec.dim())).max_abs();
    Ok(defect)
}
