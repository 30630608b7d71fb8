//! Discrete least squares on meshes, interpolation at extracted points,
//! Lebesgue constants and uniform errors.

use std::fmt;

use serde::{Deserialize, Serialize};

#[cfg(test)]
use crate::basis::BasisFamily;
use crate::basis::{poly_dim, Basis, BasisSpec};
use crate::error::{Error, Result};
use crate::fekete::FeketeResult;
use crate::geometry::Point2;
use crate::linalg::{HouseholderQr, Matrix};
use crate::mesh::Mesh;
use crate::scalar::Real;

/// Control points are evaluated in blocks of this many rows.
const CHUNK: usize = 2048;

/// Required ratio between control and extraction mesh sizes.
pub const CONTROL_RATIO: usize = 4;

/// The three benchmark functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TestFunction {
    /// `cos(x + y)`
    Entire,
    /// `1 / (1 + 16 (x^2 + y^2))`
    Runge,
    /// `(x^2 + y^2)^(3/2)`
    Cusp,
}

impl TestFunction {
    pub const ALL: [TestFunction; 3] = [TestFunction::Entire, TestFunction::Runge, TestFunction::Cusp];

    pub fn id(self) -> u8 {
        match self {
            TestFunction::Entire => 1,
            TestFunction::Runge => 2,
            TestFunction::Cusp => 3,
        }
    }

    pub fn from_id(id: u8) -> Result<Self> {
        match id {
            1 => Ok(TestFunction::Entire),
            2 => Ok(TestFunction::Runge),
            3 => Ok(TestFunction::Cusp),
            _ => Err(Error::Parse(format!("test function id must be 1, 2 or 3, got {id}"))),
        }
    }

    pub fn eval<T: Real>(self, p: Point2<T>) -> T {
        let r2 = p.x * p.x + p.y * p.y;
        match self {
            TestFunction::Entire => (p.x + p.y).cos(),
            TestFunction::Runge => T::one() / (T::one() + T::lit(16.0) * r2),
            TestFunction::Cusp => r2 * r2.sqrt(),
        }
    }

    /// `f(2x - 1, 2y - 1)`, the variant used on polygons in the unit square.
    pub fn eval_unit_square<T: Real>(self, p: Point2<T>) -> T {
        let two = T::lit(2.0);
        self.eval(Point2::new(two * p.x - T::one(), two * p.y - T::one()))
    }
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "test {}", self.id())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ApproxKind {
    LeastSquares { mesh_points: usize },
    Interpolant { nodes: usize },
}

/// A polynomial fitted to samples. In a fixed family it carries global
/// coefficients. In a mesh-fitted basis only the samples are kept and every
/// evaluation refits on samples plus targets.
#[derive(Clone, Debug)]
pub struct PolyApprox<T: Real> {
    pub basis: Basis<T>,
    pub kind: ApproxKind,
    coefficients: Vec<T>,
    samples: Vec<Point2<T>>,
    values: Vec<T>,
}

impl<T: Real> PolyApprox<T> {
    pub fn degree(&self) -> usize {
        self.basis.degree()
    }

    /// Coefficients in `basis`, when it is a fixed family.
    pub fn coefficients(&self) -> Option<&[T]> {
        match self.basis {
            Basis::Family(_) => Some(&self.coefficients),
            Basis::Discrete { .. } => None,
        }
    }

    pub fn eval(&self, p: Point2<T>) -> Result<T> {
        Ok(self.eval_many(&[p])?[0])
    }

    pub fn eval_many(&self, points: &[Point2<T>]) -> Result<Vec<T>> {
        match &self.basis {
            Basis::Family(spec) => {
                let mut out = Vec::with_capacity(points.len());
                for chunk in points.chunks(CHUNK) {
                    out.extend(spec.eval_rows(chunk).mul_vec(&self.coefficients));
                }
                Ok(out)
            }
            Basis::Discrete { .. } => {
                let rows = self.basis.rows_on(&[&self.samples, points])?;
                let c = fit_rows(&rows[0], &self.values)?;
                Ok(rows[1].mul_vec(&c))
            }
        }
    }
}

/// Least-squares (or square) solve of `a c = values`.
fn fit_rows<T: Real>(a: &Matrix<T>, values: &[T]) -> Result<Vec<T>> {
    let n = a.ncols();
    let c = HouseholderQr::new(a.clone()).solve_least_squares(values).map_err(|row| Error::RankDeficient {
        step: row,
        of: n,
        residual: 0.0,
    })?;
    if c.iter().any(|x| !x.is_finite()) {
        return Err(Error::RankDeficient { step: 0, of: n, residual: f64::NAN });
    }
    Ok(c)
}

/// Least-squares fit of the samples `values` (one per mesh point) by QR of
/// the transposed Vandermonde.
pub fn least_squares_values<T: Real>(values: &[T], mesh: &Mesh<T>, spec: &BasisSpec<T>) -> Result<PolyApprox<T>> {
    least_squares_in(values, mesh, Basis::Family(spec.clone()))
}

/// As `least_squares_values` in any basis.
pub fn least_squares_in<T: Real>(values: &[T], mesh: &Mesh<T>, basis: Basis<T>) -> Result<PolyApprox<T>> {
    if values.len() != mesh.len() {
        return Err(Error::Dimension(format!("{} values for {} mesh points", values.len(), mesh.len())));
    }
    let n = basis.dim();
    if mesh.len() < n {
        return Err(Error::NotDetermining { points: mesh.len(), required: n });
    }
    let coefficients = match &basis {
        Basis::Family(spec) => fit_rows(&spec.eval_rows(mesh.points()), values)?,
        Basis::Discrete { .. } => Vec::new(),
    };
    Ok(PolyApprox {
        basis,
        kind: ApproxKind::LeastSquares { mesh_points: mesh.len() },
        coefficients,
        samples: mesh.points().to_vec(),
        values: values.to_vec(),
    })
}

pub fn least_squares_fit<T: Real>(
    f: impl Fn(Point2<T>) -> T,
    mesh: &Mesh<T>,
    spec: &BasisSpec<T>,
) -> Result<PolyApprox<T>> {
    let values: Vec<T> = mesh.points().iter().map(|&p| f(p)).collect();
    least_squares_values(&values, mesh, spec)
}

/// Interpolant at the extracted points: solves `V_s[ind,:] c = f` in the
/// refined basis and maps `c` back through the transition matrix.
pub fn interpolate<T: Real>(f: impl Fn(Point2<T>) -> T, result: &FeketeResult<T>) -> Result<PolyApprox<T>> {
    let rhs: Vec<T> = result.points.iter().map(|&p| f(p)).collect();
    let qr = HouseholderQr::new(result.selected.clone());
    let c = qr.solve(&rhs).map_err(|_| Error::Singular("interpolation nodes"))?;
    let coefficients = result.transition.mul_vec(&c);
    if coefficients.iter().any(|x| !x.is_finite()) {
        return Err(Error::Singular("interpolation nodes"));
    }
    Ok(PolyApprox {
        basis: result.basis.clone(),
        kind: ApproxKind::Interpolant { nodes: result.len() },
        coefficients,
        samples: result.points.clone(),
        values: rhs,
    })
}

/// `max_z sum_i |l_i(z)|` over `control`, with the cardinal functions `l_i`
/// of the extracted points.
pub fn lebesgue_constant<T: Real>(result: &FeketeResult<T>, control: &Mesh<T>) -> Result<T> {
    let required = CONTROL_RATIO * result.mesh_len;
    if control.len() < required {
        return Err(Error::ControlTooCoarse { control: control.len(), required });
    }
    lebesgue_on_points(&result.points, control.points())
}

/// Lebesgue constant of a unisolvent node set, maximized over `control`.
/// Cardinal functions do not depend on the basis, so they are computed in
/// the orthonormal basis of nodes and control together.
pub fn lebesgue_on_points<T: Real>(nodes: &[Point2<T>], control: &[Point2<T>]) -> Result<T> {
    let n = nodes.len();
    let degree = degree_for_dim(n)?;
    let rows = Basis::Discrete { degree }.rows_on(&[nodes, control])?;
    let g = node_inverse(&rows[0])?;
    Ok(max_abs_row_sum(&rows[1], &g))
}

fn degree_for_dim(n: usize) -> Result<usize> {
    (0..)
        .take_while(|&d| poly_dim(d) <= n)
        .find(|&d| poly_dim(d) == n)
        .ok_or_else(|| Error::Dimension(format!("{n} nodes is not a polynomial space dimension")))
}

fn node_inverse<T: Real>(b: &Matrix<T>) -> Result<Matrix<T>> {
    let g = HouseholderQr::new(b.clone()).inverse().map_err(|_| Error::Singular("interpolation nodes"))?;
    if !g.is_finite() {
        return Err(Error::Singular("interpolation nodes"));
    }
    Ok(g)
}

/// `max_i sum_j |(q g)_ij|`, blockwise over the rows of `q`.
fn max_abs_row_sum<T: Real>(q: &Matrix<T>, g: &Matrix<T>) -> T {
    let mut best = T::zero();
    let m = q.nrows();
    for start in (0..m).step_by(CHUNK) {
        let rows: Vec<usize> = (start..m.min(start + CHUNK)).collect();
        let l = q.select_rows(&rows).matmul(g);
        let mut sums = vec![T::zero(); rows.len()];
        for j in 0..l.ncols() {
            for (s, v) in sums.iter_mut().zip(l.col(j)) {
                *s += v.abs();
            }
        }
        best = sums.into_iter().fold(best, T::max);
    }
    best
}

/// `max |f - p|` over the control points.
pub fn uniform_error<T: Real>(approx: &PolyApprox<T>, f: impl Fn(Point2<T>) -> T, control: &Mesh<T>) -> Result<T> {
    let vals = approx.eval_many(control.points())?;
    Ok(max_deviation(control.points(), &vals, f))
}

fn max_deviation<T: Real>(points: &[Point2<T>], vals: &[T], f: impl Fn(Point2<T>) -> T) -> T {
    points.iter().zip(vals).fold(T::zero(), |acc, (&p, &v)| acc.max((f(p) - v).abs()))
}

/// Cardinal function values at `points`, one row per point.
pub fn cardinal_values<T: Real>(result: &FeketeResult<T>, points: &[Point2<T>]) -> Result<Matrix<T>> {
    let rows = Basis::Discrete { degree: result.spec.degree }.rows_on(&[&result.points, points])?;
    Ok(rows[1].matmul(&node_inverse(&rows[0])?))
}

/// Lebesgue constants and uniform errors against a control mesh for any node
/// set drawn from one extraction mesh. One orthonormal basis is fitted on
/// extraction mesh and control mesh together and shared by every query, so
/// several extractions from the same mesh (different bases, different `s`)
/// cost one fit.
pub struct Evaluator<'a, T: Real> {
    mesh: &'a Mesh<T>,
    control: &'a Mesh<T>,
    mesh_rows: Matrix<T>,
    control_rows: Matrix<T>,
}

impl<'a, T: Real> Evaluator<'a, T> {
    pub fn new(mesh: &'a Mesh<T>, control: &'a Mesh<T>, degree: usize) -> Result<Self> {
        let required = CONTROL_RATIO * mesh.len();
        if control.len() < required {
            return Err(Error::ControlTooCoarse { control: control.len(), required });
        }
        let mut rows = Basis::Discrete { degree }.rows_on(&[mesh.points(), control.points()])?;
        let control_rows = rows.pop().expect("two sets");
        let mesh_rows = rows.pop().expect("two sets");
        Ok(Self { mesh, control, mesh_rows, control_rows })
    }

    pub fn degree(&self) -> usize {
        degree_for_dim(self.mesh_rows.ncols()).expect("built from a degree")
    }

    fn node_inverse(&self, indices: &[usize]) -> Result<Matrix<T>> {
        if indices.len() != self.mesh_rows.ncols() || indices.iter().any(|&i| i >= self.mesh.len()) {
            return Err(Error::Dimension(format!(
                "{} node indices for dimension {} on a mesh of {}",
                indices.len(),
                self.mesh_rows.ncols(),
                self.mesh.len()
            )));
        }
        node_inverse(&self.mesh_rows.select_rows(indices))
    }

    /// Lebesgue constant of the mesh points `indices`.
    pub fn lebesgue(&self, indices: &[usize]) -> Result<T> {
        Ok(max_abs_row_sum(&self.control_rows, &self.node_inverse(indices)?))
    }

    /// Uniform error of the interpolant at the mesh points `indices`.
    pub fn interpolation_error(&self, indices: &[usize], f: impl Fn(Point2<T>) -> T) -> Result<T> {
        let g = self.node_inverse(indices)?;
        let pts = self.mesh.points();
        let rhs: Vec<T> = indices.iter().map(|&i| f(pts[i])).collect();
        let c = g.mul_vec(&rhs);
        Ok(max_deviation(self.control.points(), &self.control_rows.mul_vec(&c), f))
    }

    /// Uniform error of the least-squares fit on the whole extraction mesh.
    pub fn least_squares_error(&self, f: impl Fn(Point2<T>) -> T) -> Result<T> {
        let values: Vec<T> = self.mesh.points().iter().map(|&p| f(p)).collect();
        let c = fit_rows(&self.mesh_rows, &values)?;
        Ok(max_deviation(self.control.points(), &self.control_rows.mul_vec(&c), f))
    }
}
