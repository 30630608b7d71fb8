//! Approximate Fekete Points: greedy max-volume selection of mesh points from
//! a (refined) rectangular Vandermonde matrix.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::basis::{discrete_orthonormal, vandermonde, Basis, BasisSpec, Vandermonde};
use crate::error::{Error, Result};
use crate::geometry::{Domain, Point2};
use crate::linalg::{
    greedy_columns, greedy_columns_by, spectral_norm_estimate, upper_inverse, HouseholderQr, Matrix, PivotOptions,
};
use crate::mesh::Mesh;
use crate::quadrature;
use crate::scalar::Real;

/// Default number of QR refinement rounds.
pub const DEFAULT_REFINE: usize = 2;

/// How the refined basis is formed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RefineMethod {
    /// Start from the family's Vandermonde and apply `s` rounds of
    /// `V <- V R^-1`.
    #[default]
    Qr,
    /// Start from a basis orthonormal on the mesh (Arnoldi), then apply the
    /// same `s` rounds. For `s >= 1` the selection coincides with `Qr`
    /// in exact arithmetic, but no ill-conditioned Vandermonde is ever
    /// formed. With `s = 0` it falls back to `Qr`.
    Arnoldi,
}

/// Conditioning of the working matrix `V_k` before round `k` (and of the
/// final matrix as the last entry).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RoundInfo {
    pub round: usize,
    /// 2-norm condition number of `R_k` (power-iteration estimates of
    /// `||R||` and `||R^-1||`). Infinite when `R` is singular.
    pub condition: f64,
    /// `max |r_ii| / min |r_ii|`, a lower bound.
    pub diag_ratio: f64,
}

/// Outcome of `refine_basis`.
#[derive(Clone, Debug)]
pub struct RefinedBasis<T: Real> {
    /// `V_s`, `M x N`: row `i` is the refined basis at mesh point `i`.
    pub matrix: Matrix<T>,
    /// `T_s`, `N x N`, with `V_s = V^T T_s`.
    pub transition: Matrix<T>,
    pub history: Vec<RoundInfo>,
}

/// Numerical rank and conditioning collected during an extraction.
#[derive(Clone, Debug, Serialize)]
pub struct RankReport {
    pub rank: usize,
    pub rounds: Vec<RoundInfo>,
    /// `|r_11| / |r_NN|` of the greedy factorization.
    pub pivot_ratio: f64,
}

#[derive(Clone, Debug)]
pub struct FeketeResult<T: Real> {
    /// Selected mesh indices in pick order.
    pub indices: Vec<usize>,
    pub points: Vec<Point2<T>>,
    pub transition: Matrix<T>,
    /// `ln |det|` of the selected square Vandermonde in the refined basis.
    pub log_vdm_abs: T,
    pub weights: Option<Vec<T>>,
    pub rank_report: RankReport,
    /// Requested family.
    pub spec: BasisSpec<T>,
    /// Basis the transition matrix acts on: `spec` itself, or the discrete
    /// orthonormal basis of the mesh for `RefineMethod::Arnoldi`.
    pub basis: Basis<T>,
    pub refine: usize,
    pub method: RefineMethod,
    pub mesh_len: usize,
    /// `V_s[ind, :]`, rows follow `indices`.
    pub selected: Matrix<T>,
}

impl<T: Real> FeketeResult<T> {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// `|vdm|`, which may underflow to zero for large `N`; see `log_vdm_abs`.
    pub fn vdm_abs(&self) -> T {
        self.log_vdm_abs.exp()
    }
}

/// Integrals of the basis elements over a domain.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentVector<T> {
    pub values: Vec<T>,
}

impl<T: Real> MomentVector<T> {
    pub fn compute(spec: &BasisSpec<T>, dom: &Domain<T>) -> Result<Self> {
        let rule = quadrature::domain_rule(dom, spec.degree)?;
        let mut values = vec![T::zero(); spec.dim()];
        for (pts, ws) in rule.points.chunks(4096).zip(rule.weights.chunks(4096)) {
            let rows = spec.eval_rows(pts);
            for (v, x) in values.iter_mut().zip(rows.tr_mul_vec(ws)) {
                *v += x;
            }
        }
        Ok(Self { values })
    }
}

fn condition_info<T: Real>(round: usize, r: &Matrix<T>, inv: Option<&Matrix<T>>) -> RoundInfo {
    let n = r.ncols();
    let d: Vec<f64> = (0..n).map(|i| r[(i, i)].abs().to_f64_lossy()).collect();
    let max = d.iter().cloned().fold(0.0, f64::max);
    let min = d.iter().cloned().fold(f64::INFINITY, f64::min);
    let condition = match inv {
        Some(inv) => (spectral_norm_estimate(r, 40) * spectral_norm_estimate(inv, 40)).to_f64_lossy(),
        None => f64::INFINITY,
    };
    RoundInfo { round, condition, diag_ratio: max / min }
}

fn square_r<T: Real>(v: &Matrix<T>) -> Matrix<T> {
    let qr = HouseholderQr::new(v.clone());
    let r = qr.r();
    let n = v.ncols();
    Matrix::from_fn(n, n, |i, j| r[(i, j)])
}

/// `s` rounds of `V_k = Q_k R_k`, `V_{k+1} = V_k R_k^-1`,
/// `T_{k+1} = T_k R_k^-1`, starting from `V_0 = V^T` and `T_0 = I`.
pub fn refine_basis<T: Real>(v: &Vandermonde<T>, s: usize) -> Result<RefinedBasis<T>> {
    refine_matrix(v.entries.transpose(), s)
}

/// Refinement rounds on an `M x N` working matrix (rows are mesh points).
pub fn refine_matrix<T: Real>(v0: Matrix<T>, s: usize) -> Result<RefinedBasis<T>> {
    let (m, n) = v0.shape();
    if m < n {
        return Err(Error::NotDetermining { points: m, required: n });
    }
    let mut work = v0;
    let mut transition = Matrix::identity(n);
    let mut history = Vec::with_capacity(s + 1);
    for round in 0..s {
        let r = square_r(&work);
        let u = upper_inverse(&r).map_err(|row| Error::SingularFactor { round, row })?;
        if !u.is_finite() {
            let row = (0..n).find(|&i| !u.row(i).iter().all(|x| x.is_finite())).unwrap_or(0);
            return Err(Error::SingularFactor { round, row });
        }
        history.push(condition_info(round, &r, Some(&u)));
        work = work.matmul(&u);
        transition = transition.matmul(&u);
    }
    let r = square_r(&work);
    let inv = upper_inverse(&r).ok().filter(|m| m.is_finite());
    history.push(condition_info(s, &r, inv.as_ref()));
    Ok(RefinedBasis { matrix: work, transition, history })
}

/// Greedy selection of `N` columns of the `N x M` matrix `vt` (the transpose
/// of a working Vandermonde).
pub fn greedy_select<T: Real>(vt: &Matrix<T>) -> Result<crate::linalg::ColumnSelection<T>> {
    let n = vt.nrows();
    if vt.ncols() < n {
        return Err(Error::NotDetermining { points: vt.ncols(), required: n });
    }
    greedy_columns(vt.clone(), PivotOptions::new(n))
}

/// As [`greedy_select`] with the columns attached to `points`: ties go to
/// the lexicographically smallest point, so relabeling the mesh cannot
/// change the selected set.
pub fn greedy_select_points<T: Real>(
    vt: &Matrix<T>,
    points: &[Point2<T>],
) -> Result<crate::linalg::ColumnSelection<T>> {
    let n = vt.nrows();
    if vt.ncols() < n {
        return Err(Error::NotDetermining { points: vt.ncols(), required: n });
    }
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&i, &j| {
        let (a, b) = (points[i], points[j]);
        a.x.partial_cmp(&b.x).unwrap_or(Ordering::Equal).then(a.y.partial_cmp(&b.y).unwrap_or(Ordering::Equal))
    });
    let mut priority = vec![0; points.len()];
    for (rank, &i) in order.iter().enumerate() {
        priority[i] = rank;
    }
    greedy_columns_by(vt.clone(), PivotOptions::new(n), &priority)
}

/// Builds the Vandermonde of `spec` on `mesh`, refines the basis `s` times
/// and selects `N` points.
pub fn extract_afp<T: Real>(mesh: &Mesh<T>, spec: &BasisSpec<T>, s: usize) -> Result<FeketeResult<T>> {
    extract_afp_with(mesh, spec, s, RefineMethod::Qr)
}

pub fn extract_afp_with<T: Real>(
    mesh: &Mesh<T>,
    spec: &BasisSpec<T>,
    s: usize,
    method: RefineMethod,
) -> Result<FeketeResult<T>> {
    let (basis, v0, method) = match method {
        RefineMethod::Arnoldi if s >= 1 => {
            let values = discrete_orthonormal(spec.degree, mesh.points())?;
            (Basis::Discrete { degree: spec.degree }, values, RefineMethod::Arnoldi)
        }
        _ => (Basis::Family(spec.clone()), vandermonde(spec, mesh)?.entries.transpose(), RefineMethod::Qr),
    };
    let refined = refine_matrix(v0, s)?;
    let sel = greedy_select_points(&refined.matrix.transpose(), mesh.points())?;
    let points = sel.indices.iter().map(|&i| mesh.points()[i]).collect();
    let selected = refined.matrix.select_rows(&sel.indices);
    Ok(FeketeResult {
        log_vdm_abs: sel.log_abs_det(),
        rank_report: RankReport {
            rank: sel.indices.len(),
            rounds: refined.history,
            pivot_ratio: sel.pivot_ratio().to_f64_lossy(),
        },
        indices: sel.indices,
        points,
        transition: refined.transition,
        weights: None,
        spec: spec.clone(),
        basis,
        refine: s,
        method,
        mesh_len: mesh.len(),
        selected,
    })
}

/// Weights `w` with `sum_i w_i p(x_i) = int p` for all `p` of degree `<= n`:
/// solves `A^T w = T^T b` with `A` the selected refined Vandermonde. The
/// moments must be taken in `result.spec`, and the result must come from
/// that basis (`RefineMethod::Qr`).
pub fn cubature_weights<T: Real>(result: &FeketeResult<T>, moments: &MomentVector<T>) -> Result<Vec<T>> {
    if let Basis::Discrete { .. } = result.basis {
        return Err(Error::Dimension("moments given for a mesh-fitted basis".into()));
    }
    let n = result.len();
    if moments.values.len() != n {
        return Err(Error::Dimension(format!("{} moments for {} points", moments.values.len(), n)));
    }
    let b = result.transition.tr_mul_vec(&moments.values);
    let qr = HouseholderQr::new(result.selected.clone());
    let w = qr.solve_transpose(&b).map_err(|_| Error::Singular("selected Vandermonde"))?;
    if w.iter().any(|x| !x.is_finite()) {
        return Err(Error::Singular("selected Vandermonde"));
    }
    Ok(w)
}

/// Extraction followed by the cubature weights for `dom`.
pub fn extract_with_weights<T: Real>(
    dom: &Domain<T>,
    mesh: &Mesh<T>,
    spec: &BasisSpec<T>,
    s: usize,
) -> Result<FeketeResult<T>> {
    extract_with_weights_using(dom, mesh, spec, s, RefineMethod::Qr)
}

pub fn extract_with_weights_using<T: Real>(
    dom: &Domain<T>,
    mesh: &Mesh<T>,
    spec: &BasisSpec<T>,
    s: usize,
    method: RefineMethod,
) -> Result<FeketeResult<T>> {
    let mut res = extract_afp_with(mesh, spec, s, method)?;
    res.weights = Some(domain_weights(&res, dom)?);
    Ok(res)
}

/// Cubature weights of the extracted points on `dom`, whatever the basis:
/// for a mesh-fitted basis, one orthonormal basis is fitted on the points and
/// the quadrature nodes together.
pub fn domain_weights<T: Real>(result: &FeketeResult<T>, dom: &Domain<T>) -> Result<Vec<T>> {
    match &result.basis {
        Basis::Family(spec) => cubature_weights(result, &MomentVector::compute(spec, dom)?),
        basis @ Basis::Discrete { .. } => {
            let rule = quadrature::domain_rule(dom, basis.degree())?;
            let rows = basis.rows_on(&[&result.points, &rule.points])?;
            let b = rows[1].tr_mul_vec(&rule.weights);
            let w = HouseholderQr::new(rows[0].clone())
                .solve_transpose(&b)
                .map_err(|_| Error::Singular("selected Vandermonde"))?;
            if w.iter().any(|x| !x.is_finite()) {
                return Err(Error::Singular("selected Vandermonde"));
            }
            Ok(w)
        }
    }
}
