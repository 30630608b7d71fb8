//! Weakly admissible meshes built by mapping low-cardinality reference grids,
//! plus the brute-force uniform admissible mesh used for comparison.

use std::collections::HashMap;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::basis::{poly_dim, BasisFamily, BasisSpec};
use crate::error::{Error, Result};
use crate::geometry::{Domain, Point2, Rect, INSIDE_TOL};
use crate::linalg::Matrix;
use crate::scalar::Real;

/// Default cap on the projected Vandermonde size (points times basis
/// dimension) of a uniform admissible mesh.
pub const DEFAULT_AM_CAP: usize = 10_000_000;

/// How a mesh was generated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Provenance {
    PolarWam,
    PaduaMapWam { map_degree: usize },
    UnionWam { pieces: Vec<Provenance> },
    TensorWam,
    UniformAm { step: f64 },
}

/// Growth class of the mesh constant `C(A_n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConstantClass {
    #[serde(rename = "log^2 n")]
    LogSquared,
    #[serde(rename = "log^2(kn)")]
    LogSquaredKn,
    #[serde(rename = "max-of-union")]
    MaxOfUnion,
    #[serde(rename = "O(1) grid")]
    Bounded,
}

impl fmt::Display for ConstantClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConstantClass::LogSquared => "log^2 n",
            ConstantClass::LogSquaredKn => "log^2(kn)",
            ConstantClass::MaxOfUnion => "max-of-union",
            ConstantClass::Bounded => "O(1) grid",
        })
    }
}

/// A degree-indexed discrete point set without duplicates.
#[derive(Clone, Debug)]
pub struct Mesh<T> {
    degree: usize,
    points: Vec<Point2<T>>,
    provenance: Provenance,
    constant_class: ConstantClass,
    generated: usize,
}

impl<T: Real> Mesh<T> {
    /// Deduplicates `points` (first occurrence wins) with tolerance
    /// `1e-12 * (1 + diameter)`.
    pub fn from_points(
        degree: usize,
        points: Vec<Point2<T>>,
        provenance: Provenance,
        constant_class: ConstantClass,
        diameter: T,
    ) -> Self {
        let generated = points.len();
        let tol = dedup_tolerance(diameter);
        let points = dedup(points, tol);
        Self { degree, points, provenance, constant_class, generated }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn points(&self) -> &[Point2<T>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn constant_class(&self) -> ConstantClass {
        self.constant_class
    }

    /// Number of generated points before duplicates were removed.
    pub fn generated(&self) -> usize {
        self.generated
    }

    pub fn duplicates_removed(&self) -> usize {
        self.generated - self.points.len()
    }

    /// Same point set in a different order; used to check relabeling
    /// invariance.
    pub fn permuted(&self, order: &[usize]) -> Self {
        let mut m = self.clone();
        m.points = order.iter().map(|&i| self.points[i]).collect();
        m
    }

    pub fn bbox(&self) -> Rect<T> {
        Rect::bounding(self.points.iter().copied())
    }

    /// Indices of points outside `dom` by more than the inside tolerance.
    pub fn outside(&self, dom: &Domain<T>) -> Vec<usize> {
        let tol = T::lit(INSIDE_TOL);
        (0..self.points.len()).filter(|&i| !dom.contains(self.points[i], tol)).collect()
    }
}

/// Dedup tolerance `1e-12 * (1 + diameter)`.
pub fn dedup_tolerance<T: Real>(diameter: T) -> T {
    T::lit(1e-12) * (T::one() + diameter)
}

/// Removes points within `tol` of an earlier point, preserving order.
pub fn dedup<T: Real>(points: Vec<Point2<T>>, tol: T) -> Vec<Point2<T>> {
    let cell = tol.to_f64_lossy().max(f64::MIN_POSITIVE);
    let key = |p: &Point2<T>| ((p.x.to_f64_lossy() / cell).floor() as i64, (p.y.to_f64_lossy() / cell).floor() as i64);
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::with_capacity(points.len());
    let mut kept: Vec<Point2<T>> = Vec::with_capacity(points.len());
    for p in points {
        let (kx, ky) = key(&p);
        let mut dup = false;
        'scan: for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(ids) = grid.get(&(kx + dx, ky + dy)) {
                    if ids.iter().any(|&i| kept[i].dist(p) <= tol) {
                        dup = true;
                        break 'scan;
                    }
                }
            }
        }
        if !dup {
            grid.entry((kx, ky)).or_default().push(kept.len());
            kept.push(p);
        }
    }
    kept
}

/// The `n + 1` Chebyshev-Lobatto points `cos(j pi / n)`, `j = 0..n`, in
/// decreasing order with exact `+-1` endpoints and exact symmetry.
pub fn chebyshev_lobatto<T: Real>(n: usize) -> Result<Vec<T>> {
    if n == 0 {
        return Err(Error::DegreeTooSmall { min: 1, got: 0 });
    }
    let half_pi = T::FRAC_PI_2();
    let nn = T::from_usize_lossy(n);
    // cos(j pi / n) = sin(pi (n - 2j) / (2n))
    Ok((0..=n)
        .map(|j| {
            let m = n as i64 - 2 * j as i64;
            (half_pi * T::from_i64(m).expect("small integer") / nn).sin()
        })
        .collect())
}

/// Padua points of degree `n`: `(C^odd_{n+1} x C^even_{n+2}) U (C^even_{n+1} x C^odd_{n+2})`,
/// parity taken on the node index. Exactly `(n+1)(n+2)/2` points.
pub fn padua_points<T: Real>(n: usize) -> Result<Vec<Point2<T>>> {
    let c1 = chebyshev_lobatto::<T>(n)?;
    let c2 = chebyshev_lobatto::<T>(n + 1)?;
    let mut pts = Vec::with_capacity(poly_dim(n));
    for (parity1, parity2) in [(1, 0), (0, 1)] {
        let xs = c1.iter().enumerate().filter(|(j, _)| j % 2 == parity1);
        for (_, &x) in xs {
            for (_, &y) in c2.iter().enumerate().filter(|(k, _)| k % 2 == parity2) {
                pts.push(Point2::new(x, y));
            }
        }
    }
    Ok(pts)
}

/// Polar-grid WAM of the unit disk: radii `1/2 + cos(j pi / n)/2`, `j = 0..n`,
/// and `2n + 1` equispaced angles. After collapsing the center there are
/// `2n^2 + n + 1` points.
pub fn disk_wam<T: Real>(n: usize) -> Result<Mesh<T>> {
    let nodes = chebyshev_lobatto::<T>(n)?;
    let half = T::lit(0.5);
    let angles = 2 * n + 1;
    let step = T::TAU() / T::from_usize_lossy(angles);
    let mut pts = Vec::with_capacity(nodes.len() * angles);
    for &c in &nodes {
        let r = half + half * c;
        for k in 0..angles {
            let phi = step * T::from_usize_lossy(k);
            pts.push(Point2::new(r * phi.cos(), r * phi.sin()));
        }
    }
    Ok(Mesh::from_points(n, pts, Provenance::PolarWam, ConstantClass::LogSquared, T::lit(2.0)))
}

/// Padua points of degree `k n` pushed through the degree-`k` polynomial map
/// of `dom`.
pub fn mapped_wam<T: Real>(dom: &Domain<T>, n: usize) -> Result<Mesh<T>> {
    if n == 0 {
        return Err(Error::DegreeTooSmall { min: 1, got: 0 });
    }
    let k = match dom {
        Domain::UnitDisk | Domain::Polygon(_) => {
            return Err(Error::InvalidDomain(format!("{} has no polynomial generating map", dom.kind())))
        }
        _ => dom.map_degree().expect("polynomial map"),
    };
    let pts = padua_points::<T>(k * n)?.into_iter().map(|y| dom.map_unchecked(y)).collect();
    Ok(Mesh::from_points(
        n,
        pts,
        Provenance::PaduaMapWam { map_degree: k },
        ConstantClass::LogSquaredKn,
        dom.diameter(),
    ))
}

/// Tensor Chebyshev-Lobatto grid on a rectangle, `(n+1)^2` points.
pub fn tensor_wam<T: Real>(rect: &Rect<T>, n: usize) -> Result<Mesh<T>> {
    let c = chebyshev_lobatto::<T>(n)?;
    let sq = Domain::Square(*rect);
    let mut pts = Vec::with_capacity(c.len() * c.len());
    for &x in &c {
        for &y in &c {
            pts.push(sq.map_unchecked(Point2::new(x, y)));
        }
    }
    Ok(Mesh::from_points(n, pts, Provenance::TensorWam, ConstantClass::LogSquared, rect.diameter()))
}

/// Union of same-degree meshes, duplicates across pieces removed.
pub fn union_wam<T: Real>(meshes: &[Mesh<T>]) -> Result<Mesh<T>> {
    let Some(first) = meshes.first() else {
        return Err(Error::InvalidDomain("union of no meshes".into()));
    };
    if meshes.len() == 1 {
        return Ok(first.clone());
    }
    let degree = first.degree;
    if let Some(m) = meshes.iter().find(|m| m.degree != degree) {
        return Err(Error::MixedDegrees { expected: degree, found: m.degree });
    }
    let all: Vec<Point2<T>> = meshes.iter().flat_map(|m| m.points.iter().copied()).collect();
    let diameter = Rect::bounding(all.iter().copied()).diameter();
    let pieces = meshes
        .iter()
        .flat_map(|m| match &m.provenance {
            Provenance::UnionWam { pieces } => pieces.clone(),
            p => vec![p.clone()],
        })
        .collect();
    let mut mesh = Mesh::from_points(degree, all, Provenance::UnionWam { pieces }, ConstantClass::MaxOfUnion, diameter);
    mesh.generated = meshes.iter().map(|m| m.generated).sum();
    Ok(mesh)
}

/// The geometric WAM of any supported domain: polar grid for the disk,
/// mapped Padua points for single-map domains, union over pieces for polygons.
pub fn wam<T: Real>(dom: &Domain<T>, n: usize) -> Result<Mesh<T>> {
    match dom {
        Domain::UnitDisk => disk_wam(n),
        Domain::Polygon(_) => {
            let pieces = dom.pieces()?;
            let meshes = pieces.iter().map(|p| mapped_wam(p, n)).collect::<Result<Vec<_>>>()?;
            union_wam(&meshes)
        }
        _ => mapped_wam(dom, n),
    }
}

/// Fine mesh for sup-norm estimates: the same construction at degree
/// `factor * n`, relabeled with degree `n`.
pub fn control_mesh<T: Real>(dom: &Domain<T>, n: usize, factor: usize) -> Result<Mesh<T>> {
    let mut m = wam(dom, factor.max(1) * n.max(1))?;
    m.degree = n;
    Ok(m)
}

/// Grid step `1 / (n^2 + 1)` of the uniform admissible mesh.
pub fn am_step<T: Real>(n: usize) -> T {
    T::one() / T::from_usize_lossy(n * n + 1)
}

/// Uniform grid of step `1/(n^2+1)` anchored at the lower-left corner of the
/// bounding box, intersected with the domain. Refuses when the projected
/// Vandermonde size (grid nodes in the box times `dim P_n`) exceeds `cap`.
pub fn uniform_am<T: Real>(dom: &Domain<T>, n: usize, cap: usize) -> Result<Mesh<T>> {
    if n == 0 {
        return Err(Error::DegreeTooSmall { min: 1, got: 0 });
    }
    let h = am_step::<T>(n);
    let bb = dom.bbox();
    let count = |len: T| ((len / h).to_f64_lossy() + 1e-9).floor() as usize + 1;
    let (nx, ny) = (count(bb.width()), count(bb.height()));
    let projected = nx.saturating_mul(ny).saturating_mul(poly_dim(n));
    if projected > cap {
        return Err(Error::AmTooLarge { projected, cap });
    }
    let tol = T::lit(INSIDE_TOL);
    let mut pts = Vec::new();
    for i in 0..nx {
        let x = bb.x_lo + h * T::from_usize_lossy(i);
        for j in 0..ny {
            let p = Point2::new(x, bb.y_lo + h * T::from_usize_lossy(j));
            if dom.contains(p, tol) {
                pts.push(p);
            }
        }
    }
    let generated = pts.len();
    Ok(Mesh {
        degree: n,
        points: pts,
        provenance: Provenance::UniformAm { step: h.to_f64_lossy() },
        constant_class: ConstantClass::Bounded,
        generated,
    })
}

/// Cardinality of the uniform admissible mesh, without the size guard and
/// without storing the points.
pub fn uniform_am_count<T: Real>(dom: &Domain<T>, n: usize) -> usize {
    let h = am_step::<T>(n.max(1));
    let bb = dom.bbox();
    let count = |len: T| ((len / h).to_f64_lossy() + 1e-9).floor() as usize + 1;
    let (nx, ny) = (count(bb.width()), count(bb.height()));
    let tol = T::lit(INSIDE_TOL);
    (0..nx)
        .map(|i| {
            let x = bb.x_lo + h * T::from_usize_lossy(i);
            (0..ny).filter(|&j| dom.contains(Point2::new(x, bb.y_lo + h * T::from_usize_lossy(j)), tol)).count()
        })
        .sum()
}

/// Empirical WAM constant: the largest ratio `max_control |p| / max_mesh |p|`
/// over `samples` random polynomials with standard normal-ish coefficients in
/// the product Chebyshev basis mapped from the mesh's bounding box.
pub fn sampled_wam_constant<T: Real, R: Rng + ?Sized>(
    mesh: &Mesh<T>,
    control: &Mesh<T>,
    box_rect: Rect<T>,
    samples: usize,
    rng: &mut R,
) -> Result<T> {
    let spec = BasisSpec::new(BasisFamily::ProductChebyshev, mesh.degree).with_box(box_rect);
    let dim = spec.dim();
    let coeffs = Matrix::from_fn(dim, samples, |_, _| T::lit(rng.gen_range(-1.0..1.0)));
    let sup = |m: &Mesh<T>| -> Vec<T> {
        let mut best = vec![T::zero(); samples];
        for chunk in m.points().chunks(4096) {
            let phi = spec.eval_rows(chunk);
            let vals = phi.matmul(&coeffs);
            for (s, b) in best.iter_mut().enumerate() {
                *b = vals.col(s).iter().fold(*b, |acc, v| acc.max(v.abs()));
            }
        }
        best
    };
    let on_mesh = sup(mesh);
    let on_control = sup(control);
    Ok(on_mesh.iter().zip(&on_control).fold(T::zero(), |acc, (&a, &b)| acc.max(b / a)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn chebyshev_lobatto_examples() {
        assert_eq!(chebyshev_lobatto::<f64>(1).unwrap(), vec![1.0, -1.0]);
        assert_eq!(chebyshev_lobatto::<f64>(2).unwrap(), vec![1.0, 0.0, -1.0]);
        let c4 = chebyshev_lobatto::<f64>(4).unwrap();
        let expect = [1.0, FRAC_1_SQRT_2, 0.0, -FRAC_1_SQRT_2, -1.0];
        for (a, b) in c4.iter().zip(expect) {
            assert!((a - b).abs() <= 2.0 * f64::EPSILON);
        }
        assert!(chebyshev_lobatto::<f64>(0).is_err());
        let c = chebyshev_lobatto::<f64>(17).unwrap();
        assert!(c.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn padua_degree_one() {
        let p = padua_points::<f64>(1).unwrap();
        assert_eq!(p, vec![Point2::new(-1.0, 1.0), Point2::new(-1.0, -1.0), Point2::new(1.0, 0.0)]);
    }

    #[test]
    fn padua_cardinalities() {
        assert_eq!(padua_points::<f64>(8).unwrap().len(), 45);
        assert_eq!(padua_points::<f64>(16).unwrap().len(), 153);
        for n in 1..=30 {
            let p = padua_points::<f64>(n).unwrap();
            assert_eq!(p.len(), poly_dim(n));
            assert_eq!(dedup(p, 1e-12).len(), poly_dim(n));
        }
    }

    #[test]
    fn disk_wam_cardinality() {
        assert_eq!(disk_wam::<f64>(8).unwrap().len(), 137);
        assert_eq!(disk_wam::<f64>(1).unwrap().len(), 4);
        for n in 1..=30 {
            assert_eq!(disk_wam::<f64>(n).unwrap().len(), 2 * n * n + n + 1);
        }
        let m = disk_wam::<f64>(8).unwrap();
        assert_eq!(m.generated(), 153);
        assert_eq!(m.duplicates_removed(), 16);
    }

    #[test]
    fn simplex_wam_cardinality() {
        let s = Domain::<f64>::unit_simplex();
        // the collapsed side y2 = 1 carries the n points with x in C^odd_{2n+1}
        for n in 1..=30 {
            assert_eq!(mapped_wam(&s, n).unwrap().len(), 2 * n * n + 2 * n + 2);
        }
    }

    #[test]
    fn cubic_trapezoid_bound() {
        let d = Domain::trapezoid(-1.0, 1.0, vec![-1.0, 0.0, 0.0, 0.2], vec![0.5, 0.3, 0.0, -0.4]).unwrap();
        assert_eq!(d.map_degree(), Some(4));
        let m = mapped_wam(&d, 8).unwrap();
        assert!(m.len() <= 561);
        assert!(m.outside(&d).is_empty());
    }

    #[test]
    fn union_rules() {
        let s = Domain::<f64>::unit_simplex();
        let m = mapped_wam(&s, 5).unwrap();
        let u = union_wam(std::slice::from_ref(&m)).unwrap();
        assert_eq!(u.points(), m.points());
        let other = mapped_wam(&s, 6).unwrap();
        assert!(matches!(union_wam(&[m, other]), Err(Error::MixedDegrees { .. })));
    }

    #[test]
    fn shared_edge_points_merge() {
        let p = |x, y| Point2::new(x, y);
        let t1 = Domain::triangle(p(0.0, 0.0), p(1.0, 0.0), p(1.0, 1.0)).unwrap();
        let t2 = Domain::triangle(p(0.0, 0.0), p(1.0, 1.0), p(0.0, 1.0)).unwrap();
        let (a, b) = (mapped_wam(&t1, 8).unwrap(), mapped_wam(&t2, 8).unwrap());
        let u = union_wam(&[a.clone(), b.clone()]).unwrap();
        assert!(u.len() < a.len() + b.len());
        assert!(u.len() <= 2 * 146, "{}", u.len());
    }

    #[test]
    fn square_am_count() {
        let sq = Domain::Square(Rect::reference_square());
        assert_eq!(uniform_am::<f64>(&sq, 2, DEFAULT_AM_CAP).unwrap().len(), 121);
    }

    #[test]
    fn disk_am_counts() {
        let d5 = uniform_am::<f64>(&Domain::UnitDisk, 5, DEFAULT_AM_CAP).unwrap().len();
        assert!((1600..=2600).contains(&d5), "{d5}");
        let d10 = uniform_am::<f64>(&Domain::UnitDisk, 10, DEFAULT_AM_CAP).unwrap().len();
        let ratio = d10 as f64 / d5 as f64;
        assert!((14.0..=18.0).contains(&ratio), "{ratio}");
        assert!(matches!(uniform_am::<f64>(&Domain::UnitDisk, 15, DEFAULT_AM_CAP), Err(Error::AmTooLarge { .. })));
    }

    #[test]
    fn dedup_keeps_first_occurrence() {
        let pts = vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(1e-14, 0.0), Point2::new(1.0, 1e-3)];
        let d = dedup(pts, 1e-12);
        assert_eq!(d, vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(1.0, 1e-3)]);
    }
}
