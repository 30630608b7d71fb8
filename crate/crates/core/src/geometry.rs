//! Compact planar domains and the surjective maps from a reference rectangle
//! that generate their meshes.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Absolute tolerance for point-in-domain tests.
pub const INSIDE_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Point2<T> {
    pub x: T,
    pub y: T,
}

impl<T: Real> Point2<T> {
    #[inline]
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    pub fn from_f64(x: f64, y: f64) -> Self {
        Self::new(T::lit(x), T::lit(y))
    }

    #[inline]
    pub fn norm(self) -> T {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn dist(self, other: Self) -> T {
        (self - other).norm()
    }

    /// z-component of the planar cross product.
    #[inline]
    pub fn cross(self, other: Self) -> T {
        self.x * other.y - self.y * other.x
    }

    #[inline]
    pub fn dot(self, other: Self) -> T {
        self.x * other.x + self.y * other.y
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn cast<U: Real>(self) -> Point2<U> {
        Point2::new(U::lit(self.x.to_f64_lossy()), U::lit(self.y.to_f64_lossy()))
    }
}

impl<T: Real> Add for Point2<T> {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y)
    }
}

impl<T: Real> Sub for Point2<T> {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y)
    }
}

impl<T: Real> Mul<T> for Point2<T> {
    type Output = Self;
    #[inline]
    fn mul(self, s: T) -> Self {
        Self::new(self.x * s, self.y * s)
    }
}

impl<T: Real> Neg for Point2<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

/// Axis-aligned rectangle `[x_lo, x_hi] x [y_lo, y_hi]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rect<T> {
    pub x_lo: T,
    pub x_hi: T,
    pub y_lo: T,
    pub y_hi: T,
}

impl<T: Real> Rect<T> {
    pub fn new(x_lo: T, x_hi: T, y_lo: T, y_hi: T) -> Result<Self> {
        if !(x_lo < x_hi && y_lo < y_hi) {
            return Err(Error::InvalidDomain(format!("empty rectangle [{x_lo}, {x_hi}] x [{y_lo}, {y_hi}]")));
        }
        Ok(Self { x_lo, x_hi, y_lo, y_hi })
    }

    /// `[-1, 1]^2`.
    pub fn reference_square() -> Self {
        Self { x_lo: -T::one(), x_hi: T::one(), y_lo: -T::one(), y_hi: T::one() }
    }

    pub fn width(&self) -> T {
        self.x_hi - self.x_lo
    }

    pub fn height(&self) -> T {
        self.y_hi - self.y_lo
    }

    pub fn diameter(&self) -> T {
        self.width().hypot(self.height())
    }

    pub fn contains(&self, p: Point2<T>, tol: T) -> bool {
        p.x >= self.x_lo - tol && p.x <= self.x_hi + tol && p.y >= self.y_lo - tol && p.y <= self.y_hi + tol
    }

    /// Smallest rectangle containing all points (may be degenerate).
    pub fn bounding(points: impl IntoIterator<Item = Point2<T>>) -> Self {
        let mut r = Self { x_lo: T::infinity(), x_hi: T::neg_infinity(), y_lo: T::infinity(), y_hi: T::neg_infinity() };
        for p in points {
            r.x_lo = r.x_lo.min(p.x);
            r.x_hi = r.x_hi.max(p.x);
            r.y_lo = r.y_lo.min(p.y);
            r.y_hi = r.y_hi.max(p.y);
        }
        r
    }
}

/// Univariate polynomial, coefficients in ascending powers.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly1<T>(pub Vec<T>);

impl<T: Real> Poly1<T> {
    pub fn eval(&self, x: T) -> T {
        self.0.iter().rev().fold(T::zero(), |acc, &c| acc * x + c)
    }

    /// Degree ignoring trailing exact zeros; the zero polynomial has degree 0.
    pub fn degree(&self) -> usize {
        self.0.iter().rposition(|&c| c != T::zero()).unwrap_or(0)
    }

    /// Exact integral over `[a, b]`.
    pub fn integral(&self, a: T, b: T) -> T {
        let anti = |x: T| {
            self.0.iter().enumerate().rev().fold(T::zero(), |acc, (k, &c)| acc * x + c / T::from_usize_lossy(k + 1)) * x
        };
        anti(b) - anti(a)
    }
}

/// How a polygon is cut into mappable pieces.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolygonSplit {
    /// Vertical slabs bounded by two edges (linear trapezoids); falls back to
    /// triangles when some vertical line meets the boundary more than twice.
    #[default]
    Trapezoids,
    /// Ear-clipping triangulation into `m - 2` triangles.
    Triangles,
}

/// Simple, simply connected polygon with counterclockwise vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct Polygon<T> {
    vertices: Vec<Point2<T>>,
    pub split: PolygonSplit,
}

impl<T: Real> Polygon<T> {
    /// Validates the vertex list. Clockwise input is reversed.
    pub fn new(vertices: Vec<Point2<T>>) -> Result<Self> {
        let m = vertices.len();
        if m < 3 {
            return Err(Error::InvalidDomain(format!("polygon needs at least 3 vertices, got {m}")));
        }
        if let Some(i) = vertices.iter().position(|p| !p.is_finite()) {
            return Err(Error::InvalidDomain(format!("vertex {i} is not finite")));
        }
        for i in 0..m {
            for j in 0..i {
                if vertices[i] == vertices[j] {
                    return Err(Error::RepeatedVertex { index: i, previous: j });
                }
            }
        }
        check_simple(&vertices)?;
        let area = signed_area(&vertices);
        if area == T::zero() {
            return Err(Error::InvalidDomain("polygon has zero area".into()));
        }
        let mut vertices = vertices;
        if area < T::zero() {
            vertices.reverse();
        }
        Ok(Self { vertices, split: PolygonSplit::default() })
    }

    pub fn with_split(mut self, split: PolygonSplit) -> Self {
        self.split = split;
        self
    }

    pub fn vertices(&self) -> &[Point2<T>] {
        &self.vertices
    }

    pub fn area(&self) -> T {
        signed_area(&self.vertices)
    }

    fn edge(&self, i: usize) -> (Point2<T>, Point2<T>) {
        (self.vertices[i], self.vertices[(i + 1) % self.vertices.len()])
    }

    pub fn contains(&self, p: Point2<T>, tol: T) -> bool {
        let m = self.vertices.len();
        for i in 0..m {
            let (a, b) = self.edge(i);
            if segment_distance(p, a, b) <= tol {
                return true;
            }
        }
        let mut inside = false;
        for i in 0..m {
            let (a, b) = self.edge(i);
            if (a.y > p.y) != (b.y > p.y) {
                let x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
                if p.x < x_cross {
                    inside = !inside;
                }
            }
        }
        inside
    }
}

/// Shoelace formula; positive for counterclockwise order.
pub fn signed_area<T: Real>(v: &[Point2<T>]) -> T {
    let m = v.len();
    let twice: T = (0..m).map(|i| v[i].cross(v[(i + 1) % m])).sum();
    twice / T::lit(2.0)
}

fn segment_distance<T: Real>(p: Point2<T>, a: Point2<T>, b: Point2<T>) -> T {
    let ab = b - a;
    let len2 = ab.dot(ab);
    let t = if len2 > T::zero() { ((p - a).dot(ab) / len2).max(T::zero()).min(T::one()) } else { T::zero() };
    p.dist(a + ab * t)
}

fn orient<T: Real>(a: Point2<T>, b: Point2<T>, c: Point2<T>) -> T {
    (b - a).cross(c - a)
}

fn on_segment<T: Real>(a: Point2<T>, b: Point2<T>, p: Point2<T>) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Closed segment intersection test.
fn segments_intersect<T: Real>(p1: Point2<T>, p2: Point2<T>, q1: Point2<T>, q2: Point2<T>) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    let z = T::zero();
    if ((d1 > z && d2 < z) || (d1 < z && d2 > z)) && ((d3 > z && d4 < z) || (d3 < z && d4 > z)) {
        return true;
    }
    (d1 == z && on_segment(q1, q2, p1))
        || (d2 == z && on_segment(q1, q2, p2))
        || (d3 == z && on_segment(p1, p2, q1))
        || (d4 == z && on_segment(p1, p2, q2))
}

fn check_simple<T: Real>(v: &[Point2<T>]) -> Result<()> {
    let m = v.len();
    let edge = |i: usize| (v[i], v[(i + 1) % m]);
    for i in 0..m {
        for j in i + 1..m {
            let (a, b) = edge(i);
            let (c, d) = edge(j);
            let adjacent = j == i + 1 || (i == 0 && j == m - 1);
            if adjacent {
                // shared vertex; only a fold-back along the same line is illegal
                let (shared, p, q) = if j == i + 1 { (b, a, d) } else { (a, b, c) };
                if orient(shared, p, q) == T::zero() && (p - shared).dot(q - shared) > T::zero() {
                    return Err(Error::SelfIntersecting { first: i, second: j });
                }
                continue;
            }
            if segments_intersect(a, b, c, d) {
                return Err(Error::SelfIntersecting { first: i, second: j });
            }
        }
    }
    Ok(())
}

/// The compact sets supported by the mesh generators.
#[derive(Clone, Debug, PartialEq)]
pub enum Domain<T> {
    UnitDisk,
    Triangle { u: Point2<T>, v: Point2<T>, w: Point2<T> },
    PolyTrapezoid { a: T, b: T, lower: Poly1<T>, upper: Poly1<T> },
    Polygon(Polygon<T>),
    Square(Rect<T>),
}

impl<T: Real> Domain<T> {
    pub fn unit_disk() -> Self {
        Domain::UnitDisk
    }

    pub fn triangle(u: Point2<T>, v: Point2<T>, w: Point2<T>) -> Result<Self> {
        if !(u.is_finite() && v.is_finite() && w.is_finite()) {
            return Err(Error::InvalidDomain("non-finite triangle vertex".into()));
        }
        if orient(u, v, w) == T::zero() {
            return Err(Error::DegenerateTriangle);
        }
        Ok(Domain::Triangle { u, v, w })
    }

    /// The unit simplex with vertices `(0,0), (1,0), (0,1)`.
    pub fn unit_simplex() -> Self {
        Domain::Triangle {
            u: Point2::new(T::zero(), T::zero()),
            v: Point2::new(T::one(), T::zero()),
            w: Point2::new(T::zero(), T::one()),
        }
    }

    /// `{a <= x <= b, lower(x) <= y <= upper(x)}`.
    pub fn trapezoid(a: T, b: T, lower: Vec<T>, upper: Vec<T>) -> Result<Self> {
        if !(a < b) {
            return Err(Error::InvalidDomain(format!("trapezoid needs a < b, got a={a}, b={b}")));
        }
        if lower.is_empty() || upper.is_empty() {
            return Err(Error::InvalidDomain("empty coefficient list".into()));
        }
        let (lower, upper) = (Poly1(lower), Poly1(upper));
        let scale = T::one() + a.abs().max(b.abs());
        let tol = T::lit(INSIDE_TOL) * scale;
        const SAMPLES: usize = 512;
        for i in 0..=SAMPLES {
            let x = a + (b - a) * T::from_usize_lossy(i) / T::from_usize_lossy(SAMPLES);
            if lower.eval(x) > upper.eval(x) + tol {
                return Err(Error::InvalidDomain(format!("lower graph exceeds upper graph at x={x}")));
            }
        }
        Ok(Domain::PolyTrapezoid { a, b, lower, upper })
    }

    pub fn polygon(vertices: Vec<Point2<T>>) -> Result<Self> {
        Ok(Domain::Polygon(Polygon::new(vertices)?))
    }

    pub fn square(rect: Rect<T>) -> Self {
        Domain::Square(rect)
    }

    /// Short name of the domain kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Domain::UnitDisk => "disk",
            Domain::Triangle { .. } => "triangle",
            Domain::PolyTrapezoid { .. } => "trapezoid",
            Domain::Polygon(_) => "polygon",
            Domain::Square(_) => "square",
        }
    }

    /// The reference rectangle `Q` of the generating map.
    pub fn reference(&self) -> Rect<T> {
        match self {
            Domain::UnitDisk => Rect { x_lo: T::zero(), x_hi: T::one(), y_lo: T::zero(), y_hi: T::TAU() },
            _ => Rect::reference_square(),
        }
    }

    /// Total degree of the polynomial map from `[-1,1]^2`; `None` for the
    /// (trigonometric) polar map of the disk. For polygons, the largest
    /// degree over the pieces.
    pub fn map_degree(&self) -> Option<usize> {
        match self {
            Domain::UnitDisk => None,
            Domain::Triangle { .. } => Some(2),
            Domain::PolyTrapezoid { lower, upper, .. } => Some(lower.degree().max(upper.degree()) + 1),
            Domain::Square(_) => Some(1),
            Domain::Polygon(_) => self.pieces().ok().and_then(|p| p.iter().filter_map(Domain::map_degree).max()),
        }
    }

    /// Evaluates the surjective map `t : Q -> K` at a reference point.
    pub fn map(&self, y: Point2<T>) -> Result<Point2<T>> {
        match self {
            Domain::UnitDisk => polar_map(y.x, y.y),
            Domain::Triangle { u, v, w } => {
                check_reference(y)?;
                Ok(duffy(*u, *v, *w, y))
            }
            Domain::PolyTrapezoid { .. } => trapezoid_map(self, y),
            Domain::Square(r) => {
                check_reference(y)?;
                Ok(affine_square(r, y))
            }
            Domain::Polygon(_) => Err(Error::InvalidDomain("a polygon has no single generating map".into())),
        }
    }

    /// Map without range checks; used by the mesh generators on nodes that
    /// are in the reference set by construction.
    pub(crate) fn map_unchecked(&self, y: Point2<T>) -> Point2<T> {
        match self {
            Domain::UnitDisk => Point2::new(y.x * y.y.cos(), y.x * y.y.sin()),
            Domain::Triangle { u, v, w } => duffy(*u, *v, *w, y),
            Domain::PolyTrapezoid { a, b, lower, upper } => trapezoid(*a, *b, lower, upper, y),
            Domain::Square(r) => affine_square(r, y),
            Domain::Polygon(_) => unreachable!("polygons are meshed piecewise"),
        }
    }

    /// `|det Dt(y)|` of the generating map.
    pub fn jacobian(&self, y: Point2<T>) -> T {
        let two = T::lit(2.0);
        match self {
            Domain::UnitDisk => y.x.abs(),
            Domain::Triangle { u, v, w } => ((*v - *u).cross(*w - *u) * (T::one() - y.y) / T::lit(8.0)).abs(),
            Domain::PolyTrapezoid { a, b, lower, upper } => {
                let x1 = (*b - *a) / two * y.x + (*b + *a) / two;
                ((*b - *a) / two * (upper.eval(x1) - lower.eval(x1)) / two).abs()
            }
            Domain::Square(r) => r.width() * r.height() / T::lit(4.0),
            Domain::Polygon(_) => T::nan(),
        }
    }

    pub fn bbox(&self) -> Rect<T> {
        match self {
            Domain::UnitDisk => Rect::reference_square(),
            Domain::Triangle { u, v, w } => Rect::bounding([*u, *v, *w]),
            Domain::PolyTrapezoid { a, b, lower, upper } => {
                const SAMPLES: usize = 1024;
                let mut lo = T::infinity();
                let mut hi = T::neg_infinity();
                for i in 0..=SAMPLES {
                    let x = *a + (*b - *a) * T::from_usize_lossy(i) / T::from_usize_lossy(SAMPLES);
                    lo = lo.min(lower.eval(x));
                    hi = hi.max(upper.eval(x));
                }
                if lower.degree() > 1 || upper.degree() > 1 {
                    // sampled extrema of curved graphs; pad slightly
                    let pad = (hi - lo) * T::lit(1e-6);
                    lo -= pad;
                    hi += pad;
                }
                Rect { x_lo: *a, x_hi: *b, y_lo: lo, y_hi: hi }
            }
            Domain::Polygon(p) => Rect::bounding(p.vertices.iter().copied()),
            Domain::Square(r) => *r,
        }
    }

    pub fn diameter(&self) -> T {
        match self {
            Domain::UnitDisk => T::lit(2.0),
            _ => self.bbox().diameter(),
        }
    }

    pub fn area(&self) -> T {
        match self {
            Domain::UnitDisk => T::PI(),
            Domain::Triangle { u, v, w } => (*v - *u).cross(*w - *u).abs() / T::lit(2.0),
            Domain::PolyTrapezoid { a, b, lower, upper } => upper.integral(*a, *b) - lower.integral(*a, *b),
            Domain::Polygon(p) => p.area(),
            Domain::Square(r) => r.width() * r.height(),
        }
    }

    pub fn contains(&self, p: Point2<T>, tol: T) -> bool {
        match self {
            Domain::UnitDisk => p.norm() <= T::one() + tol,
            Domain::Triangle { u, v, w } => {
                let s = orient(*u, *v, *w).signum();
                [(*u, *v), (*v, *w), (*w, *u)].iter().all(|&(a, b)| {
                    let len = a.dist(b);
                    s * orient(a, b, p) / len >= -tol
                })
            }
            Domain::PolyTrapezoid { a, b, lower, upper } => {
                if p.x < *a - tol || p.x > *b + tol {
                    return false;
                }
                let x = p.x.max(*a).min(*b);
                p.y >= lower.eval(x) - tol && p.y <= upper.eval(x) + tol
            }
            Domain::Polygon(poly) => poly.contains(p, tol),
            Domain::Square(r) => r.contains(p, tol),
        }
    }

    /// Mappable pieces: polygons are decomposed per their split preference,
    /// every other domain is its own single piece.
    pub fn pieces(&self) -> Result<Vec<Domain<T>>> {
        match self {
            Domain::Polygon(p) => match p.split {
                PolygonSplit::Trapezoids => match trapezoid_panels(p) {
                    Some(panels) => Ok(panels),
                    None => decompose_polygon(p),
                },
                PolygonSplit::Triangles => decompose_polygon(p),
            },
            other => Ok(vec![other.clone()]),
        }
    }
}

fn check_reference<T: Real>(y: Point2<T>) -> Result<()> {
    let lim = T::one() + T::lit(1e-12);
    if !(y.x.abs() <= lim) {
        return Err(Error::OutOfRange { what: "reference coordinate y1", value: y.x.to_f64_lossy() });
    }
    if !(y.y.abs() <= lim) {
        return Err(Error::OutOfRange { what: "reference coordinate y2", value: y.y.to_f64_lossy() });
    }
    Ok(())
}

fn affine_square<T: Real>(r: &Rect<T>, y: Point2<T>) -> Point2<T> {
    let two = T::lit(2.0);
    Point2::new(r.x_lo + (y.x + T::one()) * r.width() / two, r.y_lo + (y.y + T::one()) * r.height() / two)
}

/// Polar coordinates `(r, phi) -> (r cos phi, r sin phi)` on `[0,1] x [0, 2pi]`.
pub fn polar_map<T: Real>(r: T, phi: T) -> Result<Point2<T>> {
    if !(r >= T::zero() && r <= T::one()) {
        return Err(Error::OutOfRange { what: "radius", value: r.to_f64_lossy() });
    }
    if !phi.is_finite() {
        return Err(Error::OutOfRange { what: "angle", value: phi.to_f64_lossy() });
    }
    Ok(Point2::new(r * phi.cos(), r * phi.sin()))
}

#[inline]
fn duffy<T: Real>(u: Point2<T>, v: Point2<T>, w: Point2<T>, y: Point2<T>) -> Point2<T> {
    let quarter = T::lit(0.25);
    let half = T::lit(0.5);
    (v - u) * (quarter * (T::one() + y.x) * (T::one() - y.y)) + (w - u) * (half * (T::one() + y.y)) + u
}

/// Duffy collapse of `[-1,1]^2` onto the triangle `u, v, w`; the side
/// `y2 = 1` goes to `w`.
pub fn duffy_map<T: Real>(u: Point2<T>, v: Point2<T>, w: Point2<T>, y: Point2<T>) -> Result<Point2<T>> {
    if orient(u, v, w) == T::zero() {
        return Err(Error::DegenerateTriangle);
    }
    check_reference(y)?;
    Ok(duffy(u, v, w, y))
}

#[inline]
fn trapezoid<T: Real>(a: T, b: T, lower: &Poly1<T>, upper: &Poly1<T>, y: Point2<T>) -> Point2<T> {
    let two = T::lit(2.0);
    let x1 = (b - a) / two * y.x + (b + a) / two;
    let (g1, g2) = (lower.eval(x1), upper.eval(x1));
    Point2::new(x1, (g2 - g1) / two * y.y + (g2 + g1) / two)
}

/// Maps `[-1,1]^2` onto a polynomial trapezoid.
pub fn trapezoid_map<T: Real>(dom: &Domain<T>, y: Point2<T>) -> Result<Point2<T>> {
    match dom {
        Domain::PolyTrapezoid { a, b, lower, upper } => {
            check_reference(y)?;
            Ok(trapezoid(*a, *b, lower, upper, y))
        }
        other => Err(Error::InvalidDomain(format!("trapezoid map on a {}", other.kind()))),
    }
}

/// Ear-clipping triangulation; the lowest-index ear is clipped first.
pub fn decompose_polygon<T: Real>(poly: &Polygon<T>) -> Result<Vec<Domain<T>>> {
    let v = &poly.vertices;
    let scale = Rect::bounding(v.iter().copied()).diameter();
    let eps = T::epsilon() * T::lit(16.0) * scale * scale;
    let mut rem: Vec<usize> = (0..v.len()).collect();
    let mut out = Vec::with_capacity(v.len().saturating_sub(2));

    while rem.len() > 3 {
        let k = rem.len();
        let ear = (0..k).find(|&i| {
            let (p, c, n) = (v[rem[(i + k - 1) % k]], v[rem[i]], v[rem[(i + 1) % k]]);
            if orient(p, c, n) <= eps {
                return false;
            }
            rem.iter().all(|&r| {
                let q = v[r];
                if q == p || q == c || q == n {
                    return true;
                }
                // reject if q lies inside or on the candidate ear
                !(orient(p, c, q) >= T::zero() && orient(c, n, q) >= T::zero() && orient(n, p, q) >= T::zero())
            })
        });
        match ear {
            Some(i) => {
                let (p, c, n) = (v[rem[(i + k - 1) % k]], v[rem[i]], v[rem[(i + 1) % k]]);
                out.push(Domain::triangle(p, c, n)?);
                rem.remove(i);
            }
            None => {
                // only straight-angle vertices remain clippable; drop one
                let flat = (0..k).find(|&i| {
                    let (p, c, n) = (v[rem[(i + k - 1) % k]], v[rem[i]], v[rem[(i + 1) % k]]);
                    orient(p, c, n).abs() <= eps
                });
                match flat {
                    Some(i) => {
                        rem.remove(i);
                    }
                    None => return Err(Error::InvalidDomain("ear clipping found no ear".into())),
                }
            }
        }
    }
    if rem.len() == 3 {
        out.push(Domain::triangle(v[rem[0]], v[rem[1]], v[rem[2]])?);
    }
    Ok(out)
}

/// Cuts the polygon at the abscissae of its vertices into linear trapezoids
/// `{x_i <= x <= x_{i+1}, g1 <= y <= g2}`. Returns `None` when some vertical
/// line crosses the boundary more than twice.
pub fn trapezoid_panels<T: Real>(poly: &Polygon<T>) -> Option<Vec<Domain<T>>> {
    let v = &poly.vertices;
    let m = v.len();
    let mut xs: Vec<T> = v.iter().map(|p| p.x).collect();
    xs.sort_by(|a, b| a.partial_cmp(b).expect("finite vertices"));
    xs.dedup();

    let mut panels = Vec::with_capacity(xs.len().saturating_sub(1));
    for w in xs.windows(2) {
        let (xa, xb) = (w[0], w[1]);
        let xm = (xa + xb) / T::lit(2.0);
        let mut crossing = Vec::with_capacity(2);
        for i in 0..m {
            let (p, q) = (v[i], v[(i + 1) % m]);
            if (p.x - xm) * (q.x - xm) < T::zero() {
                let slope = (q.y - p.y) / (q.x - p.x);
                let at = |x: T| p.y + slope * (x - p.x);
                crossing.push((at(xm), at(xa), at(xb), slope));
            }
        }
        if crossing.len() != 2 {
            return None;
        }
        crossing.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite"));
        let line = |(_, ya, yb, slope): (T, T, T, T)| {
            if slope == T::zero() {
                Poly1(vec![ya])
            } else {
                // through (xa, ya) and (xb, yb)
                let s = (yb - ya) / (xb - xa);
                Poly1(vec![ya - s * xa, s])
            }
        };
        let (lower, upper) = (line(crossing[0]), line(crossing[1]));
        panels.push(Domain::PolyTrapezoid { a: xa, b: xb, lower, upper });
    }
    Some(panels)
}

/// JSON description of a domain: `{"kind": "disk" | "triangle" | ..., ...}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DomainDescription {
    Disk,
    Simplex,
    Triangle {
        vertices: [[f64; 2]; 3],
    },
    Trapezoid {
        a: f64,
        b: f64,
        lower: Vec<f64>,
        upper: Vec<f64>,
    },
    Polygon {
        vertices: Vec<[f64; 2]>,
        #[serde(default)]
        split: PolygonSplit,
    },
    Square {
        #[serde(default = "default_square")]
        bounds: [f64; 4],
    },
}

fn default_square() -> [f64; 4] {
    [-1.0, 1.0, -1.0, 1.0]
}

impl DomainDescription {
    pub fn parse(json: &str) -> Result<Self> {
        Ok(serde_json::from_str(json)?)
    }

    pub fn build<T: Real>(&self) -> Result<Domain<T>> {
        let pt = |p: [f64; 2]| Point2::from_f64(p[0], p[1]);
        let lits = |c: &[f64]| c.iter().map(|&x| T::lit(x)).collect::<Vec<_>>();
        match self {
            DomainDescription::Disk => Ok(Domain::UnitDisk),
            DomainDescription::Simplex => Ok(Domain::unit_simplex()),
            DomainDescription::Triangle { vertices: [u, v, w] } => Domain::triangle(pt(*u), pt(*v), pt(*w)),
            DomainDescription::Trapezoid { a, b, lower, upper } => {
                Domain::trapezoid(T::lit(*a), T::lit(*b), lits(lower), lits(upper))
            }
            DomainDescription::Polygon { vertices, split } => {
                let poly = Polygon::new(vertices.iter().map(|&p| pt(p)).collect())?.with_split(*split);
                Ok(Domain::Polygon(poly))
            }
            DomainDescription::Square { bounds: [x0, x1, y0, y1] } => {
                Ok(Domain::Square(Rect::new(T::lit(*x0), T::lit(*x1), T::lit(*y0), T::lit(*y1))?))
            }
        }
    }
}

impl<T: Real> Domain<T> {
    pub fn describe(&self) -> DomainDescription {
        let f = |p: &Point2<T>| [p.x.to_f64_lossy(), p.y.to_f64_lossy()];
        let fs = |c: &Poly1<T>| c.0.iter().map(|v| v.to_f64_lossy()).collect();
        match self {
            Domain::UnitDisk => DomainDescription::Disk,
            Domain::Triangle { u, v, w } => DomainDescription::Triangle { vertices: [f(u), f(v), f(w)] },
            Domain::PolyTrapezoid { a, b, lower, upper } => DomainDescription::Trapezoid {
                a: a.to_f64_lossy(),
                b: b.to_f64_lossy(),
                lower: fs(lower),
                upper: fs(upper),
            },
            Domain::Polygon(p) => {
                DomainDescription::Polygon { vertices: p.vertices.iter().map(f).collect(), split: p.split }
            }
            Domain::Square(r) => {
                DomainDescription::Square { bounds: [r.x_lo, r.x_hi, r.y_lo, r.y_hi].map(|v| v.to_f64_lossy()) }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    type P = Point2<f64>;

    fn close(a: P, b: P, tol: f64) -> bool {
        a.dist(b) <= tol
    }

    #[test]
    fn polar_map_examples() {
        assert_eq!(polar_map(1.0, 0.0).unwrap(), P::new(1.0, 0.0));
        for phi in [0.0, 1.0, 3.0, 2.0 * PI] {
            assert_eq!(polar_map(0.0, phi).unwrap().norm(), 0.0);
        }
        assert!(close(polar_map(0.5, PI / 2.0).unwrap(), P::new(0.0, 0.5), 1e-16));
        assert!(matches!(polar_map(1.5, 0.0), Err(Error::OutOfRange { .. })));
        assert!(polar_map(-0.1, 0.0).is_err());
    }

    #[test]
    fn duffy_map_corners() {
        let (u, v, w) = (P::new(0.3, -1.0), P::new(2.0, 0.5), P::new(-0.5, 1.5));
        assert!(close(duffy_map(u, v, w, P::new(-1.0, -1.0)).unwrap(), u, 1e-15));
        assert!(close(duffy_map(u, v, w, P::new(1.0, -1.0)).unwrap(), v, 1e-15));
        for y1 in [-1.0, -0.3, 0.0, 0.7, 1.0] {
            assert!(close(duffy_map(u, v, w, P::new(y1, 1.0)).unwrap(), w, 1e-15));
        }
        assert!(matches!(
            duffy_map(P::new(0.0, 0.0), P::new(1.0, 1.0), P::new(2.0, 2.0), P::new(0.0, 0.0)),
            Err(Error::DegenerateTriangle)
        ));
    }

    #[test]
    fn trapezoid_map_examples() {
        let square = Domain::trapezoid(0.0, 1.0, vec![0.0], vec![1.0]).unwrap();
        assert_eq!(trapezoid_map(&square, P::new(0.0, 0.0)).unwrap(), P::new(0.5, 0.5));
        let dom = Domain::trapezoid(-1.0, 2.0, vec![-1.0, 0.2], vec![1.0, 0.0, 0.3]).unwrap();
        let Domain::PolyTrapezoid { upper, .. } = &dom else { unreachable!() };
        for y2 in [-1.0, 0.0, 0.4] {
            assert_eq!(trapezoid_map(&dom, P::new(-1.0, y2)).unwrap().x, -1.0);
        }
        let p = trapezoid_map(&dom, P::new(0.3, 1.0)).unwrap();
        assert!((p.y - upper.eval(p.x)).abs() < 1e-15);
        assert_eq!(dom.map_degree(), Some(3));
        assert!(trapezoid_map(&Domain::<f64>::UnitDisk, P::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn trapezoid_rejects_crossing_graphs() {
        assert!(Domain::trapezoid(0.0, 1.0, vec![0.0, 1.0], vec![0.5]).is_err());
        assert!(Domain::trapezoid(1.0, 1.0, vec![0.0], vec![1.0]).is_err());
    }

    fn unit_square_poly() -> Polygon<f64> {
        Polygon::new(vec![P::new(0.0, 0.0), P::new(1.0, 0.0), P::new(1.0, 1.0), P::new(0.0, 1.0)]).unwrap()
    }

    #[test]
    fn square_triangulates_into_two() {
        let pieces = decompose_polygon(&unit_square_poly()).unwrap();
        assert_eq!(pieces.len(), 2);
        let area: f64 = pieces.iter().map(Domain::area).sum();
        assert!((area - 1.0).abs() < 1e-15);
    }

    #[test]
    fn triangle_polygon_is_one_piece() {
        let t = Polygon::new(vec![P::new(0.0, 0.0), P::new(2.0, 0.0), P::new(0.5, 1.0)]).unwrap();
        let pieces = decompose_polygon(&t).unwrap();
        assert_eq!(pieces.len(), 1);
        assert!((pieces[0].area() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn hexagon_areas_match_shoelace() {
        let hex: Vec<P> = (0..6)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / 6.0 + 0.1;
                P::new((1.0 + 0.1 * k as f64) * t.cos(), t.sin())
            })
            .collect();
        let shoelace = signed_area(&hex).abs();
        let poly = Polygon::new(hex).unwrap();
        let pieces = decompose_polygon(&poly).unwrap();
        assert_eq!(pieces.len(), 4);
        let sum: f64 = pieces.iter().map(Domain::area).sum();
        assert!((sum - shoelace).abs() < 1e-12);
    }

    #[test]
    fn clockwise_input_is_reoriented() {
        let p = Polygon::new(vec![P::new(0.0, 0.0), P::new(0.0, 1.0), P::new(1.0, 1.0), P::new(1.0, 0.0)]).unwrap();
        assert!(p.area() > 0.0);
    }

    #[test]
    fn bowtie_names_offending_edges() {
        let err =
            Polygon::new(vec![P::new(0.0, 0.0), P::new(1.0, 1.0), P::new(1.0, 0.0), P::new(0.0, 1.0)]).unwrap_err();
        match err {
            Error::SelfIntersecting { first, second } => assert_eq!((first, second), (0, 2)),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn repeated_vertex_rejected() {
        let err =
            Polygon::new(vec![P::new(0.0, 0.0), P::new(1.0, 0.0), P::new(1.0, 1.0), P::new(1.0, 0.0)]).unwrap_err();
        assert!(matches!(err, Error::RepeatedVertex { index: 3, previous: 1 }));
    }

    #[test]
    fn nonconvex_polygon_triangulation_and_panels() {
        // notch on the top edge
        let v = vec![P::new(0.0, 0.0), P::new(1.0, 0.0), P::new(1.0, 1.0), P::new(0.5, 0.6), P::new(0.0, 1.0)];
        let poly = Polygon::new(v).unwrap();
        let tris = decompose_polygon(&poly).unwrap();
        assert_eq!(tris.len(), 3);
        let panels = trapezoid_panels(&poly).unwrap();
        assert_eq!(panels.len(), 2);
        for pieces in [&tris, &panels] {
            let sum: f64 = pieces.iter().map(Domain::area).sum();
            assert!((sum - poly.area()).abs() < 1e-14);
        }
    }

    #[test]
    fn panels_refuse_spiral_like_polygon() {
        // C shape open to the right: a vertical line crosses four edges
        let v = vec![
            P::new(0.0, 0.0),
            P::new(1.0, 0.0),
            P::new(1.0, 0.3),
            P::new(0.3, 0.3),
            P::new(0.3, 0.7),
            P::new(1.0, 0.7),
            P::new(1.0, 1.0),
            P::new(0.0, 1.0),
        ];
        let poly = Polygon::new(v).unwrap();
        assert!(trapezoid_panels(&poly).is_none());
        let dom = Domain::Polygon(poly.clone());
        let pieces = dom.pieces().unwrap();
        assert_eq!(pieces.len(), 6);
        let sum: f64 = pieces.iter().map(Domain::area).sum();
        assert!((sum - poly.area()).abs() < 1e-14);
    }

    #[test]
    fn json_round_trip() {
        let json = r#"{"kind":"polygon","vertices":[[0,0],[1,0],[0.5,1]]}"#;
        let d = DomainDescription::parse(json).unwrap();
        let dom: Domain<f64> = d.build().unwrap();
        assert_eq!(dom.describe(), d);
        let disk: Domain<f64> = DomainDescription::parse(r#"{"kind":"disk"}"#).unwrap().build().unwrap();
        assert_eq!(disk, Domain::UnitDisk);
        assert!(DomainDescription::parse(r#"{"kind":"blob"}"#).is_err());
    }
}
