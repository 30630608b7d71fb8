//! Gauss rules on the supported domains, used for basis moments.

use crate::error::{Error, Result};
use crate::geometry::{Domain, Point2};
use crate::scalar::Real;

/// Gauss-Legendre nodes and weights on `[-1, 1]` (Newton on `P_q`).
pub fn gauss_legendre<T: Real>(q: usize) -> (Vec<T>, Vec<T>) {
    let mut nodes = vec![T::zero(); q];
    let mut weights = vec![T::zero(); q];
    let qq = T::from_usize_lossy(q);
    for i in 0..q.div_ceil(2) {
        let mut x = (T::PI() * (T::from_usize_lossy(i) + T::lit(0.75)) / (qq + T::lit(0.5))).cos();
        let mut dp = T::one();
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(q, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= T::epsilon() * T::lit(4.0) {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(q, x);
        dp = if d.is_finite() { d } else { dp };
        let w = T::lit(2.0) / ((T::one() - x * x) * dp * dp);
        nodes[i] = x;
        nodes[q - 1 - i] = -x;
        weights[i] = w;
        weights[q - 1 - i] = w;
    }
    if q % 2 == 1 {
        nodes[q / 2] = T::zero();
    }
    (nodes, weights)
}

fn legendre_with_derivative<T: Real>(q: usize, x: T) -> (T, T) {
    let (mut p0, mut p1) = (T::one(), x);
    if q == 0 {
        return (T::one(), T::zero());
    }
    for k in 2..=q {
        let kk = T::from_usize_lossy(k);
        let p2 = ((kk + kk - T::one()) * x * p1 - (kk - T::one()) * p0) / kk;
        p0 = p1;
        p1 = p2;
    }
    let d = T::from_usize_lossy(q) * (x * p1 - p0) / (x * x - T::one());
    (p1, d)
}

/// Weighted point set approximating the integral over a domain.
#[derive(Clone, Debug)]
pub struct QuadratureRule<T> {
    pub points: Vec<Point2<T>>,
    pub weights: Vec<T>,
}

impl<T: Real> QuadratureRule<T> {
    pub fn integrate(&self, f: impl Fn(Point2<T>) -> T) -> T {
        self.points.iter().zip(&self.weights).map(|(&p, &w)| w * f(p)).sum()
    }
}

/// Rule exact for all polynomials of total degree `<= degree` on `dom`.
pub fn domain_rule<T: Real>(dom: &Domain<T>, degree: usize) -> Result<QuadratureRule<T>> {
    let mut rule = QuadratureRule { points: Vec::new(), weights: Vec::new() };
    match dom {
        Domain::UnitDisk => {
            // r^j cos/sin(k phi) pieces times the Jacobian r
            let (xr, wr) = gauss_legendre::<T>((degree + 2).div_ceil(2));
            let nphi = degree + 1;
            let dphi = T::TAU() / T::from_usize_lossy(nphi);
            let half = T::lit(0.5);
            for (&x, &w) in xr.iter().zip(&wr) {
                let r = half * (x + T::one());
                for k in 0..nphi {
                    let phi = dphi * T::from_usize_lossy(k);
                    rule.points.push(Point2::new(r * phi.cos(), r * phi.sin()));
                    rule.weights.push(half * w * r * dphi);
                }
            }
        }
        Domain::Polygon(_) => {
            for piece in dom.pieces()? {
                let sub = domain_rule(&piece, degree)?;
                rule.points.extend(sub.points);
                rule.weights.extend(sub.weights);
            }
        }
        _ => {
            let k = dom.map_degree().ok_or_else(|| Error::InvalidDomain("no polynomial map".into()))?;
            // composed integrand degree per reference axis, Jacobian included
            let q = (k * degree + k + 1).div_ceil(2);
            let (x, w) = gauss_legendre::<T>(q);
            for (&y1, &w1) in x.iter().zip(&w) {
                for (&y2, &w2) in x.iter().zip(&w) {
                    let y = Point2::new(y1, y2);
                    rule.points.push(dom.map_unchecked(y));
                    rule.weights.push(w1 * w2 * dom.jacobian(y));
                }
            }
        }
    }
    Ok(rule)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_exactness() {
        for q in 1..=20 {
            let (x, w) = gauss_legendre::<f64>(q);
            for deg in 0..2 * q {
                let num: f64 = x.iter().zip(&w).map(|(&xi, &wi)| wi * xi.powi(deg as i32)).sum();
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((num - exact).abs() < 1e-13, "q={q} deg={deg}");
            }
        }
    }

    #[test]
    fn areas_and_second_moments() {
        let disk = domain_rule::<f64>(&Domain::UnitDisk, 4).unwrap();
        assert!((disk.integrate(|_| 1.0) - std::f64::consts::PI).abs() < 1e-14);
        assert!((disk.integrate(|p| p.x * p.x + p.y * p.y) - std::f64::consts::FRAC_PI_2).abs() < 1e-14);
        let simplex = domain_rule::<f64>(&Domain::unit_simplex(), 3).unwrap();
        assert!((simplex.integrate(|_| 1.0) - 0.5).abs() < 1e-15);
        // int_T x^2 y = 2! 1! / 5! = 1/60
        assert!((simplex.integrate(|p| p.x * p.x * p.y) - 1.0 / 60.0).abs() < 1e-15);
        let trap = Domain::<f64>::trapezoid(-1.0, 1.0, vec![-1.0, 0.0, 0.0, 0.5], vec![1.0, 0.3]).unwrap();
        let rule = domain_rule(&trap, 2).unwrap();
        assert!((rule.integrate(|_| 1.0) - trap.area()).abs() < 1e-14);
    }
}
