//! Property checks shared by the property tests and the acceptance report.
//! Each returns a one-line summary, or the first violation.

#![allow(dead_code, clippy::neg_cmp_op_on_partial_ord)]

use geowam::approx::Evaluator;
use geowam::basis::{vandermonde, BasisFamily, BasisSpec};
use geowam::catalog;
use geowam::fekete::{domain_weights, extract_afp_with, greedy_select, refine_matrix, RefineMethod};
use geowam::geometry::Point2;
use geowam::linalg::{HouseholderQr, Matrix};
use geowam::mesh;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Check = Result<String, String>;

pub fn random_poly(n: usize, dom: &geowam::Domain64, rng: &mut ChaCha8Rng) -> impl Fn(Point2<f64>) -> f64 {
    let spec = BasisSpec::for_domain(BasisFamily::ProductChebyshev, n, dom);
    let c: Vec<f64> = (0..spec.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    move |p| spec.eval(p).iter().zip(&c).map(|(a, b)| a * b).sum()
}

/// Largest sampled `max_K |p| / max_mesh |p|` over 200 random polynomials.
pub fn sampled_constant(limit: f64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = (0.0, "", 0);
    for b in catalog::all() {
        let dom = b.domain::<f64>();
        for n in [5, 10, 20, 30] {
            let m = mesh::wam(&dom, n).map_err(|e| e.to_string())?;
            let control = mesh::control_mesh(&dom, n, 3).map_err(|e| e.to_string())?;
            let c = mesh::sampled_wam_constant(&m, &control, dom.bbox(), 200, &mut rng).map_err(|e| e.to_string())?;
            if c > worst.0 {
                worst = (c, b.name, n);
            }
        }
    }
    let msg = format!("max sampled C = {:.2} ({} n={})", worst.0, worst.1, worst.2);
    if worst.0 <= limit {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn subset_log_det(a: &Matrix<f64>, rows: &[usize]) -> f64 {
    HouseholderQr::new(a.select_rows(rows)).log_abs_det()
}

/// Greedy `|det|` against 1000 random subsets per domain and degree.
pub fn determinant_dominance() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut closest = f64::INFINITY;
    for b in catalog::all() {
        let dom = b.domain::<f64>();
        for n in [5, 8] {
            let m = mesh::wam(&dom, n).map_err(|e| e.to_string())?;
            let spec = BasisSpec::for_domain(BasisFamily::ProductChebyshev, n, &dom);
            let v = refine_matrix(vandermonde(&spec, &m).unwrap().entries.transpose(), 2).unwrap().matrix;
            let sel = greedy_select(&v.transpose()).map_err(|e| e.to_string())?;
            let best = subset_log_det(&v, &sel.indices);
            for _ in 0..1000 {
                let rows = sample(&mut rng, m.len(), spec.dim()).into_vec();
                let other = subset_log_det(&v, &rows);
                if other > best + 1e-9 {
                    return Err(format!("{} n={n}: random subset log|det| {other} > greedy {best}", b.name));
                }
                closest = closest.min(best - other);
            }
        }
    }
    Ok(format!("12000 subsets, smallest log-det margin {closest:.1}"))
}

fn det3(a: &Matrix<f64>, c: [usize; 3]) -> f64 {
    let e = |i: usize, j: usize| a[(i, c[j])];
    e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1)) - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0))
        + e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0))
}

/// `|det(greedy)| >= max / 3!` over the 20 column triples of a 3x6 matrix.
pub fn brute_force_ratio(a: &Matrix<f64>) -> Option<f64> {
    let mut best = 0.0f64;
    for i in 0..6 {
        for j in i + 1..6 {
            for k in j + 1..6 {
                best = best.max(det3(a, [i, j, k]).abs());
            }
        }
    }
    if best < 1e-9 {
        return None;
    }
    let sel = greedy_select(a).ok()?;
    let mut c = [sel.indices[0], sel.indices[1], sel.indices[2]];
    c.sort_unstable();
    Some(det3(a, c).abs() / best)
}

pub fn brute_force(trials: usize) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 1.0f64;
    for _ in 0..trials {
        let a = Matrix::from_fn(3, 6, |_, _| rng.gen_range(-1.0..1.0));
        if let Some(r) = brute_force_ratio(&a) {
            worst = worst.min(r);
        }
    }
    let msg = format!("{trials} random 3x6 matrices, worst |det|/max = {worst:.3} (bound 1/6)");
    if worst >= 1.0 / 6.0 - 1e-12 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

pub fn weight_sums() -> Check {
    let mut worst = 0.0f64;
    for b in catalog::all() {
        let dom = b.domain::<f64>();
        for n in [5, 10, 15] {
            let m = mesh::wam(&dom, n).map_err(|e| e.to_string())?;
            let spec = BasisSpec::for_domain(BasisFamily::ProductChebyshev, n, &dom);
            for method in [RefineMethod::Qr, RefineMethod::Arnoldi] {
                let res = extract_afp_with(&m, &spec, 2, method).map_err(|e| e.to_string())?;
                let w = domain_weights(&res, &dom).map_err(|e| e.to_string())?;
                let gap = (w.iter().sum::<f64>() - dom.area()).abs();
                if !(gap < 1e-10) {
                    return Err(format!("{} n={n} {method:?}: |sum w - area| = {gap:e}", b.name));
                }
                worst = worst.max(gap);
            }
        }
    }
    Ok(format!("max |sum w - area| = {worst:.1e}"))
}

/// Least squares on the WAM and interpolation at the extracted points
/// reproduce random polynomials of the same degree.
pub fn reproduction() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    for b in catalog::all() {
        let dom = b.domain::<f64>();
        for n in [5, 12, 20] {
            let m = mesh::wam(&dom, n).map_err(|e| e.to_string())?;
            let control = mesh::control_mesh(&dom, n, 4).map_err(|e| e.to_string())?;
            let spec = BasisSpec::for_domain(BasisFamily::ProductChebyshev, n, &dom);
            let res = extract_afp_with(&m, &spec, 2, RefineMethod::Arnoldi).map_err(|e| e.to_string())?;
            let ev = Evaluator::new(&m, &control, n).map_err(|e| e.to_string())?;
            let p = random_poly(n, &dom, &mut rng);
            let scale = control.points().iter().fold(0.0f64, |a, &x| a.max(p(x).abs()));
            let f = |x| p(x) / scale;
            let ls = ev.least_squares_error(f).map_err(|e| e.to_string())?;
            let ip = ev.interpolation_error(&res.indices, f).map_err(|e| e.to_string())?;
            if !(ls < 1e-10 && ip < 1e-10) {
                return Err(format!("{} n={n}: ls {ls:e} interp {ip:e}", b.name));
            }
            worst = worst.max(ls).max(ip);
        }
    }
    Ok(format!("max error on P_n = {worst:.1e}"))
}
