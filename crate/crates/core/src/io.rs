//! Serialized artifacts: point CSVs, JSON sidecars and reports, metric
//! rows, SVG scatter plots.

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fekete::{FeketeResult, RefineMethod, RoundInfo};
use crate::geometry::{Domain, Point2, Rect};
use crate::mesh::{ConstantClass, Mesh, Provenance};

/// Header plus one `x,y` line per point, 17 significant digits.
pub fn write_points_csv<W: Write>(mut w: W, points: &[Point2<f64>]) -> Result<()> {
    writeln!(w, "x,y")?;
    for p in points {
        writeln!(w, "{:.16e},{:.16e}", p.x, p.y)?;
    }
    Ok(())
}

pub fn read_points_csv<R: BufRead>(r: R) -> Result<Vec<Point2<f64>>> {
    let mut out = Vec::new();
    for (k, line) in r.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || (k == 0 && line == "x,y") {
            continue;
        }
        let parsed: Option<Vec<f64>> = line.split(',').map(|s| s.trim().parse().ok()).collect();
        match parsed.as_deref() {
            Some(&[x, y]) => out.push(Point2::new(x, y)),
            _ => return Err(Error::Parse(format!("line {}: expected 'x,y', got '{line}'", k + 1))),
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeshSidecar {
    pub degree: usize,
    pub provenance: Provenance,
    pub cardinality: usize,
    pub constant_class: ConstantClass,
    /// Largest observed `max_K |p| / max_mesh |p|` over random polynomials.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sampled_constant: Option<f64>,
}

impl MeshSidecar {
    pub fn new(mesh: &Mesh<f64>) -> Self {
        Self {
            degree: mesh.degree(),
            provenance: mesh.provenance().clone(),
            cardinality: mesh.len(),
            constant_class: mesh.constant_class(),
            sampled_constant: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AfpReport {
    pub n: usize,
    pub basis: String,
    pub s: usize,
    pub method: RefineMethod,
    pub card_mesh: usize,
    #[serde(rename = "N")]
    pub count: usize,
    /// `None` when `|det|` over- or underflows; the log is always given.
    pub vdm_abs: Option<f64>,
    pub log_vdm_abs: f64,
    pub condition_history: Vec<RoundInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lebesgue: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
}

impl AfpReport {
    pub fn new(res: &FeketeResult<f64>) -> Self {
        let v = res.log_vdm_abs.exp();
        Self {
            n: res.spec.degree,
            basis: res.spec.family.as_str().into(),
            s: res.refine,
            method: res.method,
            card_mesh: res.mesh_len,
            count: res.len(),
            vdm_abs: (v.is_finite() && v > 0.0).then_some(v),
            log_vdm_abs: res.log_vdm_abs,
            condition_history: res.rank_report.rounds.clone(),
            lebesgue: None,
            weights: res.weights.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricRow {
    pub domain: String,
    pub n: usize,
    pub basis: String,
    pub s: usize,
    pub metric: String,
    /// `None` marks a failed computation.
    pub value: Option<f64>,
}

impl MetricRow {
    pub fn new(domain: &str, n: usize, basis: &str, s: usize, metric: &str, value: Option<f64>) -> Self {
        Self { domain: domain.into(), n, basis: basis.into(), s, metric: metric.into(), value }
    }
}

pub const SVG_SIZE: f64 = 600.0;

/// A set of points drawn in one color.
pub struct Layer<'a> {
    pub points: &'a [Point2<f64>],
    pub color: &'a str,
}

/// Square frame around the domain's bounding box, with a 5% margin on
/// each side.
pub fn frame_for(dom: &Domain<f64>) -> Rect<f64> {
    let bb = dom.bbox();
    let side = bb.width().max(bb.height()) * 1.1;
    let (cx, cy) = (0.5 * (bb.x_lo + bb.x_hi), 0.5 * (bb.y_lo + bb.y_hi));
    Rect { x_lo: cx - side / 2.0, x_hi: cx + side / 2.0, y_lo: cy - side / 2.0, y_hi: cy + side / 2.0 }
}

/// 600x600 scatter plot with 2-px circles; later layers are drawn on top.
pub fn svg_scatter(frame: Rect<f64>, layers: &[Layer<'_>]) -> String {
    let sx = SVG_SIZE / frame.width();
    let sy = SVG_SIZE / frame.height();
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="600" height="600" viewBox="0 0 600 600">"#);
    let _ = writeln!(s, r#"<rect width="600" height="600" fill="white"/>"#);
    for layer in layers {
        let _ = writeln!(s, r#"<g fill="{}">"#, layer.color);
        for p in layer.points {
            let x = (p.x - frame.x_lo) * sx;
            let y = (frame.y_hi - p.y) * sy;
            let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="2"/>"#);
        }
        s.push_str("</g>\n");
    }
    s.push_str("</svg>\n");
    s
}
