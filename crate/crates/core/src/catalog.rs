//! The six benchmark domains used by the tables, addressable by name.

use crate::approx::TestFunction;
use crate::error::{Error, Result};
use crate::geometry::{Domain, DomainDescription, Point2, PolygonSplit};
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
pub struct Benchmark {
    /// Command-line name, e.g. `linear-trapezoid`.
    pub name: &'static str,
    /// Row label in the tables.
    pub label: &'static str,
    pub description: DomainDescription,
    /// Test functions are composed with `(x, y) -> (2x - 1, 2y - 1)`.
    pub unit_square: bool,
}

impl Benchmark {
    pub fn domain<T: Real>(&self) -> Domain<T> {
        self.description.build().expect("catalog domains are valid")
    }

    /// The test function as used on this domain.
    pub fn eval<T: Real>(&self, f: TestFunction, p: Point2<T>) -> T {
        if self.unit_square {
            f.eval_unit_square(p)
        } else {
            f.eval(p)
        }
    }
}

pub const NAMES: [&str; 6] =
    ["disk", "simplex", "linear-trapezoid", "cubic-trapezoid", "convex-polygon", "nonconvex-polygon"];

/// All benchmarks in table order.
pub fn all() -> Vec<Benchmark> {
    NAMES.iter().map(|n| lookup(n).expect("listed")).collect()
}

pub fn lookup(name: &str) -> Option<Benchmark> {
    let polygon = |v: &[[f64; 2]]| DomainDescription::Polygon { vertices: v.to_vec(), split: PolygonSplit::default() };
    let (name, label, description, unit_square) = match name {
        "disk" => ("disk", "disk", DomainDescription::Disk, false),
        "simplex" => ("simplex", "simplex", DomainDescription::Simplex, false),
        "linear-trapezoid" => (
            "linear-trapezoid",
            "linear trap",
            DomainDescription::Trapezoid { a: -1.0, b: 1.0, lower: vec![-0.8, 0.4], upper: vec![0.8, -0.4] },
            false,
        ),
        "cubic-trapezoid" => (
            "cubic-trapezoid",
            "cubic trap",
            DomainDescription::Trapezoid {
                a: -1.0,
                b: 1.0,
                lower: vec![-0.8, 0.0, 0.0, 0.3],
                upper: vec![0.8, 0.2, -0.5, 0.0],
            },
            false,
        ),
        "convex-polygon" => (
            "convex-polygon",
            "conv polyg",
            polygon(&[[0.1, 0.0], [0.7, 0.2], [1.0, 0.5], [0.75, 0.85], [0.5, 1.0], [0.0, 0.25]]),
            true,
        ),
        "nonconvex-polygon" => (
            "nonconvex-polygon",
            "nonconv polyg",
            polygon(&[[0.1, 0.1], [0.9, 0.2], [0.6, 0.5], [0.9, 0.9], [0.1, 0.8]]),
            true,
        ),
        _ => return None,
    };
    Some(Benchmark { name, label, description, unit_square })
}

pub fn require(name: &str) -> Result<Benchmark> {
    lookup(name).ok_or_else(|| Error::Parse(format!("unknown domain '{name}' (known: {})", NAMES.join(", "))))
}
