//! Reproduction of the numbered benchmark tables: cardinalities, Lebesgue
//! constants and uniform errors over a sequence of degrees.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::approx::{least_squares_in, uniform_error, Evaluator, TestFunction};
use crate::basis::{poly_dim, Basis, BasisFamily, BasisSpec};
use crate::catalog::{self, Benchmark};
use crate::error::{Error, Result};
use crate::fekete::{extract_afp_with, RefineMethod, DEFAULT_REFINE};
use crate::io::MetricRow;
use crate::mesh::{self, DEFAULT_AM_CAP};

pub const DEGREES: [usize; 6] = [5, 10, 15, 20, 25, 30];
pub const DEFAULT_CONTROL_FACTOR: usize = 4;
const TESTS: [TestFunction; 3] = [TestFunction::Entire, TestFunction::Runge, TestFunction::Cusp];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableConfig {
    pub degrees: Vec<usize>,
    pub am_cap: usize,
    /// The control mesh is the WAM of degree `control_factor * n`.
    pub control_factor: usize,
}

impl Default for TableConfig {
    fn default() -> Self {
        Self { degrees: DEGREES.to_vec(), am_cap: DEFAULT_AM_CAP, control_factor: DEFAULT_CONTROL_FACTOR }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Cell {
    Count(usize),
    /// Printed to the nearest integer.
    Rounded(f64),
    /// Printed with one significant digit.
    Sci(f64),
    /// Printed as `∗`.
    Failed(String),
}

impl Cell {
    pub fn value(&self) -> Option<f64> {
        match *self {
            Cell::Count(c) => Some(c as f64),
            Cell::Rounded(v) | Cell::Sci(v) => Some(v),
            Cell::Failed(_) => None,
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Count(c) => write!(f, "{c}"),
            Cell::Rounded(v) => write!(f, "{v:.0}"),
            Cell::Sci(v) => write!(f, "{v:.0E}"),
            Cell::Failed(_) => f.write_str("∗"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub group: String,
    pub label: String,
    pub cells: Vec<Cell>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Table {
    pub id: u8,
    pub title: String,
    pub degrees: Vec<usize>,
    pub rows: Vec<Row>,
    pub metrics: Vec<MetricRow>,
}

impl Table {
    fn new(id: u8, title: &str, degrees: &[usize]) -> Self {
        Self { id, title: title.into(), degrees: degrees.to_vec(), rows: Vec::new(), metrics: Vec::new() }
    }

    pub fn row(&self, group: &str, label: &str) -> Option<&Row> {
        self.rows.iter().find(|r| r.group == group && r.label == label)
    }

    /// Aligned plain-text rendering.
    pub fn render(&self) -> String {
        let grouped = self.rows.iter().any(|r| !r.group.is_empty());
        let mut lines: Vec<Vec<String>> = Vec::with_capacity(self.rows.len() + 1);
        let mut head = Vec::new();
        if grouped {
            head.push(String::new());
        }
        head.push(String::new());
        head.extend(self.degrees.iter().map(|n| format!("n={n}")));
        lines.push(head);
        let mut last_group = None;
        for r in &self.rows {
            let mut line = Vec::new();
            if grouped {
                line.push(if last_group == Some(&r.group) { String::new() } else { r.group.clone() });
                last_group = Some(&r.group);
            }
            line.push(r.label.clone());
            line.extend(r.cells.iter().map(|c| c.to_string()));
            lines.push(line);
        }
        let cols = lines.iter().map(Vec::len).max().unwrap_or(0);
        let width: Vec<usize> = (0..cols)
            .map(|j| lines.iter().filter_map(|l| l.get(j)).map(|s| s.chars().count()).max().unwrap_or(0))
            .collect();
        let mut out = format!("Table {}. {}\n", self.id, self.title);
        for (k, l) in lines.iter().enumerate() {
            let text: Vec<String> = l
                .iter()
                .enumerate()
                .map(|(j, s)| {
                    let pad = width[j] - s.chars().count();
                    if j < cols - self.degrees.len() {
                        format!("{s}{}", " ".repeat(pad))
                    } else {
                        format!("{}{s}", " ".repeat(pad))
                    }
                })
                .collect();
            out.push_str(text.join("  ").trim_end());
            out.push('\n');
            if k == 0 {
                let total = width.iter().sum::<usize>() + 2 * cols.saturating_sub(1);
                out.push_str(&"-".repeat(total));
                out.push('\n');
            }
        }
        out
    }
}

/// Everything the Che(2) tables need for one domain at one degree.
#[derive(Clone, Debug, PartialEq)]
pub struct DomainRun {
    pub mesh_len: usize,
    pub nodes: usize,
    pub lebesgue: f64,
    pub least_squares: [f64; 3],
    pub interpolation: [f64; 3],
}

/// Builds tables, sharing per-(domain, degree) work between them.
pub struct Study {
    pub config: TableConfig,
    runs: HashMap<(&'static str, usize), std::result::Result<DomainRun, String>>,
}

impl Study {
    pub fn new(config: TableConfig) -> Self {
        Self { config, runs: HashMap::new() }
    }

    /// Product Chebyshev basis, default refinement, extraction through the
    /// mesh-orthonormal start.
    pub fn run(&mut self, bench: &Benchmark, n: usize) -> std::result::Result<DomainRun, String> {
        let factor = self.config.control_factor;
        self.runs
            .entry((bench.name, n))
            .or_insert_with(|| compute_run(bench, n, factor).map_err(|e| e.to_string()))
            .clone()
    }

    pub fn table(&mut self, id: u8) -> Result<Table> {
        match id {
            1 => self.table1(),
            2 => self.table2(),
            3 => self.table3(),
            4 => self.table4(),
            5..=9 => {
                let name = catalog::NAMES[id as usize - 4];
                self.error_table(id, &catalog::require(name)?)
            }
            _ => Err(Error::OutOfRange { what: "table id (1..=9)", value: f64::from(id) }),
        }
    }

    fn degrees(&self) -> Vec<usize> {
        self.config.degrees.clone()
    }

    fn table1(&mut self) -> Result<Table> {
        let degrees = self.degrees();
        let dom = catalog::require("disk")?.domain::<f64>();
        let mut t = Table::new(1, "Cardinalities of point sets in the unit disk", &degrees);
        let mut am = Vec::new();
        let mut wam = Vec::new();
        let mut afp = Vec::new();
        for &n in &degrees {
            let m = mesh::wam(&dom, n)?;
            let spec = BasisSpec::for_domain(BasisFamily::ProductChebyshev, n, &dom);
            let res = extract_afp_with(&m, &spec, DEFAULT_REFINE, RefineMethod::Arnoldi)?;
            let counts = [mesh::uniform_am_count(&dom, n), m.len(), res.len()];
            for (metric, c) in ["am_card", "wam_card", "afp_card"].iter().zip(counts) {
                t.metrics.push(MetricRow::new("disk", n, "cheb", DEFAULT_REFINE, metric, Some(c as f64)));
            }
            am.push(Cell::Count(counts[0]));
            wam.push(Cell::Count(counts[1]));
            afp.push(Cell::Count(counts[2]));
        }
        for (label, cells) in [("AM", am), ("WAM", wam), ("AFP", afp)] {
            t.rows.push(Row { group: String::new(), label: label.into(), cells });
        }
        Ok(t)
    }

    /// Literal refinement of each family's Vandermonde; the Lebesgue
    /// constant is measured independently of the basis.
    fn table2(&mut self) -> Result<Table> {
        let degrees = self.degrees();
        let dom = catalog::require("disk")?.domain::<f64>();
        let mut t = Table::new(2, "Lebesgue constants in the unit disk by starting basis", &degrees);
        let setups: Vec<(BasisFamily, &str, usize)> =
            [(BasisFamily::Monomial, "Mon"), (BasisFamily::ProductChebyshev, "Che"), (BasisFamily::LoganShepp, "LoS")]
                .into_iter()
                .flat_map(|(f, l)| [(f, l, 0), (f, l, DEFAULT_REFINE)])
                .collect();
        let mut rows: Vec<Vec<Cell>> = vec![Vec::new(); setups.len()];
        for &n in &degrees {
            let m = mesh::wam(&dom, n)?;
            let control = mesh::control_mesh(&dom, n, self.config.control_factor)?;
            let ev = Evaluator::new(&m, &control, n)?;
            for (k, &(family, _, s)) in setups.iter().enumerate() {
                let spec = BasisSpec::for_domain(family, n, &dom);
                let cell = match extract_afp_with(&m, &spec, s, RefineMethod::Qr) {
                    Ok(res) => Cell::Rounded(ev.lebesgue(&res.indices)?),
                    Err(e) if e.is_numerical() => Cell::Failed(e.to_string()),
                    Err(e) => return Err(e),
                };
                t.metrics.push(MetricRow::new("disk", n, family.as_str(), s, "lebesgue", cell.value()));
                rows[k].push(cell);
            }
        }
        for ((_, label, s), cells) in setups.iter().zip(rows) {
            t.rows.push(Row { group: String::new(), label: format!("{label}({s})"), cells });
        }
        Ok(t)
    }

    fn table3(&mut self) -> Result<Table> {
        let degrees = self.degrees();
        let bench = catalog::require("disk")?;
        let dom = bench.domain::<f64>();
        let mut t = self.error_table_base(3, "Uniform errors in the unit disk", &bench)?;
        // least squares on the uniform admissible mesh, row inserted first in each group
        for (k, &f) in TESTS.iter().enumerate() {
            let mut cells = Vec::new();
            for &n in &degrees {
                let cell = match ls_on_am(&bench, &dom, n, f, &self.config) {
                    Ok(v) => Cell::Sci(v),
                    Err(e) if e.is_numerical() => Cell::Failed(e.to_string()),
                    Err(e) => return Err(e),
                };
                t.metrics.push(MetricRow::new(
                    bench.name,
                    n,
                    "cheb",
                    0,
                    &format!("ls_am_err_t{}", f.id()),
                    cell.value(),
                ));
                cells.push(cell);
            }
            t.rows.insert(3 * k, Row { group: format!("test {}", f.id()), label: "LS AM".into(), cells });
        }
        Ok(t)
    }

    fn table4(&mut self) -> Result<Table> {
        let degrees = self.degrees();
        let mut t = Table::new(4, "Lebesgue constants of the extracted points on the benchmark domains", &degrees);
        for bench in catalog::all() {
            let mut cells = Vec::new();
            for &n in &degrees {
                let cell = match self.run(&bench, n) {
                    Ok(r) => Cell::Rounded(r.lebesgue),
                    Err(e) => Cell::Failed(e),
                };
                t.metrics.push(MetricRow::new(bench.name, n, "cheb", DEFAULT_REFINE, "lebesgue", cell.value()));
                cells.push(cell);
            }
            t.rows.push(Row { group: String::new(), label: bench.label.into(), cells });
        }
        Ok(t)
    }

    fn error_table(&mut self, id: u8, bench: &Benchmark) -> Result<Table> {
        let title = format!("Uniform errors on the {}", bench.label);
        self.error_table_base(id, &title, bench)
    }

    fn error_table_base(&mut self, id: u8, title: &str, bench: &Benchmark) -> Result<Table> {
        let degrees = self.degrees();
        let mut t = Table::new(id, title, &degrees);
        for (k, &f) in TESTS.iter().enumerate() {
            let mut ls = Vec::new();
            let mut ip = Vec::new();
            for &n in &degrees {
                let (a, b) = match self.run(bench, n) {
                    Ok(r) => (Cell::Sci(r.least_squares[k]), Cell::Sci(r.interpolation[k])),
                    Err(e) => (Cell::Failed(e.clone()), Cell::Failed(e)),
                };
                let id = f.id();
                t.metrics.push(MetricRow::new(bench.name, n, "cheb", 0, &format!("ls_wam_err_t{id}"), a.value()));
                t.metrics.push(MetricRow::new(
                    bench.name,
                    n,
                    "cheb",
                    DEFAULT_REFINE,
                    &format!("interp_afp_err_t{id}"),
                    b.value(),
                ));
                ls.push(a);
                ip.push(b);
            }
            let group = format!("test {}", f.id());
            t.rows.push(Row { group: group.clone(), label: "LS WAM".into(), cells: ls });
            t.rows.push(Row { group, label: "interp AFP".into(), cells: ip });
        }
        Ok(t)
    }
}

fn compute_run(bench: &Benchmark, n: usize, control_factor: usize) -> Result<DomainRun> {
    let dom = bench.domain::<f64>();
    let m = mesh::wam(&dom, n)?;
    let control = mesh::control_mesh(&dom, n, control_factor)?;
    let spec = BasisSpec::for_domain(BasisFamily::ProductChebyshev, n, &dom);
    let res = extract_afp_with(&m, &spec, DEFAULT_REFINE, RefineMethod::Arnoldi)?;
    let ev = Evaluator::new(&m, &control, n)?;
    let mut least_squares = [0.0; 3];
    let mut interpolation = [0.0; 3];
    for (k, &f) in TESTS.iter().enumerate() {
        let g = |p| bench.eval(f, p);
        least_squares[k] = ev.least_squares_error(g)?;
        interpolation[k] = ev.interpolation_error(&res.indices, g)?;
    }
    Ok(DomainRun {
        mesh_len: m.len(),
        nodes: res.len(),
        lebesgue: ev.lebesgue(&res.indices)?,
        least_squares,
        interpolation,
    })
}

/// Least squares on the uniform admissible mesh, measured on the same
/// control mesh as the WAM rows.
fn ls_on_am(
    bench: &Benchmark,
    dom: &crate::geometry::Domain<f64>,
    n: usize,
    f: TestFunction,
    cfg: &TableConfig,
) -> Result<f64> {
    let am = mesh::uniform_am(dom, n, cfg.am_cap)?;
    let control = mesh::control_mesh(dom, n, cfg.control_factor)?;
    let values: Vec<f64> = am.points().iter().map(|&p| bench.eval(f, p)).collect();
    debug_assert!(am.len() >= poly_dim(n));
    let fit = least_squares_in(&values, &am, Basis::Discrete { degree: n })?;
    uniform_error(&fit, |p| bench.eval(f, p), &control)
}
