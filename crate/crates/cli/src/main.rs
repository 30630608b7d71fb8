use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::rngs::StdRng;
use rand::SeedableRng;

use geowam::approx::{Evaluator, TestFunction};
use geowam::basis::{BasisFamily, BasisSpec};
use geowam::catalog;
use geowam::fekete::{domain_weights, extract_afp_with, RefineMethod};
use geowam::geometry::{DomainDescription, Point2};
use geowam::io::{self, AfpReport, Layer, MeshSidecar, MetricRow};
use geowam::mesh::{self, DEFAULT_AM_CAP};
use geowam::tables::{Study, TableConfig, DEFAULT_CONTROL_FACTOR};
use geowam::{Domain64, Error, Mesh64, Result};

#[derive(Parser)]
#[command(name = "geowam", version, about = "Weakly admissible meshes and approximate Fekete points on planar domains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Weakly admissible mesh of a domain (or the uniform admissible mesh with --am).
    Mesh(MeshArgs),
    /// Uniform admissible mesh of a domain.
    Am(MeshArgs),
    /// Approximate Fekete points extracted from the WAM.
    Afp(AfpArgs),
    /// Lebesgue constants of the extracted points.
    Leb(MetricArgs),
    /// Uniform errors of least squares on the WAM and interpolation at the extracted points.
    Approx(ApproxArgs),
    /// Recompute one of the benchmark tables (1..=9).
    Table(TableArgs),
}

#[derive(Args)]
struct DomainArg {
    /// Catalog name (disk, simplex, linear-trapezoid, cubic-trapezoid,
    /// convex-polygon, nonconvex-polygon), inline JSON or a JSON file.
    #[arg(long)]
    domain: String,
}

#[derive(Args)]
struct MeshArgs {
    #[command(flatten)]
    domain: DomainArg,
    #[arg(long)]
    n: usize,
    /// Uniform admissible mesh instead of the WAM.
    #[arg(long)]
    am: bool,
    /// Refuse uniform meshes whose projected Vandermonde size exceeds this.
    #[arg(long, default_value_t = DEFAULT_AM_CAP)]
    am_cap: usize,
    /// Estimate the mesh constant from this many random polynomials.
    #[arg(long)]
    sample_constant: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_CONTROL_FACTOR)]
    control_factor: usize,
    /// Points CSV; the JSON sidecar goes next to it. Without it the CSV goes
    /// to stdout and the sidecar to stderr.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Qr,
    Arnoldi,
}

impl From<Method> for RefineMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::Qr => RefineMethod::Qr,
            Method::Arnoldi => RefineMethod::Arnoldi,
        }
    }
}

#[derive(Args)]
struct ExtractArgs {
    /// mon | cheb | logan-shepp
    #[arg(long, default_value = "cheb", value_parser = parse_basis)]
    basis: BasisFamily,
    /// Refinement rounds s.
    #[arg(long = "refine", default_value_t = 2)]
    refine: usize,
    /// How the refined basis is formed: literal QR rounds on the family
    /// Vandermonde, or the same rounds from a mesh-orthonormal start.
    #[arg(long, value_enum, default_value = "qr")]
    method: Method,
    #[arg(long, default_value_t = DEFAULT_CONTROL_FACTOR)]
    control_factor: usize,
}

#[derive(Args)]
struct AfpArgs {
    #[command(flatten)]
    domain: DomainArg,
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    extract: ExtractArgs,
    /// Add the Lebesgue constant to the report.
    #[arg(long)]
    lebesgue: bool,
    /// Add cubature weights to the report.
    #[arg(long)]
    weights: bool,
    /// Selected points CSV; the JSON report goes next to it.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Mesh in grey with the selected points on top.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct MetricArgs {
    #[command(flatten)]
    domain: DomainArg,
    /// Degree or comma-separated degrees.
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    #[command(flatten)]
    extract: ExtractArgs,
    /// JSON metric rows; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ApproxArgs {
    #[command(flatten)]
    metric: MetricArgs,
    /// Test functions (1 entire, 2 Runge-like, 3 cusp).
    #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
    test: Vec<u8>,
}

#[derive(Args)]
struct TableArgs {
    /// Table number, 1..=9.
    id: u8,
    /// Override the degrees (comma separated).
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    #[arg(long, default_value_t = DEFAULT_AM_CAP)]
    am_cap: usize,
    #[arg(long, default_value_t = DEFAULT_CONTROL_FACTOR)]
    control_factor: usize,
    /// JSON copy of the table; the text goes to stdout either way.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_basis(s: &str) -> std::result::Result<BasisFamily, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// A resolved `--domain` argument.
struct Target {
    name: String,
    domain: Domain64,
    /// Test functions are composed with `(x, y) -> (2x-1, 2y-1)`.
    unit_square: bool,
}

impl Target {
    fn resolve(arg: &str) -> Result<Self> {
        if let Some(b) = catalog::lookup(arg) {
            return Ok(Self { name: b.name.into(), domain: b.domain(), unit_square: b.unit_square });
        }
        let text = if arg == "square" {
            r#"{"kind":"square"}"#.to_string()
        } else if arg.trim_start().starts_with('{') {
            arg.to_string()
        } else if Path::new(arg).is_file() {
            fs::read_to_string(arg)?
        } else {
            catalog::require(arg)?;
            unreachable!("lookup failed, so require fails too");
        };
        let domain = DomainDescription::parse(&text)?.build()?;
        Ok(Self { name: domain.kind().into(), domain, unit_square: false })
    }

    fn eval(&self, f: TestFunction, p: Point2<f64>) -> f64 {
        if self.unit_square {
            f.eval_unit_square(p)
        } else {
            f.eval(p)
        }
    }
}

fn check_degree(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::DegreeTooSmall { min: 1, got: 0 });
    }
    Ok(())
}

fn sibling(path: &Path, ext: &str) -> PathBuf {
    path.with_extension(ext)
}

fn write_csv(out: Option<&Path>, points: &[Point2<f64>]) -> Result<()> {
    match out {
        Some(p) => io::write_points_csv(std::io::BufWriter::new(fs::File::create(p)?), points),
        None => io::write_points_csv(std::io::stdout().lock(), points),
    }
}

/// Sidecar next to `out`, or on stderr.
fn write_sidecar<S: serde::Serialize>(out: Option<&Path>, value: &S) -> Result<()> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    match out {
        Some(p) => fs::write(sibling(p, "json"), text)?,
        None => eprint!("{text}"),
    }
    Ok(())
}

fn write_json<S: serde::Serialize>(out: Option<&Path>, value: &S) -> Result<()> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    match out {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_mesh(a: &MeshArgs, force_am: bool) -> Result<()> {
    check_degree(a.n)?;
    let t = Target::resolve(&a.domain.domain)?;
    let m: Mesh64 =
        if a.am || force_am { mesh::uniform_am(&t.domain, a.n, a.am_cap)? } else { mesh::wam(&t.domain, a.n)? };
    let mut sidecar = MeshSidecar::new(&m);
    if let Some(samples) = a.sample_constant {
        let control = mesh::control_mesh(&t.domain, a.n, a.control_factor)?;
        let mut rng = StdRng::seed_from_u64(a.seed);
        sidecar.sampled_constant = Some(mesh::sampled_wam_constant(&m, &control, t.domain.bbox(), samples, &mut rng)?);
    }
    write_csv(a.out.as_deref(), m.points())?;
    write_sidecar(a.out.as_deref(), &sidecar)?;
    if let Some(svg) = &a.svg {
        let layers = [Layer { points: m.points(), color: "black" }];
        fs::write(svg, io::svg_scatter(io::frame_for(&t.domain), &layers))?;
    }
    Ok(())
}

fn cmd_afp(a: &AfpArgs) -> Result<()> {
    check_degree(a.n)?;
    let t = Target::resolve(&a.domain.domain)?;
    let m = mesh::wam(&t.domain, a.n)?;
    let spec = BasisSpec::for_domain(a.extract.basis, a.n, &t.domain);
    let res = extract_afp_with(&m, &spec, a.extract.refine, a.extract.method.into())?;
    let mut report = AfpReport::new(&res);
    if a.lebesgue {
        let control = mesh::control_mesh(&t.domain, a.n, a.extract.control_factor)?;
        report.lebesgue = Some(Evaluator::new(&m, &control, a.n)?.lebesgue(&res.indices)?);
    }
    if a.weights {
        report.weights = Some(domain_weights(&res, &t.domain)?);
    }
    write_csv(a.out.as_deref(), &res.points)?;
    write_sidecar(a.out.as_deref(), &report)?;
    if let Some(svg) = &a.svg {
        let layers = [Layer { points: m.points(), color: "#bbbbbb" }, Layer { points: &res.points, color: "#d62728" }];
        fs::write(svg, io::svg_scatter(io::frame_for(&t.domain), &layers))?;
    }
    Ok(())
}

/// Runs `f` with the mesh, extraction and evaluator for each requested degree.
fn per_degree(
    a: &MetricArgs,
    mut f: impl FnMut(&Target, usize, &[usize], &Evaluator<'_, f64>) -> Result<()>,
) -> Result<()> {
    let t = Target::resolve(&a.domain.domain)?;
    for &n in &a.n {
        check_degree(n)?;
        let m = mesh::wam(&t.domain, n)?;
        let control = mesh::control_mesh(&t.domain, n, a.extract.control_factor)?;
        let spec = BasisSpec::for_domain(a.extract.basis, n, &t.domain);
        let res = extract_afp_with(&m, &spec, a.extract.refine, a.extract.method.into())?;
        let ev = Evaluator::new(&m, &control, n)?;
        f(&t, n, &res.indices, &ev)?;
    }
    Ok(())
}

fn cmd_leb(a: &MetricArgs) -> Result<()> {
    let mut rows = Vec::new();
    let (basis, s) = (a.extract.basis.as_str(), a.extract.refine);
    per_degree(a, |t, n, idx, ev| {
        rows.push(MetricRow::new(&t.name, n, basis, s, "lebesgue", Some(ev.lebesgue(idx)?)));
        Ok(())
    })?;
    write_json(a.out.as_deref(), &rows)
}

fn cmd_approx(a: &ApproxArgs) -> Result<()> {
    let tests = a.test.iter().map(|&k| TestFunction::from_id(k)).collect::<Result<Vec<_>>>()?;
    let m = &a.metric;
    let (basis, s) = (m.extract.basis.as_str(), m.extract.refine);
    let mut rows = Vec::new();
    per_degree(m, |t, n, idx, ev| {
        for &f in &tests {
            let g = |p| t.eval(f, p);
            let k = f.id();
            rows.push(MetricRow::new(
                &t.name,
                n,
                basis,
                0,
                &format!("ls_wam_err_t{k}"),
                Some(ev.least_squares_error(g)?),
            ));
            let ip = ev.interpolation_error(idx, g)?;
            rows.push(MetricRow::new(&t.name, n, basis, s, &format!("interp_afp_err_t{k}"), Some(ip)));
        }
        Ok(())
    })?;
    write_json(m.out.as_deref(), &rows)
}

fn cmd_table(a: &TableArgs) -> Result<()> {
    let mut cfg = TableConfig { am_cap: a.am_cap, control_factor: a.control_factor, ..TableConfig::default() };
    if let Some(n) = &a.n {
        n.iter().try_for_each(|&d| check_degree(d))?;
        cfg.degrees = n.clone();
    }
    let table = Study::new(cfg).table(a.id)?;
    print!("{}", table.render());
    if let Some(out) = &a.out {
        fs::write(out, serde_json::to_string_pretty(&table)? + "\n")?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Mesh(a) => cmd_mesh(a, false),
        Command::Am(a) => cmd_mesh(a, true),
        Command::Afp(a) => cmd_afp(a),
        Command::Leb(a) => cmd_leb(a),
        Command::Approx(a) => cmd_approx(a),
        Command::Table(a) => cmd_table(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 3 } else { 2 })
        }
    }
}
