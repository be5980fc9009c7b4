//! `tmc`: total mean curvature of convex bodies from the command line.

mod output;
mod shape_spec;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tmc::catalog::{catalog, CatalogEntry};
use tmc::curvature::{
    cube_closed_form, default_excision, mean_curvature_classical, mean_curvature_pedal, mean_curvature_pedal_mc,
    mean_curvature_pedal_refined, mean_curvature_radial, santalo_total_mean_curvature, table1_experiment,
    CurvatureReport, Method, Refinement,
};
use tmc::mesh::{load_mesh, polytope_body, to_polytope};
use tmc::quadrature::{sphere_rule, McSettings, DEFAULT_SEED};
use tmc::surface::SmoothSurfacePatch;
use tmc::verify::{run_checks, Check, VerifySettings};
use tmc::{Body, Error, Point, Shape};

use output::Format;
use shape_spec::ParsedShape;

#[derive(Parser, Debug)]
#[command(name = "tmc", version, about = "Total mean curvature of convex bodies in R³")]
struct Cli {
    /// Worker threads for quadrature and Monte Carlo (default: all cores).
    /// `--workers 1` gives bitwise-reproducible output.
    #[arg(long, global = true, env = "TMC_WORKERS")]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute M for one body by one or more methods.
    Compute(ComputeArgs),
    /// Run the identity suite over catalog bodies.
    Verify(VerifyArgs),
    /// M(n) for superellipsoids |x|^n + |y|^n + |z|^n = 1.
    Table1(Table1Args),
    /// Compare the edge formula with the support integral on a mesh file.
    Mesh(MeshArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    /// Support-function sphere integral.
    Pedal,
    /// Pedal-body volume integral by radial quadrature.
    Radial,
    /// Pedal-body volume integral by Monte Carlo.
    Mc,
    /// Surface integral of H over a smooth chart.
    Classical,
    /// Polyhedral edge sum.
    Santalo,
    /// Every method that applies to the shape, plus the octant chart for cubes.
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum RuleArg {
    /// Rule chosen per body, doubled until converged.
    Auto,
    /// Fixed Gauss–Legendre × trapezoid product rule.
    Product,
}

#[derive(Args, Debug, Clone)]
struct McArgs {
    /// Monte Carlo sample count.
    #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    samples: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Args, Debug)]
struct ComputeArgs {
    /// Inline shape spec, e.g. `ellipsoid:2,1,1` or `sum:sphere:1+cube:0.5@1,0,0`.
    #[arg(long, conflicts_with = "shape_file", required_unless_present = "shape_file")]
    shape: Option<String>,
    /// JSON shape document.
    #[arg(long)]
    shape_file: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = MethodArg::Pedal)]
    method: MethodArg,
    #[arg(long, value_enum, default_value_t = RuleArg::Auto)]
    rule: RuleArg,
    /// Reference center `x,y,z`; defaults to the shape's own center.
    #[arg(long, allow_hyphen_values = true)]
    center: Option<String>,
    #[arg(long, default_value_t = 128, value_parser = clap::value_parser!(u64).range(1..))]
    polar_order: u64,
    #[arg(long, default_value_t = 256, value_parser = clap::value_parser!(u64).range(1..))]
    azimuth_count: u64,
    #[arg(long, default_value_t = 32, value_parser = clap::value_parser!(u64).range(1..))]
    radial_order: u64,
    #[command(flatten)]
    mc: McArgs,
    /// Monte Carlo excision radius (default: 0.05 × minimum support).
    #[arg(long)]
    epsilon: Option<f64>,
    /// Surface grid size per parameter for the classical method.
    #[arg(long, default_value_t = 512, value_parser = clap::value_parser!(u64).range(1..))]
    grid: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Inline shape spec; repeatable. Defaults to the built-in catalog.
    #[arg(long)]
    body: Vec<String>,
    /// Check name; repeatable. Defaults to every check.
    #[arg(long, value_parser = parse_check)]
    check: Vec<Check>,
    #[command(flatten)]
    mc: McArgs,
    #[arg(long, default_value_t = 512, value_parser = clap::value_parser!(u64).range(1..))]
    grid: u64,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Table1Args {
    /// Even exponents, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = (1..=10).map(|k| k * 100).collect::<Vec<u32>>())]
    n: Vec<u32>,
    /// Relative change at which rule doubling stops.
    #[arg(long, default_value_t = Refinement::default().rel_tol)]
    tol: f64,
    #[arg(long, default_value_t = Refinement::default().max_order)]
    max_order: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct MeshArgs {
    /// OFF or OBJ file describing a closed convex polyhedron.
    path: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

fn parse_check(s: &str) -> Result<Check, String> {
    Check::from_name(s).ok_or_else(|| {
        let names: Vec<&str> = Check::ALL.iter().map(|c| c.name()).collect();
        format!("unknown check '{s}' (expected one of {})", names.join(", "))
    })
}

/// An error with the process exit status it maps to.
#[derive(Debug)]
struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NonFiniteIntegrand { .. }
            | Error::ZeroAcceptance { .. }
            | Error::DegenerateMetric { .. }
            | Error::BadDihedral { .. }
            | Error::Unbounded { .. }
            | Error::InvalidValue { .. } => 3,
            _ => 2,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn parse_point(s: &str) -> CliResult<Point> {
    let v: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::usage(format!("center '{s}' is not three comma-separated numbers")))?;
    match v[..] {
        [x, y, z] => Ok(Point::new(x, y, z)),
        _ => Err(CliError::usage(format!("center '{s}' must have three components"))),
    }
}

fn emit(text: &str, path: Option<&PathBuf>) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn order(v: u64) -> usize {
    usize::try_from(v).unwrap_or(usize::MAX)
}

fn compute(args: &ComputeArgs) -> CliResult<CurvatureReport> {
    let (label, parsed) = match (&args.shape, &args.shape_file) {
        (Some(s), _) => (s.clone(), shape_spec::parse_inline(s)?),
        (None, Some(p)) => (p.display().to_string(), shape_spec::load_document(p)?),
        (None, None) => return Err(CliError::usage("one of --shape or --shape-file is required")),
    };
    let center = match &args.center {
        Some(c) => parse_point(c)?,
        None => parsed.center,
    };
    let body = Body::new(parsed.shape, center)?;
    let mut report = CurvatureReport::new(label, center.to_array());
    let all = args.method == MethodArg::All;
    let want = |m: MethodArg| all || args.method == m;
    let (polar, azimuth, radial) = (
        order(args.polar_order),
        order(args.azimuth_count),
        order(args.radial_order),
    );

    if want(MethodArg::Pedal) {
        match args.rule {
            RuleArg::Auto => {
                let r = mean_curvature_pedal_refined(&body, center, &Refinement::default())?;
                let settings = format!(
                    "rule={} order={} converged={} last_change={:e}",
                    r.strategy.name(),
                    r.order,
                    r.converged,
                    r.last_change
                );
                report.push(Method::PedalSphere, r.value, None, settings);
            }
            RuleArg::Product => {
                let rule = sphere_rule(polar, azimuth)?;
                let v = mean_curvature_pedal(&body, center, &rule)?;
                report.push(
                    Method::PedalSphere,
                    v,
                    None,
                    format!("rule=product polar={polar} azimuth={azimuth}"),
                );
            }
        }
    }
    if want(MethodArg::Radial) {
        let rule = sphere_rule(polar, azimuth)?;
        let v = mean_curvature_radial(&body, center, &rule, radial)?;
        let settings = format!("rule=product polar={polar} azimuth={azimuth} radial={radial}");
        report.push(Method::PedalRadial, v, None, settings);
    }
    if want(MethodArg::Mc) {
        let eps = args.epsilon.unwrap_or_else(|| default_excision(&body, center));
        let settings = McSettings {
            samples: args.mc.samples,
            seed: args.mc.seed,
            excision_radius: eps,
        };
        let e = mean_curvature_pedal_mc(&body, center, &settings)?;
        let text = format!(
            "samples={} accepted={} seed={} epsilon={}",
            e.samples_used, e.accepted, e.seed, eps
        );
        report.push(Method::PedalMc, e.estimate, Some(e.standard_error), text);
    }
    if want(MethodArg::Classical) {
        match SmoothSurfacePatch::for_shape(body.shape()) {
            Ok(patch) => {
                let g = order(args.grid);
                let v = mean_curvature_classical(&patch, (g, g))?;
                report.push(Method::Classical, v, None, format!("grid={g}x{g}"));
            }
            Err(e) if !all => return Err(e.into()),
            Err(_) => {}
        }
    }
    if want(MethodArg::Santalo) {
        match body.shape().edge_polytope() {
            Some(poly) => {
                let v = santalo_total_mean_curvature(&poly)?;
                report.push(Method::Santalo, v, None, format!("edges={}", poly.edges().len()));
            }
            None if !all => {
                return Err(Error::Unsupported("santalo needs a polytope shape".into()).into());
            }
            None => {}
        }
    }
    if all {
        if let Some(m) = cube_half_side(body.shape()) {
            let c = cube_closed_form(m, 32)?;
            report.push(Method::ClosedForm, c.total, None, "octant-chart gl=32");
        }
    }
    report.finish()?;
    Ok(report)
}

fn cube_half_side(shape: &Shape<f64>) -> Option<f64> {
    match shape {
        Shape::Box {
            half_extents: [a, b, c],
        } if a == b && b == c => Some(*a),
        Shape::Translate(s, _) => cube_half_side(s),
        _ => None,
    }
}

fn verify(args: &VerifyArgs) -> CliResult<Vec<tmc::verify::CheckRow>> {
    let entries: Vec<CatalogEntry<f64>> = if args.body.is_empty() {
        catalog()?
    } else {
        args.body
            .iter()
            .map(|s| {
                let ParsedShape { shape, center } = shape_spec::parse_inline(s)?;
                Ok(CatalogEntry::new(s.clone(), Body::new(shape, center)?))
            })
            .collect::<Result<_, Error>>()?
    };
    let checks: Vec<Check> = if args.check.is_empty() {
        Check::ALL.to_vec()
    } else {
        args.check.clone()
    };
    let settings = VerifySettings {
        grid: order(args.grid),
        samples: args.mc.samples,
        seed: args.mc.seed,
        ..VerifySettings::default()
    };
    Ok(run_checks(&entries, &checks, &settings)?)
}

fn mesh(args: &MeshArgs) -> CliResult<CurvatureReport> {
    let poly = to_polytope(&load_mesh::<f64>(&args.path)?)?;
    let santalo = santalo_total_mean_curvature(&poly)?;
    let edges = poly.edges().len();
    let body = polytope_body(poly)?;
    let center = body.center();
    let pedal = mean_curvature_pedal_refined(&body, center, &Refinement::default())?;
    let mut report = CurvatureReport::new(args.path.display().to_string(), center.to_array());
    report.push(Method::Santalo, santalo, None, format!("edges={edges}"));
    let settings = format!(
        "rule={} order={} converged={}",
        pedal.strategy.name(),
        pedal.order,
        pedal.converged
    );
    report.push(Method::PedalSphere, pedal.value, None, settings);
    report.finish()?;
    Ok(report)
}

fn run(cli: Cli) -> CliResult<ExitCode> {
    if let Some(n) = cli.workers {
        if n == 0 {
            return Err(CliError::usage("--workers must be >= 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::usage(format!("cannot start {n} workers: {e}")))?;
    }
    match &cli.command {
        Command::Compute(a) => emit(&output::report(&compute(a)?, a.format), a.output.as_ref())?,
        Command::Mesh(a) => emit(&output::report(&mesh(a)?, a.format), a.output.as_ref())?,
        Command::Table1(a) => {
            let refine = Refinement {
                rel_tol: a.tol,
                max_order: a.max_order,
                ..Refinement::default()
            };
            let rows = table1_experiment::<f64>(&a.n, &refine)?;
            emit(&output::table1(&rows, a.format), a.output.as_ref())?;
        }
        Command::Verify(a) => {
            let rows = verify(a)?;
            emit(&output::checks(&rows, a.format), a.output.as_ref())?;
            if rows.iter().any(|r| !r.pass) {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("tmc: {e}");
            ExitCode::from(e.code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::from(Error::OddExponent(3)).code, 2);
        assert_eq!(
            CliError::from(Error::NonConvexMesh {
                face: 0,
                vertex: 1,
                distance: 0.1
            })
            .code,
            2
        );
        assert_eq!(CliError::from(Error::ZeroAcceptance { samples: 10 }).code, 3);
        assert_eq!(
            CliError::from(Error::InvalidValue {
                method: "x".into(),
                value: -1.0
            })
            .code,
            3
        );
    }

    #[test]
    fn center_parsing() {
        assert_eq!(parse_point("1,-2,0.5").unwrap(), Point::new(1.0, -2.0, 0.5));
        assert!(parse_point("1,2").is_err());
        assert!(parse_point("a,b,c").is_err());
    }

    #[test]
    fn cube_detection() {
        assert_eq!(
            cube_half_side(&Shape::cube(2.0).translate(Point::new(1.0, 0.0, 0.0))),
            Some(2.0)
        );
        assert_eq!(cube_half_side(&Shape::cuboid(1.0, 2.0, 3.0)), None);
    }
}
