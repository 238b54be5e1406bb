//! Command-line front end: compute exponentials, flows and geodesics from
//! file or inline matrices, export traces, and run the verification suite.
//!
//! Exit codes: 0 success, 1 usage error (bad arguments, unreadable or
//! malformed input), 2 numerical failure (input outside the algebra,
//! degenerate geodesic, integrator breakdown, failed verification).

use std::fmt;
use std::fs;
use std::path::Path;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use cartanflow_core::cartan;
use cartanflow_core::error::CoreError;
use cartanflow_core::flow::{flow_ode_on_grid, TimeDependentField};
use cartanflow_core::io::{
    algebra_spec_from_json, flow_trace_csv, geodesic_trace_csv, matrix_from_json, matrix_to_json,
    FlowTraceJson, GeodesicTraceJson,
};
use cartanflow_core::verify::run_verify;
use cartanflow_core::{
    AlgebraElement, ComplexMatrix, LieAlgebraSpec, ToleranceConfig,
};

const SEED_ENV: &str = "CARTANFLOW_SEED";
const DEFAULT_SEED: u64 = 42;

#[derive(Parser)]
#[command(
    name = "cartanflow",
    version,
    about = "Group, chronological and Cartan exponentials on compact matrix Lie groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Group exponential e^X of an algebra element.
    Exp(MapArgs),
    /// Cartan exponential e^X e^{-T} of an algebra element.
    Hexp(MapArgs),
    /// Chronological flow of a polynomial field X(t) = A0 + t A1 + ...,
    /// traced over a grid.
    Flow(FlowArgs),
    /// Sub-Riemannian geodesic through the identity, traced over a grid.
    Geodesic(GeodesicArgs),
    /// Differential of exp at X in the direction Y.
    Dexp(DexpArgs),
    /// Run the verification suite and write its report.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct ToleranceArgs {
    /// Absolute tolerance for membership and identity checks.
    #[arg(long)]
    abs_tol: Option<f64>,
    /// Per-step local error target of the flow integrator.
    #[arg(long)]
    ode_tol: Option<f64>,
    /// Gauss-Legendre panel count for quadrature.
    #[arg(long)]
    quad_nodes: Option<usize>,
    /// Maximum chronological series order.
    #[arg(long)]
    series_kmax: Option<usize>,
}

impl ToleranceArgs {
    fn build(&self) -> Result<ToleranceConfig, CliError> {
        let mut cfg = ToleranceConfig::default();
        if let Some(v) = self.abs_tol {
            cfg.abs_tol = v;
        }
        if let Some(v) = self.ode_tol {
            cfg.ode_tol = v;
        }
        if let Some(v) = self.quad_nodes {
            cfg.quad_nodes = v;
        }
        if let Some(v) = self.series_kmax {
            cfg.series_kmax = v;
        }
        cfg.validate().map_err(|e| CliError::usage(e.to_string()))?;
        Ok(cfg)
    }
}

#[derive(Args)]
struct MapArgs {
    /// Algebra selector: `su:N` or `custom:<spec.json>`.
    #[arg(long)]
    algebra: String,
    /// Input matrix: a JSON file path, or inline JSON starting with `{`.
    #[arg(long = "in")]
    input: String,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<String>,
    #[command(flatten)]
    tol: ToleranceArgs,
}

#[derive(Args)]
struct FlowArgs {
    #[arg(long)]
    algebra: String,
    /// Polynomial coefficients A0, A1, ... (repeat the flag).
    #[arg(long = "in", required = true)]
    inputs: Vec<String>,
    /// Grid `start:end:samples`, inclusive endpoints; start must be 0.
    #[arg(long)]
    grid: String,
    #[arg(long)]
    out: Option<String>,
    /// Trace format; inferred from the output extension when omitted.
    #[arg(long, value_parser = ["json", "csv"])]
    format: Option<String>,
    #[command(flatten)]
    tol: ToleranceArgs,
}

#[derive(Args)]
struct GeodesicArgs {
    #[arg(long)]
    algebra: String,
    #[arg(long = "in")]
    input: String,
    /// Grid `start:end:samples`; start must be 0 for geodesics.
    #[arg(long)]
    grid: String,
    #[arg(long)]
    out: Option<String>,
    #[arg(long, value_parser = ["json", "csv"])]
    format: Option<String>,
    /// Trace the Riemannian geodesic e^{tX} instead.
    #[arg(long)]
    riemannian: bool,
    #[command(flatten)]
    tol: ToleranceArgs,
}

#[derive(Args)]
struct DexpArgs {
    #[arg(long)]
    algebra: String,
    /// Base point X.
    #[arg(long = "in")]
    input: String,
    /// Direction Y.
    #[arg(long)]
    dir: String,
    #[arg(long)]
    out: Option<String>,
    #[command(flatten)]
    tol: ToleranceArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// RNG seed; falls back to CARTANFLOW_SEED, then 42.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<String>,
    /// Suppress the per-check summary on stderr.
    #[arg(long)]
    quiet: bool,
    #[command(flatten)]
    tol: ToleranceArgs,
}

struct CliError {
    message: String,
    code: i32,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            message: message.into(),
            code: 1,
        }
    }

    fn numerical(message: impl Into<String>) -> Self {
        Self {
            message: message.into(),
            code: 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let code = match e {
            CoreError::MalformedJson(_)
            | CoreError::InvalidConfig(_)
            | CoreError::InvalidQuadNodes(_)
            | CoreError::InvalidSuRank(_)
            | CoreError::GridNotAtZero(_)
            | CoreError::InvalidGrid
            | CoreError::EmptyCartanSet
            | CoreError::CartanIndexOutOfRange(_)
            | CoreError::NotSquare { .. }
            | CoreError::DimensionMismatch { .. } => 1,
            _ => 2,
        };
        Self {
            message: e.to_string(),
            code,
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.code);
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Exp(args) => {
            let cfg = args.tol.build()?;
            let (_spec, x) = load_element(&args.algebra, &args.input, &cfg)?;
            let g = cartanflow_core::mat_exp(x.matrix())?;
            write_output(args.out.as_deref(), &matrix_to_json(&g))
        }
        Command::Hexp(args) => {
            let cfg = args.tol.build()?;
            let (spec, x) = load_element(&args.algebra, &args.input, &cfg)?;
            let g = cartan::hexp(&spec, &x)?;
            write_output(args.out.as_deref(), &matrix_to_json(&g))
        }
        Command::Flow(args) => {
            let cfg = args.tol.build()?;
            let spec = load_algebra(&args.algebra, &cfg)?;
            let mut coeffs = Vec::new();
            for input in &args.inputs {
                coeffs.push(
                    load_element_in(&spec, input, &cfg)?
                        .matrix()
                        .clone(),
                );
            }
            let grid = parse_grid(&args.grid, false)?;
            let field = TimeDependentField::polynomial(coeffs);
            let trace = flow_ode_on_grid(&field, &grid, &cfg)?;
            let body = match output_format(args.format.as_deref(), args.out.as_deref())? {
                Format::Csv => flow_trace_csv(&trace),
                Format::Json => serde_json::to_string_pretty(&FlowTraceJson::from_trace(&trace))
                    .expect("trace serializes"),
            };
            write_output(args.out.as_deref(), &body)
        }
        Command::Geodesic(args) => {
            let cfg = args.tol.build()?;
            let (spec, x) = load_element(&args.algebra, &args.input, &cfg)?;
            let grid = parse_grid(&args.grid, true)?;
            let trace = if args.riemannian {
                cartan::riemannian_geodesic(&spec, &x, &grid, &cfg)?
            } else {
                cartan::geodesic(&spec, &x, &grid, &cfg)?
            };
            let body = match output_format(args.format.as_deref(), args.out.as_deref())? {
                Format::Csv => geodesic_trace_csv(&trace),
                Format::Json => {
                    serde_json::to_string_pretty(&GeodesicTraceJson::from_trace(&trace))
                        .expect("trace serializes")
                }
            };
            write_output(args.out.as_deref(), &body)
        }
        Command::Dexp(args) => {
            let cfg = args.tol.build()?;
            let (spec, x) = load_element(&args.algebra, &args.input, &cfg)?;
            let y = load_element_in(&spec, &args.dir, &cfg)?;
            let d = cartanflow_core::flow::d_exp(x.matrix(), y.matrix(), &cfg)?;
            write_output(args.out.as_deref(), &matrix_to_json(&d))
        }
        Command::Verify(args) => {
            let cfg = args.tol.build()?;
            let seed = match args.seed {
                Some(s) => s,
                None => match std::env::var(SEED_ENV) {
                    Ok(v) => v
                        .parse::<u64>()
                        .map_err(|_| CliError::usage(format!("{SEED_ENV} must be an integer")))?,
                    Err(_) => DEFAULT_SEED,
                },
            };
            let report = run_verify(seed, &cfg);
            if !args.quiet {
                for c in &report.checks {
                    eprintln!(
                        "{} {:<38} cases {:>4}  max_error {:>12.3e}  tol {:>9.1e}",
                        if c.pass { "PASS" } else { "FAIL" },
                        c.name,
                        c.cases,
                        c.max_error,
                        c.tol
                    );
                }
                eprintln!(
                    "verify: {}/{} checks passed in {:.2} s (seed {})",
                    report.checks.iter().filter(|c| c.pass).count(),
                    report.checks.len(),
                    report.wall_time_s,
                    report.seed
                );
            }
            write_output(args.out.as_deref(), &report.to_json())?;
            if report.all_pass() {
                Ok(())
            } else {
                Err(CliError::numerical("verification suite has failures"))
            }
        }
    }
}

enum Format {
    Json,
    Csv,
}

fn output_format(explicit: Option<&str>, out: Option<&str>) -> Result<Format, CliError> {
    match explicit {
        Some("json") => Ok(Format::Json),
        Some("csv") => Ok(Format::Csv),
        Some(other) => Err(CliError::usage(format!("unknown format {other}"))),
        None => match out.and_then(|p| Path::new(p).extension().and_then(|e| e.to_str())) {
            Some("csv") => Ok(Format::Csv),
            _ => Ok(Format::Json),
        },
    }
}

fn read_input(source: &str) -> Result<String, CliError> {
    if source.trim_start().starts_with('{') {
        Ok(source.to_string())
    } else {
        fs::read_to_string(source)
            .map_err(|e| CliError::usage(format!("cannot read {source}: {e}")))
    }
}

fn load_algebra(selector: &str, cfg: &ToleranceConfig) -> Result<LieAlgebraSpec, CliError> {
    if let Some(n) = selector.strip_prefix("su:") {
        let n: usize = n
            .parse()
            .map_err(|_| CliError::usage(format!("bad algebra selector {selector}")))?;
        return Ok(LieAlgebraSpec::su(n)?);
    }
    if let Some(path) = selector.strip_prefix("custom:") {
        let text = read_input(path)?;
        return Ok(algebra_spec_from_json(&text, cfg)?);
    }
    Err(CliError::usage(format!(
        "algebra selector must be su:N or custom:<spec.json>, got {selector}"
    )))
}

fn load_matrix(source: &str) -> Result<ComplexMatrix, CliError> {
    let text = read_input(source)?;
    Ok(matrix_from_json(&text)?)
}

fn load_element_in(
    spec: &LieAlgebraSpec,
    source: &str,
    cfg: &ToleranceConfig,
) -> Result<AlgebraElement, CliError> {
    let m = load_matrix(source)?;
    Ok(spec.element_from_matrix(&m, cfg)?)
}

fn load_element(
    selector: &str,
    source: &str,
    cfg: &ToleranceConfig,
) -> Result<(LieAlgebraSpec, AlgebraElement), CliError> {
    let spec = load_algebra(selector, cfg)?;
    let x = load_element_in(&spec, source, cfg)?;
    Ok((spec, x))
}

fn parse_grid(text: &str, force_zero_start: bool) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::usage(format!(
            "grid must be start:end:samples, got {text}"
        )));
    }
    let start: f64 = parts[0]
        .parse()
        .map_err(|_| CliError::usage("grid start is not a number"))?;
    let end: f64 = parts[1]
        .parse()
        .map_err(|_| CliError::usage("grid end is not a number"))?;
    let samples: usize = parts[2]
        .parse()
        .map_err(|_| CliError::usage("grid sample count is not an integer"))?;
    if samples < 2 {
        return Err(CliError::usage("grid needs at least 2 samples"));
    }
    if !start.is_finite() || !end.is_finite() || start == end {
        return Err(CliError::usage("grid endpoints must be finite and distinct"));
    }
    if force_zero_start && start != 0.0 {
        return Err(CliError::usage("geodesic grids must start at 0"));
    }
    if start != 0.0 {
        return Err(CliError::usage("flow grids must start at 0"));
    }
    Ok((0..samples)
        .map(|i| start + (end - start) * i as f64 / (samples - 1) as f64)
        .collect())
}

fn write_output(out: Option<&str>, body: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, body)
            .map_err(|e| CliError::usage(format!("cannot write {path}: {e}"))),
        None => {
            if body.ends_with('\n') {
                print!("{body}");
            } else {
                println!("{body}");
            }
            Ok(())
        }
    }
}
