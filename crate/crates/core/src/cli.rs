//! The `driftlab` command line: `solve | extremal | sweep | oracle | bound`.
//!
//! Exit codes: 0 success, 1 invalid input, 2 numerical non-convergence (or
//! a failed oracle check). Reports go to `--out` or stdout, diagnostics to
//! stderr. CSV numbers use 17 significant digits.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::bound::{lower_bound_delta, BoundInputs};
use crate::circle::{sweep, SweepRow};
use crate::eigen::{assemble_drift_operator, principal_eigenpair, SpectralResult};
use crate::error::{DriftError, Result};
use crate::extremal::{
    brute_force_min_eigenvalue, minimize_principal_eigenvalue, ExtremalOptions,
    BRUTE_FORCE_EIGEN_TOL,
};
use crate::grid::{AdvectionScheme, CellMask, DriftField, Grid};

/// Agreement required between enumeration and fixed point.
pub const ORACLE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub enum DomainSpec {
    Interval(f64, f64),
    Circle(f64),
    Mask(PathBuf),
}

impl FromStr for DomainSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let (kind, rest) = s.split_once(':').ok_or_else(|| {
            format!("domain `{s}` must look like interval:a,b | circle:L | mask:PATH")
        })?;
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| format!("bad number `{t}` in domain `{s}`"))
        };
        match kind {
            "interval" => {
                let (a, b) = rest
                    .split_once(',')
                    .ok_or_else(|| format!("interval domain needs `a,b`, got `{rest}`"))?;
                Ok(DomainSpec::Interval(num(a)?, num(b)?))
            }
            "circle" => Ok(DomainSpec::Circle(num(rest)?)),
            "mask" => Ok(DomainSpec::Mask(PathBuf::from(rest))),
            other => Err(format!("unknown domain kind `{other}`")),
        }
    }
}

impl std::fmt::Display for DomainSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DomainSpec::Interval(a, b) => write!(f, "interval:{a},{b}"),
            DomainSpec::Circle(l) => write!(f, "circle:{l}"),
            DomainSpec::Mask(p) => write!(f, "mask:{}", p.display()),
        }
    }
}

impl DomainSpec {
    pub fn build(&self, m: usize) -> Result<Grid> {
        match self {
            DomainSpec::Interval(a, b) => Grid::interval(*a, *b, m),
            DomainSpec::Circle(l) => Grid::circle(*l, m),
            DomainSpec::Mask(path) => Grid::masked_rectangle(CellMask::load(path)?),
        }
    }
}

/// How `solve` builds its drift from `--drift-cap C`.
#[derive(Debug, Clone, PartialEq)]
pub enum DriftProfile {
    /// `|v| = C` pointing at the centre of the domain's bounding box
    /// (for intervals: the bang-bang extremal orientation).
    Inward,
    /// `v = C e_x`.
    Constant,
    /// One line per interior node with comma-separated components.
    File(PathBuf),
}

impl FromStr for DriftProfile {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "inward" => Ok(DriftProfile::Inward),
            "constant" => Ok(DriftProfile::Constant),
            _ => match s.strip_prefix("file:") {
                Some(path) => Ok(DriftProfile::File(PathBuf::from(path))),
                None => Err(format!(
                    "drift profile `{s}` must be inward | constant | file:PATH"
                )),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    SvgData,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Hybrid,
    Upwind,
}

impl From<SchemeArg> for AdvectionScheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Hybrid => AdvectionScheme::Hybrid,
            SchemeArg::Upwind => AdvectionScheme::Upwind,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "driftlab",
    version,
    about = "Principal eigenvalues of drift Laplacians"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Principal eigenpair for a prescribed drift.
    Solve(SolveArgs),
    /// Minimize the principal eigenvalue over drifts with |v| <= C.
    Extremal(ExtremalArgs),
    /// Closed-form minimal eigenvalue lambda(b) on the circle R/4Z.
    Sweep(SweepArgs),
    /// Compare the fixed point against exhaustive bang-bang enumeration.
    Oracle(OracleArgs),
    /// Evaluate the explicit eigenvalue lower bound.
    Bound(BoundArgs),
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct DomainArgs {
    /// interval:a,b | circle:L | mask:PATH
    #[arg(long, default_value = "interval:-1,1", allow_hyphen_values = true)]
    pub domain: DomainSpec,
    /// Interior node count (ignored for masks).
    #[arg(long, default_value_t = 400)]
    pub m: usize,
    #[arg(long, value_enum, default_value = "hybrid")]
    pub scheme: SchemeArg,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub domain: DomainArgs,
    #[arg(long, default_value_t = 0.0)]
    pub drift_cap: f64,
    /// inward | constant | file:PATH
    #[arg(long, default_value = "inward")]
    pub drift_profile: DriftProfile,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, default_value_t = 10_000)]
    pub max_iter: usize,
    /// Also write the eigenfunction as CSV `x,y,u`.
    #[arg(long)]
    pub eigenfunction: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ExtremalArgs {
    #[command(flatten)]
    pub domain: DomainArgs,
    #[arg(long, default_value_t = 0.0)]
    pub drift_cap: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Inner eigensolver iteration budget.
    #[arg(long, default_value_t = 10_000)]
    pub max_iter: usize,
    #[arg(long, default_value_t = 500)]
    pub max_outer: usize,
    #[arg(long, default_value_t = 1.0)]
    pub damping: f64,
    /// Also write eigenfunction and drift as CSV `x,y,u,vx,vy`.
    #[arg(long)]
    pub eigenfunction: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// lo,hi,steps
    #[arg(long, default_value = "0,6,61")]
    pub b_range: String,
    /// Cross-check each row with the grid solver on [-1,1] with M nodes.
    #[arg(long)]
    pub cross_check_m: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long, default_value = "interval:-1,1", allow_hyphen_values = true)]
    pub domain: DomainSpec,
    #[arg(long, default_value_t = 6)]
    pub m: usize,
    #[arg(long, default_value_t = 2.0)]
    pub drift_cap: f64,
    #[arg(long, value_enum, default_value = "hybrid")]
    pub scheme: SchemeArg,
    /// Also test this many random drifts in [-C, C]^m drawn with `--seed`.
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    /// Manifold dimension n.
    #[arg(long, default_value_t = 2)]
    pub dim: u32,
    /// Ricci lower bound magnitude K (Ric >= -(n-1) K).
    #[arg(long, default_value_t = 0.0)]
    pub ricci_k: f64,
    #[arg(long, default_value_t = 0.0)]
    pub drift_cap: f64,
    #[arg(long)]
    pub diameter: f64,
    /// Lipschitz constant of the sup-normalized eigenfunction.
    #[arg(long)]
    pub c4: f64,
    #[arg(long, default_value_t = 1.0)]
    pub lambda_cap: f64,
    /// Defaults to the diameter.
    #[arg(long)]
    pub rho_cap: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

/// A finished command: text to emit and the exit code.
#[derive(Debug)]
pub struct Report {
    pub text: String,
    pub code: i32,
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn exit_code(err: &DriftError) -> i32 {
    match err {
        DriftError::InvalidArgument(_) | DriftError::Io(_) => 1,
        _ => 2,
    }
}

fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn json_text(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json values serialize");
    s.push('\n');
    s
}

fn unsupported(format: Format, cmd: &str) -> DriftError {
    DriftError::InvalidArgument(format!("format {format:?} is not available for `{cmd}`"))
}

fn write_nodal_csv(
    path: &PathBuf,
    grid: &Grid,
    u: &[f64],
    drift: Option<&DriftField>,
) -> Result<()> {
    let mut out = String::from(if drift.is_some() {
        "x,y,u,vx,vy\n"
    } else {
        "x,y,u\n"
    });
    for (i, c) in grid.coords().iter().enumerate() {
        let _ = write!(out, "{},{},{}", num(c[0]), num(c[1]), num(u[i]));
        if let Some(v) = drift {
            let vy = if v.dim() > 1 { v.component(i, 1) } else { 0.0 };
            let _ = write!(out, ",{},{}", num(v.component(i, 0)), num(vy));
        }
        out.push('\n');
    }
    std::fs::write(path, out)?;
    Ok(())
}

fn grid_fields(spec: &DomainSpec, grid: &Grid) -> Map<String, Value> {
    let mut obj = Map::new();
    obj.insert("domain".into(), json!(spec.to_string()));
    obj.insert("interior_count".into(), json!(grid.interior_count()));
    obj
}

fn build_drift(grid: &Grid, cap: f64, profile: &DriftProfile) -> Result<DriftField> {
    match profile {
        DriftProfile::Constant => DriftField::from_fn(grid, cap, |_, _| [cap, 0.0]),
        DriftProfile::Inward => {
            let (cx, cy) = match grid.kind() {
                crate::grid::GridKind::MaskedRectangle => {
                    (grid.lengths()[0] / 2.0, grid.lengths()[1] / 2.0)
                }
                _ => {
                    let bc = grid.boundary_coords();
                    if bc.len() == 2 {
                        ((bc[0][0] + bc[1][0]) / 2.0, 0.0)
                    } else {
                        return Err(DriftError::InvalidArgument(
                            "inward drift needs a domain with a boundary".into(),
                        ));
                    }
                }
            };
            let dim = grid.dim();
            DriftField::from_fn(grid, cap, |x, y| {
                let (dx, dy) = (cx - x, if dim > 1 { cy - y } else { 0.0 });
                let r = dx.hypot(dy);
                if r == 0.0 {
                    [0.0, 0.0]
                } else {
                    [cap * dx / r, cap * dy / r]
                }
            })
        }
        DriftProfile::File(path) => {
            let text = std::fs::read_to_string(path)?;
            let mut values = Vec::new();
            for line in text.lines().filter(|l| !l.trim().is_empty()) {
                for tok in line.split(',') {
                    values.push(tok.trim().parse::<f64>().map_err(|_| {
                        DriftError::InvalidArgument(format!("bad drift value `{tok}`"))
                    })?);
                }
            }
            if values.len() != grid.interior_count() * grid.dim() {
                return Err(DriftError::InvalidArgument(format!(
                    "drift file has {} values, expected {}",
                    values.len(),
                    grid.interior_count() * grid.dim()
                )));
            }
            DriftField::new(grid.dim(), cap, values)
        }
    }
}

pub fn cmd_solve(args: &SolveArgs) -> Result<Report> {
    let grid = args.domain.domain.build(args.domain.m)?;
    let drift = build_drift(&grid, args.drift_cap, &args.drift_profile)?;
    let op = assemble_drift_operator(&grid, &drift, args.domain.scheme.into())?;
    let SpectralResult {
        lambda,
        eigenfunction,
        iterations,
        residual,
    } = principal_eigenpair(&op, args.tol, args.max_iter)?;
    if let Some(path) = &args.eigenfunction {
        write_nodal_csv(path, &grid, &eigenfunction, None)?;
    }
    let text = match args.output.format {
        Format::Csv => csv(
            &["lambda", "residual", "iterations"],
            &[vec![num(lambda), num(residual), iterations.to_string()]],
        ),
        Format::Json => {
            let mut obj = grid_fields(&args.domain.domain, &grid);
            obj.insert("drift_cap".into(), json!(args.drift_cap));
            obj.insert("lambda".into(), json!(lambda));
            obj.insert("residual".into(), json!(residual));
            obj.insert("iterations".into(), json!(iterations));
            json_text(&Value::Object(obj))
        }
        Format::SvgData => return Err(unsupported(args.output.format, "solve")),
    };
    Ok(Report { text, code: 0 })
}

pub fn cmd_extremal(args: &ExtremalArgs) -> Result<Report> {
    let grid = args.domain.domain.build(args.domain.m)?;
    let options = ExtremalOptions {
        tol: args.tol,
        max_outer: args.max_outer,
        damping: args.damping,
        eigen_tol: args.tol,
        eigen_max_iter: args.max_iter,
        scheme: args.domain.scheme.into(),
    };
    let r = minimize_principal_eigenvalue(&grid, args.drift_cap, &options)?;
    if let Some(path) = &args.eigenfunction {
        write_nodal_csv(path, &grid, &r.u, Some(&r.drift))?;
    }
    let text = match args.output.format {
        Format::Csv => csv(
            &[
                "lambda_min",
                "semilinear_residual",
                "fixed_point_iterations",
                "drift_change_last",
            ],
            &[vec![
                num(r.lambda_min),
                num(r.semilinear_residual),
                r.fixed_point_iterations.to_string(),
                num(r.drift_change_last),
            ]],
        ),
        Format::Json => {
            let mut obj = grid_fields(&args.domain.domain, &grid);
            obj.insert("drift_cap".into(), json!(args.drift_cap));
            obj.insert("lambda_min".into(), json!(r.lambda_min));
            obj.insert("semilinear_residual".into(), json!(r.semilinear_residual));
            obj.insert(
                "fixed_point_iterations".into(),
                json!(r.fixed_point_iterations),
            );
            obj.insert("drift_change_last".into(), json!(r.drift_change_last));
            json_text(&Value::Object(obj))
        }
        Format::SvgData => return Err(unsupported(args.output.format, "extremal")),
    };
    Ok(Report { text, code: 0 })
}

fn parse_b_range(s: &str) -> Result<(f64, f64, usize)> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let bad = || DriftError::InvalidArgument(format!("--b-range must be lo,hi,steps, got `{s}`"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo = parts[0].parse::<f64>().map_err(|_| bad())?;
    let hi = parts[1].parse::<f64>().map_err(|_| bad())?;
    let steps = parts[2].parse::<usize>().map_err(|_| bad())?;
    Ok((lo, hi, steps))
}

/// Sweep rows as CSV with header `b,lambda,branch,asymptote[,grid_lambda]`.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let cross = rows.iter().any(|r| r.grid_lambda.is_some());
    let mut header = vec!["b", "lambda", "branch", "asymptote"];
    if cross {
        header.push("grid_lambda");
    }
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            let mut row = vec![
                num(r.b),
                num(r.lambda),
                r.branch.to_string(),
                num(r.asymptote),
            ];
            if cross {
                row.push(r.grid_lambda.map_or_else(String::new, num));
            }
            row
        })
        .collect();
    csv(&header, &body)
}

/// Two polylines, `lambda(b)` and the asymptote, as SVG `points` lists.
pub fn sweep_svg_data(rows: &[SweepRow]) -> String {
    let points = |f: &dyn Fn(&SweepRow) -> f64| {
        rows.iter()
            .map(|r| format!("{},{}", num(r.b), num(f(r))))
            .collect::<Vec<_>>()
            .join(" ")
    };
    format!(
        "lambda: {}\nasymptote: {}\n",
        points(&|r| r.lambda),
        points(&|r| r.asymptote)
    )
}

pub fn cmd_sweep(args: &SweepArgs) -> Result<Report> {
    let (lo, hi, steps) = parse_b_range(&args.b_range)?;
    let rows = sweep(lo, hi, steps, args.cross_check_m)?;
    let text = match args.output.format {
        Format::Csv => sweep_csv(&rows),
        Format::Json => json_text(&serde_json::to_value(&rows).expect("rows serialize")),
        Format::SvgData => sweep_svg_data(&rows),
    };
    Ok(Report { text, code: 0 })
}

pub fn cmd_oracle(args: &OracleArgs) -> Result<Report> {
    let grid = args.domain.build(args.m)?;
    let scheme: AdvectionScheme = args.scheme.into();
    let brute = brute_force_min_eigenvalue(&grid, args.drift_cap, scheme)?;
    let options = ExtremalOptions {
        eigen_tol: BRUTE_FORCE_EIGEN_TOL,
        eigen_max_iter: 100_000,
        scheme,
        ..Default::default()
    };
    let fixed = minimize_principal_eigenvalue(&grid, args.drift_cap, &options)?;
    let gap = (brute.lambda - fixed.lambda_min).abs();
    let signs_match = args.drift_cap == 0.0
        || brute.signs.iter().enumerate().all(|(i, &s)| {
            let v = fixed.drift.component(i, 0);
            v == 0.0 || v.signum() == f64::from(s)
        });

    let mut random_min = None;
    if let Some(seed) = args.seed {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut best = f64::INFINITY;
        for _ in 0..args.samples {
            let values: Vec<f64> = (0..grid.interior_count())
                .map(|_| {
                    if args.drift_cap > 0.0 {
                        rng.gen_range(-args.drift_cap..=args.drift_cap)
                    } else {
                        0.0
                    }
                })
                .collect();
            let drift = DriftField::new(1, args.drift_cap, values)?;
            let op = assemble_drift_operator(&grid, &drift, scheme)?;
            best = best.min(principal_eigenpair(&op, BRUTE_FORCE_EIGEN_TOL, 100_000)?.lambda);
        }
        random_min = Some(best);
    }
    let random_ok = random_min.is_none_or(|r| r >= brute.lambda - ORACLE_TOL);
    let pass = gap <= ORACLE_TOL && signs_match && random_ok;
    let verdict = if pass { "PASS" } else { "FAIL" };

    let text = match args.output.format {
        Format::Csv => {
            let mut header = vec![
                "m",
                "drift_cap",
                "brute_force_lambda",
                "fixed_point_lambda",
                "gap",
                "signs_match",
                "verdict",
            ];
            let mut row = vec![
                grid.interior_count().to_string(),
                num(args.drift_cap),
                num(brute.lambda),
                num(fixed.lambda_min),
                num(gap),
                signs_match.to_string(),
                verdict.to_string(),
            ];
            if let Some(r) = random_min {
                header.insert(6, "random_min_lambda");
                row.insert(6, num(r));
            }
            csv(&header, &[row])
        }
        Format::Json => {
            let mut obj = Map::new();
            obj.insert("m".into(), json!(grid.interior_count()));
            obj.insert("drift_cap".into(), json!(args.drift_cap));
            obj.insert("brute_force_lambda".into(), json!(brute.lambda));
            obj.insert("fixed_point_lambda".into(), json!(fixed.lambda_min));
            obj.insert("gap".into(), json!(gap));
            obj.insert("signs_match".into(), json!(signs_match));
            if let Some(r) = random_min {
                obj.insert("random_min_lambda".into(), json!(r));
            }
            obj.insert("verdict".into(), json!(verdict));
            json_text(&Value::Object(obj))
        }
        Format::SvgData => return Err(unsupported(args.output.format, "oracle")),
    };
    Ok(Report {
        text,
        code: if pass { 0 } else { 2 },
    })
}

pub fn cmd_bound(args: &BoundArgs) -> Result<Report> {
    let mut inputs = BoundInputs::new(
        args.dim,
        args.ricci_k,
        args.drift_cap,
        args.diameter,
        args.c4,
    );
    inputs.lambda_cap = args.lambda_cap;
    if let Some(rho) = args.rho_cap {
        inputs.rho_cap = rho;
    }
    let breakdown = lower_bound_delta(&inputs)?;
    let text = match args.format {
        Format::Json => json_text(&serde_json::to_value(breakdown).expect("breakdown serializes")),
        Format::Csv => {
            let value = serde_json::to_value(breakdown).expect("breakdown serializes");
            let obj = value.as_object().expect("flat object");
            let header: Vec<&str> = obj.keys().map(String::as_str).collect();
            let row = obj
                .values()
                .map(|v| match v {
                    Value::Number(n) => num(n.as_f64().unwrap_or(f64::NAN)),
                    other => other.to_string(),
                })
                .collect();
            csv(&header, &[row])
        }
        Format::SvgData => return Err(unsupported(args.format, "bound")),
    };
    Ok(Report { text, code: 0 })
}

fn dispatch(cli: &Cli) -> (Result<Report>, Option<&PathBuf>) {
    match &cli.command {
        Command::Solve(a) => (cmd_solve(a), a.output.out.as_ref()),
        Command::Extremal(a) => (cmd_extremal(a), a.output.out.as_ref()),
        Command::Sweep(a) => (cmd_sweep(a), a.output.out.as_ref()),
        Command::Oracle(a) => (cmd_oracle(a), a.output.out.as_ref()),
        Command::Bound(a) => (cmd_bound(a), a.out.as_ref()),
    }
}

/// Parse `argv` (including the program name), run, and return the exit code.
pub fn run<I, S>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    0
                }
                _ => {
                    let _ = write!(stderr, "{e}");
                    1
                }
            };
        }
    };
    let (result, out_path) = dispatch(&cli);
    match result {
        Ok(report) => {
            let written = match out_path {
                Some(path) => std::fs::write(path, &report.text),
                None => stdout.write_all(report.text.as_bytes()),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "error: {e}");
                return 1;
            }
            if report.code != 0 {
                let _ = writeln!(stderr, "check failed");
            }
            report.code
        }
        Err(err) => {
            let _ = writeln!(stderr, "error: {err}");
            if let DriftError::NoConvergence { history, .. } = &err {
                if !history.is_empty() {
                    let trail: Vec<String> = history.iter().map(|l| num(*l)).collect();
                    let _ = writeln!(stderr, "iterate history: {}", trail.join(" "));
                }
            }
            exit_code(&err)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domain_spec_parsing() {
        assert_eq!("interval:-1,1".parse(), Ok(DomainSpec::Interval(-1.0, 1.0)));
        assert_eq!("circle:4".parse(), Ok(DomainSpec::Circle(4.0)));
        assert_eq!(
            "mask:a/b.txt".parse(),
            Ok(DomainSpec::Mask(PathBuf::from("a/b.txt")))
        );
        assert!("square:1".parse::<DomainSpec>().is_err());
        assert!("interval:1".parse::<DomainSpec>().is_err());
    }

    #[test]
    fn b_range_parsing() {
        assert_eq!(parse_b_range("0,6,61").unwrap(), (0.0, 6.0, 61));
        assert!(parse_b_range("0,6").is_err());
        assert!(parse_b_range("0,x,3").is_err());
    }

    #[test]
    fn numbers_carry_17_significant_digits() {
        let s = num(std::f64::consts::PI);
        assert_eq!(s, "3.1415926535897931e0");
        assert_eq!(s.parse::<f64>().unwrap(), std::f64::consts::PI);
    }
}
