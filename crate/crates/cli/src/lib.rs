//! Command-line front end for the `heron` binary: `solve`, `certify`, `oracle`
//! and `normalize` over TOML scenario files.

pub mod error;
pub mod scenario;
pub mod svg;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use heron_core::certify::{self, CERTIFICATE_TOL};
use heron_core::geometry::ConvexSet;
use heron_core::{
    grid_solve, solve, trace, ConstraintProjection, StepSchedule, TwoSetVerdict, Vector,
};
use serde_json::json;

pub use error::CliError;
pub use scenario::ScenarioFile;

#[derive(Debug, Parser)]
#[command(
    name = "heron",
    version,
    about = "Minimize a sum of distances to convex sets over a convex constraint"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the projected subgradient method.
    Solve(SolveArgs),
    /// Check optimality of a candidate point.
    Certify(CertifyArgs),
    /// Brute-force grid minimization.
    Oracle(OracleArgs),
    /// Print the scenario after validation and normalization.
    Normalize { scenario: PathBuf },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ProjectionArg {
    Metric,
    Sphere,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub scenario: PathBuf,
    /// Iteration budget (overrides solver.max_iters).
    #[arg(long)]
    pub iters: Option<u64>,
    /// Step rule: `harmonic:c` or `power:c,p`.
    #[arg(long)]
    pub step: Option<String>,
    /// Keep every n-th trace row (overrides solver.trace_stride).
    #[arg(long)]
    pub stride: Option<u64>,
    /// Constraint update rule (overrides solver.projection).
    #[arg(long, value_enum)]
    pub projection: Option<ProjectionArg>,
    /// Write the stored trace rows as CSV.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Write an SVG of the sets and the iterate path (2D only).
    #[arg(long)]
    pub plot: Option<PathBuf>,
    #[arg(long, default_value_t = 5)]
    pub precision: usize,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    pub scenario: PathBuf,
    /// Candidate point, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    pub at: String,
    /// Residual tolerance (overrides certify.tolerance).
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, default_value_t = 5)]
    pub precision: usize,
    /// Emit a JSON record instead of text.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    pub scenario: PathBuf,
    /// Grid points per axis (overrides oracle.grid_points_per_axis).
    #[arg(long)]
    pub grid: Option<usize>,
    /// Refinement rounds (overrides oracle.refinement_rounds).
    #[arg(long)]
    pub rounds: Option<usize>,
    #[arg(long, default_value_t = 5)]
    pub precision: usize,
}

/// Parses `harmonic:c` or `power:c,p`.
pub fn parse_step(spec: &str) -> Result<StepSchedule, CliError> {
    let bad = || {
        CliError::Schema(format!(
            "--step: expected harmonic:c or power:c,p, got {spec:?}"
        ))
    };
    let (kind, params) = spec.split_once(':').ok_or_else(bad)?;
    let nums = params
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| bad())?;
    let schedule = match (kind, nums.as_slice()) {
        ("harmonic", [c]) => StepSchedule::harmonic(*c),
        ("power", [c, p]) => StepSchedule::power(*c, *p),
        _ => return Err(bad()),
    };
    schedule.map_err(|e| CliError::Schema(format!("--step: {e}")))
}

pub fn parse_point(text: &str, dim: usize) -> Result<Vector, CliError> {
    let coords = text
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| CliError::Schema(format!("--at: cannot parse {text:?} as numbers")))?;
    if coords.len() != dim {
        return Err(CliError::Schema(format!(
            "--at: expected {dim} coordinates, found {}",
            coords.len()
        )));
    }
    Vector::new(coords).map_err(|e| CliError::Schema(format!("--at: {e}")))
}

fn create(path: &PathBuf) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Solve(args) => run_solve(args, out),
        Command::Certify(args) => run_certify(args, out),
        Command::Oracle(args) => run_oracle(args, out),
        Command::Normalize { scenario } => {
            let file = ScenarioFile::load(&scenario)?.normalized()?;
            write!(out, "{}", file.to_toml()).map_err(io)
        }
    }
}

fn io(e: std::io::Error) -> CliError {
    CliError::Io(e.to_string())
}

fn run_solve(args: SolveArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let file = ScenarioFile::load(&args.scenario)?;
    let sc = file.scenario()?;
    if args.plot.is_some() && sc.dim() != 2 {
        return Err(CliError::Schema(format!(
            "--plot: only 2D scenarios can be rendered, this one has dimension {}",
            sc.dim()
        )));
    }
    let mut cfg = file.solver_config(&sc)?;
    if let Some(n) = args.iters {
        if n == 0 {
            return Err(CliError::Schema("--iters: must be positive".into()));
        }
        cfg.max_iters = n;
    }
    if let Some(step) = &args.step {
        cfg.schedule = parse_step(step)?;
    }
    if let Some(s) = args.stride {
        if s == 0 {
            return Err(CliError::Schema("--stride: must be positive".into()));
        }
        cfg.trace_stride = s;
    }
    match args.projection {
        Some(ProjectionArg::Metric) => cfg.projection = ConstraintProjection::Metric,
        Some(ProjectionArg::Sphere) => cfg.projection = ConstraintProjection::Sphere,
        None => {}
    }

    let result = solve(&sc, &cfg)?;
    let p = args.precision;
    if !sc.check_existence() {
        writeln!(
            out,
            "warning: constraint and all targets are unbounded; a minimizer may not exist"
        )
        .map_err(io)?;
    }
    for w in &result.warnings {
        writeln!(out, "warning: {w}").map_err(io)?;
    }
    writeln!(out, "iterations={}", result.iterations).map_err(io)?;
    if let Some(k) = result.stopped_early {
        writeln!(out, "stopped_early={k}").map_err(io)?;
    }
    writeln!(out, "best_k={}", result.best_k).map_err(io)?;
    writeln!(out, "best_x={:.p$}", result.best_x).map_err(io)?;
    writeln!(out, "V={:.p$}", result.best_value).map_err(io)?;

    if let Some(path) = &args.trace {
        let mut w = create(path)?;
        trace::write_csv(&mut w, sc.dim(), &result.trace).map_err(io)?;
        w.flush().map_err(io)?;
    }
    if let Some(path) = &args.plot {
        let pts: Vec<Vector> = result.trace.iter().map(|r| r.x.clone()).collect();
        let doc = svg::render(&sc, &pts)?;
        std::fs::write(path, doc).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

/// Unit normal of an affine constraint of codimension one.
fn affine_normal(set: &ConvexSet) -> Option<Vector> {
    let ConvexSet::Affine(a) = set else {
        return None;
    };
    if a.directions().len() + 1 != set.dim() {
        return None;
    }
    (0..set.dim())
        .map(|j| a.orthogonal_component(&Vector::unit(set.dim(), j)))
        .max_by(|u, v| u.norm().total_cmp(&v.norm()))
        .map(|u| u.div(u.norm()))
}

fn run_certify(args: CertifyArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let file = ScenarioFile::load(&args.scenario)?;
    let sc = file.scenario()?;
    let x = parse_point(&args.at, sc.dim())?;
    let tol = args
        .tol
        .or(file.certify.as_ref().and_then(|c| c.tolerance))
        .unwrap_or(CERTIFICATE_TOL);
    if tol.is_nan() || tol < 0.0 {
        return Err(CliError::Schema("--tol: must be nonnegative".into()));
    }

    let mut cert = certify::stationarity_residual(&sc, &x, tol)?;
    if cert.residual.is_some() {
        let dirs = match file.certify_directions()? {
            Some(d) => d,
            None => certify::tangent_basis(sc.constraint(), &x)?,
        };
        if !dirs.is_empty() {
            cert = cert.with_cosine_sums(&sc, &dirs)?;
        }
    }
    let two_set = match (sc.targets().len(), affine_normal(sc.constraint())) {
        (2, Some(a)) => Some(certify::two_set_check(&sc, &x, &a, tol)?),
        _ => None,
    };

    let p = args.precision;
    if args.json {
        let v = |x: &Vector| x.as_slice().to_vec();
        let mut record = json!({
            "point": v(&cert.point),
            "unit_vectors": cert.unit_vectors.iter().map(v).collect::<Vec<_>>(),
            "residual": cert.residual,
            "tolerance": tol,
            "verdict": cert.verdict.label(),
        });
        if let heron_core::Verdict::Inapplicable { reason } = &cert.verdict {
            record["reason"] = json!(reason);
        }
        if let Some(sums) = &cert.cosine_sums {
            record["cosine_sums"] = sums
                .iter()
                .map(|(d, s)| json!({ "direction": v(d), "sum": s }))
                .collect();
        }
        if let Some(ts) = &two_set {
            record["two_set"] = match ts {
                TwoSetVerdict::Inapplicable(reason) => json!({ "inapplicable": reason }),
                TwoSetVerdict::Checked {
                    opposite,
                    cos_first,
                    cos_second,
                    necessary_holds,
                    sufficient_holds,
                } => json!({
                    "opposite": opposite,
                    "cos_first": cos_first,
                    "cos_second": cos_second,
                    "necessary_holds": necessary_holds,
                    "sufficient_holds": sufficient_holds,
                }),
            };
        }
        writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&record).expect("json")
        )
        .map_err(io)?;
        return Ok(());
    }

    writeln!(out, "point={:.p$}", cert.point).map_err(io)?;
    for (i, a) in cert.unit_vectors.iter().enumerate() {
        writeln!(out, "a_{}={a:.p$}", i + 1).map_err(io)?;
    }
    if let Some(r) = cert.residual {
        writeln!(out, "residual={r:.p$e}").map_err(io)?;
    }
    writeln!(out, "tolerance={tol:e}").map_err(io)?;
    writeln!(out, "verdict={}", cert.verdict.label()).map_err(io)?;
    if let heron_core::Verdict::Inapplicable { reason } = &cert.verdict {
        writeln!(out, "reason={reason}").map_err(io)?;
    }
    if let Some(sums) = &cert.cosine_sums {
        for (d, s) in sums {
            writeln!(out, "cosine_sum{d:.p$}={s:.p$}").map_err(io)?;
        }
    }
    match &two_set {
        Some(TwoSetVerdict::Checked {
            necessary_holds,
            sufficient_holds,
            ..
        }) => {
            let suff = sufficient_holds.map_or("n/a".to_string(), |b| b.to_string());
            writeln!(out, "two_set_necessary={necessary_holds}").map_err(io)?;
            writeln!(out, "two_set_sufficient={suff}").map_err(io)?;
        }
        Some(TwoSetVerdict::Inapplicable(reason)) => {
            writeln!(out, "two_set=inapplicable ({reason})").map_err(io)?;
        }
        None => {}
    }
    Ok(())
}

fn run_oracle(args: OracleArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let file = ScenarioFile::load(&args.scenario)?;
    let sc = file.scenario()?;
    let mut cfg = file.oracle_config()?;
    if let Some(g) = args.grid {
        cfg.grid_points_per_axis = g;
    }
    if let Some(r) = args.rounds {
        cfg.refinement_rounds = r;
    }
    let r = grid_solve(&sc, &cfg).map_err(|e| match e {
        heron_core::HeronError::InvalidConfig(m) => CliError::Schema(format!("oracle: {m}")),
        other => CliError::Numeric(other),
    })?;
    let p = args.precision;
    writeln!(out, "point={:.p$}", r.point).map_err(io)?;
    writeln!(out, "value={:.p$}", r.value).map_err(io)?;
    writeln!(out, "error_bound={:.p$e}", r.error_bound).map_err(io)?;
    writeln!(out, "spacing={:.p$e}", r.spacing).map_err(io)?;
    writeln!(out, "evaluations={}", r.evaluations).map_err(io)?;
    Ok(())
}
