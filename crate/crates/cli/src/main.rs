//! `starval`: evaluate integral valuations on star bodies, check their
//! axioms, recover theta profiles, run the quermassintegral approximation
//! pipeline, and drive the measure-lab estimators.
//!
//! Exit codes: 0 success, 2 validation error, 3 numerical-contract
//! violation (a check residual above threshold, an uncertified
//! approximation, or a non-finite value in a report), 1 internal error.

mod report;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use starval::theta::ThetaFunction;
use starval::{
    approximation_report, build_quadrature, check_valuation_axiom, continuity_modulus_check,
    dual_quermassintegral, estimate_content, estimate_outer_measure, eval_valuation,
    inclusion_exclusion_residual, parse_body, parse_theta, proportionality_check, recover_theta,
    vanishing_check, BlackBoxValuation, Direction, GeodesicCap, QuadScheme, SphereQuadrature,
    StarBody, ValuationKind,
};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Debug)]
enum CliError {
    /// Bad inputs or parameters: exit 2.
    Validation(String),
    /// A numerical contract failed: exit 3.
    Contract(String),
    /// I/O or other internal failure: exit 1.
    Internal(String),
}

impl CliError {
    fn validation(e: impl std::fmt::Display) -> Self {
        CliError::Validation(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Parser)]
#[command(
    name = "starval",
    version,
    about = "Rotation-invariant valuations on star bodies",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate V(K) = ∫ theta(rho_K) dm for a body and theta spec.
    Eval(EvalArgs),
    /// Dual quermassintegral W̃_{n-k}(K) = (1/n) ∫ rho_K^k dm.
    Quermass(QuermassArgs),
    /// Recover theta(lambda) = V(lambda B) / sigma_{n-1} on a grid.
    RecoverTheta(RecoverArgs),
    /// Fit theta by a polynomial and certify the quermassintegral
    /// approximation over a probe directory.
    Approx(ApproxArgs),
    /// Residual checkers; exit 3 when a residual exceeds its threshold.
    #[command(subcommand)]
    Check(CheckCommand),
    /// Outer-measure and content estimators over the cap-bump family.
    #[command(subcommand, name = "measure-lab")]
    MeasureLab(MeasureLabCommand),
}

#[derive(Args)]
struct QuadArgs {
    /// Ambient dimension n (bodies live in R^n, integration on S^{n-1}).
    #[arg(long, default_value_t = 3)]
    n: usize,
    /// Target exact degree (product-gauss) or node count (monte-carlo).
    #[arg(long, default_value_t = 20)]
    degree: u32,
    /// Quadrature scheme: product-gauss | monte-carlo.
    #[arg(long, default_value = "product-gauss")]
    scheme: String,
    /// Seed for monte-carlo node placement.
    #[arg(long)]
    seed: Option<u64>,
}

impl QuadArgs {
    fn build(&self) -> CliResult<SphereQuadrature> {
        let scheme: QuadScheme = self.scheme.parse().map_err(CliError::Validation)?;
        build_quadrature(self.n, self.degree, scheme, self.seed).map_err(CliError::validation)
    }

    fn echo(&self) -> Value {
        let mut v = json!({
            "n": self.n,
            "degree": self.degree,
            "scheme": self.scheme,
        });
        if let Some(seed) = self.seed {
            v["seed"] = json!(seed);
        }
        v
    }
}

#[derive(Args)]
struct OutArgs {
    /// Also write the report to this path (it always goes to stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    /// Path to a .theta.json spec.
    #[arg(long)]
    theta: PathBuf,
    /// Path to a .body.json spec.
    #[arg(long)]
    body: PathBuf,
    #[command(flatten)]
    quad: QuadArgs,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct QuermassArgs {
    #[arg(long)]
    body: PathBuf,
    /// Power index k in 0..=n; W̃_{n-k} is returned.
    #[arg(long)]
    k: u32,
    #[command(flatten)]
    quad: QuadArgs,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct RecoverArgs {
    /// Theta spec backing the probed valuation.
    #[arg(long)]
    theta: PathBuf,
    /// Upper end of the recovery grid (defaults to the theta bound M).
    #[arg(long)]
    m_bound: Option<f64>,
    #[arg(long, default_value_t = 33)]
    grid_size: usize,
    #[command(flatten)]
    quad: QuadArgs,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct ApproxArgs {
    #[arg(long)]
    theta: PathBuf,
    /// Bounded-set radius M (defaults to the theta bound).
    #[arg(long)]
    m_bound: Option<f64>,
    /// Fit degree l (max 32).
    #[arg(long, default_value_t = 8)]
    fit_degree: usize,
    /// Directory of .body.json probe files (read in sorted order).
    #[arg(long)]
    probes: PathBuf,
    #[command(flatten)]
    quad: QuadArgs,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Subcommand)]
enum CheckCommand {
    /// |V(K ∪ L) + V(K ∩ L) - V(K) - V(L)| against a relative threshold.
    Axiom(CheckAxiomArgs),
    /// Alternating-sum identity over 2..=5 bodies.
    InclusionExclusion(CheckInclExclArgs),
    /// max_R |V(R K) - V(K)| over seeded Haar rotations.
    Rotation(CheckRotationArgs),
    /// |V(K) - V(K +~ eta B)| <= omega(eta) sigma_{n-1}.
    Continuity(CheckContinuityArgs),
}

#[derive(Args)]
struct CheckAxiomArgs {
    #[arg(long)]
    theta: PathBuf,
    /// Exactly two body specs.
    #[arg(long, num_args = 2)]
    bodies: Vec<PathBuf>,
    /// Threshold factor: residual must stay within tol * (1 + |V(K)| + |V(L)|).
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[command(flatten)]
    quad: QuadArgs,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct CheckInclExclArgs {
    #[arg(long)]
    theta: PathBuf,
    /// Between 2 and 5 body specs.
    #[arg(long, num_args = 2..=5)]
    bodies: Vec<PathBuf>,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[command(flatten)]
    quad: QuadArgs,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct CheckRotationArgs {
    #[arg(long)]
    theta: PathBuf,
    #[arg(long)]
    body: PathBuf,
    #[arg(long, default_value_t = 20)]
    rotations: u64,
    #[arg(long, default_value_t = 0)]
    rotation_seed: u64,
    /// Threshold per unit of V: residual must stay within tol * (1 + |V(K)|).
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[command(flatten)]
    quad: QuadArgs,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct CheckContinuityArgs {
    #[arg(long)]
    theta: PathBuf,
    #[arg(long)]
    body: PathBuf,
    #[arg(long)]
    eta: f64,
    #[command(flatten)]
    quad: QuadArgs,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Subcommand)]
enum MeasureLabCommand {
    /// sup of Ṽ over bumps supported in the cap.
    Outer(MeasureArgs),
    /// inf of Ṽ over bumps whose plateau covers the cap.
    Content(MeasureArgs),
    /// Content/measure ratios across several cap angles.
    Proportionality(ProportionalityArgs),
    /// Outer estimates against vartheta_lambda m(G) for shrinking caps.
    Vanishing(ProportionalityArgs),
}

#[derive(Args)]
struct MeasureArgs {
    #[arg(long)]
    theta: PathBuf,
    /// Cap angular radius in radians, in (0, pi).
    #[arg(long)]
    angle: f64,
    /// Cap center coordinates (defaults to the last axis pole).
    #[arg(long, value_delimiter = ',')]
    center: Option<Vec<f64>>,
    #[arg(long)]
    lambda: f64,
    #[arg(long, default_value_t = 200)]
    budget: usize,
    /// Include the full optimizer trace in the report.
    #[arg(long)]
    trace: bool,
    #[command(flatten)]
    quad: QuadArgs,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct ProportionalityArgs {
    #[arg(long)]
    theta: PathBuf,
    /// Comma-separated cap angles in radians.
    #[arg(long, value_delimiter = ',')]
    angles: Vec<f64>,
    #[arg(long)]
    lambda: f64,
    #[arg(long, default_value_t = 200)]
    budget: usize,
    #[command(flatten)]
    quad: QuadArgs,
    #[command(flatten)]
    out: OutArgs,
}

fn main() -> ExitCode {
    configure_threads();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Contract(msg)) => {
            eprintln!("numerical contract violated: {msg}");
            ExitCode::from(3)
        }
        Err(CliError::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(1)
        }
    }
}

/// STARVAL_THREADS caps the worker count (0 or unset = automatic).
fn configure_threads() {
    if let Ok(raw) = std::env::var("STARVAL_THREADS") {
        if let Ok(k) = raw.trim().parse::<usize>() {
            if k > 0 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
            }
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Eval(args) => cmd_eval(args),
        Command::Quermass(args) => cmd_quermass(args),
        Command::RecoverTheta(args) => cmd_recover(args),
        Command::Approx(args) => cmd_approx(args),
        Command::Check(cmd) => match cmd {
            CheckCommand::Axiom(args) => cmd_check_axiom(args),
            CheckCommand::InclusionExclusion(args) => cmd_check_incl_excl(args),
            CheckCommand::Rotation(args) => cmd_check_rotation(args),
            CheckCommand::Continuity(args) => cmd_check_continuity(args),
        },
        Command::MeasureLab(cmd) => match cmd {
            MeasureLabCommand::Outer(args) => cmd_measure(args, true),
            MeasureLabCommand::Content(args) => cmd_measure(args, false),
            MeasureLabCommand::Proportionality(args) => cmd_proportionality(args),
            MeasureLabCommand::Vanishing(args) => cmd_vanishing(args),
        },
    }
}

fn read_file(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))
}

fn load_theta(path: &Path) -> CliResult<ThetaFunction> {
    parse_theta(&read_file(path)?)
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

fn load_body(path: &Path, n: usize) -> CliResult<StarBody> {
    parse_body(&read_file(path)?, n)
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

fn to_value<T: serde::Serialize>(value: &T) -> CliResult<Value> {
    serde_json::to_value(value).map_err(|e| CliError::Internal(e.to_string()))
}

/// Wraps a result in the report envelope, refuses non-finite values, prints
/// to stdout, and optionally writes the file.
fn emit(config: Value, result: Value, out: &OutArgs) -> CliResult<()> {
    let envelope = json!({
        "config": config,
        "generated_at": chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Micros, true),
        "result": result,
        "tool": {"name": "starval", "version": env!("CARGO_PKG_VERSION")},
    });
    let mut path = String::new();
    if let Some(at) = report::find_non_finite(&envelope, &mut path) {
        return Err(CliError::Contract(format!(
            "non-finite value in report at `{at}`; refusing to emit"
        )));
    }
    let text = report::render(&envelope);
    print!("{text}");
    if let Some(target) = &out.out {
        std::fs::write(target, &text)
            .map_err(|e| CliError::Internal(format!("cannot write {}: {e}", target.display())))?;
    }
    Ok(())
}

fn cmd_eval(args: EvalArgs) -> CliResult<()> {
    let theta = load_theta(&args.theta)?;
    let body = load_body(&args.body, args.quad.n)?;
    let q = args.quad.build()?;
    let value = eval_valuation(&theta, &body, &q).map_err(CliError::validation)?;
    let sigma = starval::surface_measure(args.quad.n).map_err(CliError::validation)?;
    let config = json!({
        "command": "eval",
        "theta_path": args.theta,
        "body_path": args.body,
        "quadrature": args.quad.echo(),
    });
    let result = json!({
        "value": value,
        "theta": theta.label(),
        "body_sup_bound": body.sup_bound(),
        "surface_measure": sigma,
    });
    emit(config, result, &args.out)
}

fn cmd_quermass(args: QuermassArgs) -> CliResult<()> {
    let body = load_body(&args.body, args.quad.n)?;
    let q = args.quad.build()?;
    let value = dual_quermassintegral(&body, args.k, &q).map_err(CliError::validation)?;
    let config = json!({
        "command": "quermass",
        "body_path": args.body,
        "k": args.k,
        "quadrature": args.quad.echo(),
    });
    let result = json!({
        "k": args.k,
        "dual_quermassintegral": value,
        "index": format!("W~_{}", args.quad.n as i64 - args.k as i64),
    });
    emit(config, result, &args.out)
}

fn cmd_recover(args: RecoverArgs) -> CliResult<()> {
    let theta = load_theta(&args.theta)?;
    let q = args.quad.build()?;
    let m_bound = args.m_bound.unwrap_or_else(|| theta.bound());
    let v = BlackBoxValuation::from_theta(theta, q);
    let recovery = recover_theta(&v, m_bound, args.grid_size).map_err(CliError::validation)?;
    let config = json!({
        "command": "recover-theta",
        "theta_path": args.theta,
        "m_bound": m_bound,
        "grid_size": args.grid_size,
        "quadrature": args.quad.echo(),
    });
    emit(config, to_value(&recovery)?, &args.out)
}

fn cmd_approx(args: ApproxArgs) -> CliResult<()> {
    let theta = load_theta(&args.theta)?;
    let m_bound = args.m_bound.unwrap_or_else(|| theta.bound());
    let q = args.quad.build()?;
    let probes = load_probe_dir(&args.probes, args.quad.n)?;
    let family = format!(
        "{} bodies from {}",
        probes.len(),
        args.probes.display()
    );
    let report = approximation_report(
        &ValuationKind::Theta(&theta),
        m_bound,
        args.fit_degree,
        &probes,
        &family,
        &q,
    )
    .map_err(CliError::validation)?;
    let config = json!({
        "command": "approx",
        "theta_path": args.theta,
        "m_bound": m_bound,
        "fit_degree": args.fit_degree,
        "probes_dir": args.probes,
        "quadrature": args.quad.echo(),
    });
    let certified = report.certified;
    let summary = format!(
        "empirical_max_residual {:.6e} vs bound {:.6e}",
        report.empirical_max_residual,
        report.valuation_error_bound + 10.0 * report.quadrature_tol
    );
    emit(config, to_value(&report)?, &args.out)?;
    if !certified {
        return Err(CliError::Contract(format!(
            "approximation certificate failed: {summary}"
        )));
    }
    Ok(())
}

fn load_probe_dir(dir: &Path, n: usize) -> CliResult<Vec<StarBody>> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", dir.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.file_name().is_some_and(|f| f.to_string_lossy().ends_with(".body.json")))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(CliError::Validation(format!(
            "no .body.json files in {}",
            dir.display()
        )));
    }
    paths.iter().map(|p| load_body(p, n)).collect()
}

fn cmd_check_axiom(args: CheckAxiomArgs) -> CliResult<()> {
    let theta = load_theta(&args.theta)?;
    let q = args.quad.build()?;
    let k = load_body(&args.bodies[0], args.quad.n)?;
    let l = load_body(&args.bodies[1], args.quad.n)?;
    let vk = eval_valuation(&theta, &k, &q).map_err(CliError::validation)?;
    let vl = eval_valuation(&theta, &l, &q).map_err(CliError::validation)?;
    let residual =
        check_valuation_axiom(&ValuationKind::Theta(&theta), &k, &l, &q)
            .map_err(CliError::validation)?;
    let threshold = args.tol * (1.0 + vk.abs() + vl.abs());
    let config = json!({
        "command": "check axiom",
        "theta_path": args.theta,
        "body_paths": args.bodies,
        "tol": args.tol,
        "quadrature": args.quad.echo(),
    });
    let result = json!({
        "residual": residual,
        "threshold": threshold,
        "value_k": vk,
        "value_l": vl,
        "pass": residual <= threshold,
    });
    emit(config, result, &args.out)?;
    gate(residual <= threshold, "valuation axiom", residual, threshold)
}

fn cmd_check_incl_excl(args: CheckInclExclArgs) -> CliResult<()> {
    let theta = load_theta(&args.theta)?;
    let q = args.quad.build()?;
    let bodies: Vec<StarBody> = args
        .bodies
        .iter()
        .map(|p| load_body(p, args.quad.n))
        .collect::<CliResult<_>>()?;
    let residual =
        inclusion_exclusion_residual(&theta, &bodies, &q).map_err(CliError::validation)?;
    let mut scale = 1.0;
    for b in &bodies {
        scale += eval_valuation(&theta, b, &q)
            .map_err(CliError::validation)?
            .abs();
    }
    let threshold = args.tol * scale;
    let config = json!({
        "command": "check inclusion-exclusion",
        "theta_path": args.theta,
        "body_paths": args.bodies,
        "tol": args.tol,
        "quadrature": args.quad.echo(),
    });
    let result = json!({
        "residual": residual,
        "threshold": threshold,
        "bodies": bodies.len(),
        "pass": residual <= threshold,
    });
    emit(config, result, &args.out)?;
    gate(
        residual <= threshold,
        "inclusion-exclusion",
        residual,
        threshold,
    )
}

fn cmd_check_rotation(args: CheckRotationArgs) -> CliResult<()> {
    let theta = load_theta(&args.theta)?;
    let q = args.quad.build()?;
    let body = load_body(&args.body, args.quad.n)?;
    let rotations: Vec<_> = (0..args.rotations)
        .map(|i| starval::random_rotation(args.quad.n, args.rotation_seed.wrapping_add(i)))
        .collect::<Result<_, _>>()
        .map_err(CliError::validation)?;
    let base = eval_valuation(&theta, &body, &q).map_err(CliError::validation)?;
    let residual = starval::check_rotation_invariance(
        &ValuationKind::Theta(&theta),
        &body,
        &rotations,
        &q,
    )
    .map_err(CliError::validation)?;
    let threshold = args.tol * (1.0 + base.abs());
    let config = json!({
        "command": "check rotation",
        "theta_path": args.theta,
        "body_path": args.body,
        "rotations": args.rotations,
        "rotation_seed": args.rotation_seed,
        "tol": args.tol,
        "quadrature": args.quad.echo(),
    });
    let result = json!({
        "max_residual": residual,
        "threshold": threshold,
        "value": base,
        "pass": residual <= threshold,
    });
    emit(config, result, &args.out)?;
    gate(
        residual <= threshold,
        "rotation invariance",
        residual,
        threshold,
    )
}

fn cmd_check_continuity(args: CheckContinuityArgs) -> CliResult<()> {
    let theta = load_theta(&args.theta)?;
    let q = args.quad.build()?;
    let body = load_body(&args.body, args.quad.n)?;
    let check =
        continuity_modulus_check(&theta, &body, args.eta, &q).map_err(CliError::validation)?;
    let config = json!({
        "command": "check continuity",
        "theta_path": args.theta,
        "body_path": args.body,
        "eta": args.eta,
        "quadrature": args.quad.echo(),
    });
    let pass = check.satisfied;
    let (difference, bound) = (check.difference, check.bound);
    emit(config, to_value(&check)?, &args.out)?;
    gate(pass, "continuity modulus", difference, bound)
}

fn gate(pass: bool, what: &str, residual: f64, threshold: f64) -> CliResult<()> {
    if pass {
        Ok(())
    } else {
        Err(CliError::Contract(format!(
            "{what}: residual {residual:.6e} exceeds threshold {threshold:.6e}"
        )))
    }
}

fn parse_cap(
    center: &Option<Vec<f64>>,
    angle: f64,
    n: usize,
) -> CliResult<GeodesicCap> {
    let center = match center {
        Some(coords) => Direction::normalized(coords.clone()).map_err(CliError::validation)?,
        None => {
            let mut coords = vec![0.0; n];
            coords[n - 1] = 1.0;
            Direction::new(coords).map_err(CliError::validation)?
        }
    };
    if center.dim() != n {
        return Err(CliError::Validation(format!(
            "cap center has dimension {}, expected {n}",
            center.dim()
        )));
    }
    GeodesicCap::new(center, angle).map_err(CliError::validation)
}

fn cmd_measure(args: MeasureArgs, outer: bool) -> CliResult<()> {
    let theta = load_theta(&args.theta)?;
    let q = args.quad.build()?;
    let cap = parse_cap(&args.center, args.angle, args.quad.n)?;
    let estimate = if outer {
        estimate_outer_measure(&theta, &cap, args.lambda, args.budget, &q)
    } else {
        estimate_content(&theta, &cap, args.lambda, args.budget, &q)
    }
    .map_err(CliError::validation)?;
    let mut config = json!({
        "command": if outer { "measure-lab outer" } else { "measure-lab content" },
        "theta_path": args.theta,
        "angle": args.angle,
        "lambda": args.lambda,
        "budget": args.budget,
        "trace": args.trace,
        "quadrature": args.quad.echo(),
    });
    if let Some(center) = &args.center {
        config["center"] = json!(center);
    }
    let mut result = to_value(&estimate)?;
    if !args.trace {
        if let Some(obj) = result.as_object_mut() {
            obj.remove("trace");
        }
    }
    if let Some(obj) = result.as_object_mut() {
        obj.insert("cap_measure".into(), json!(cap.measure()));
        obj.insert("ratio_to_cap_measure".into(), json!(estimate.value / cap.measure()));
    }
    emit(config, result, &args.out)
}

fn cmd_proportionality(args: ProportionalityArgs) -> CliResult<()> {
    let theta = load_theta(&args.theta)?;
    let q = args.quad.build()?;
    if args.angles.len() < 3 {
        return Err(CliError::Validation(
            "proportionality needs at least 3 cap angles".into(),
        ));
    }
    let caps: Vec<GeodesicCap> = args
        .angles
        .iter()
        .map(|&a| parse_cap(&None, a, args.quad.n))
        .collect::<CliResult<_>>()?;
    let report = proportionality_check(&theta, args.lambda, &caps, args.budget, &q)
        .map_err(CliError::validation)?;
    let config = json!({
        "command": "measure-lab proportionality",
        "theta_path": args.theta,
        "angles": args.angles,
        "lambda": args.lambda,
        "budget": args.budget,
        "quadrature": args.quad.echo(),
    });
    emit(config, to_value(&report)?, &args.out)
}

fn cmd_vanishing(args: ProportionalityArgs) -> CliResult<()> {
    let theta = load_theta(&args.theta)?;
    let q = args.quad.build()?;
    let caps: Vec<GeodesicCap> = args
        .angles
        .iter()
        .map(|&a| parse_cap(&None, a, args.quad.n))
        .collect::<CliResult<_>>()?;
    let rows = vanishing_check(&theta, args.lambda, &caps, args.budget, &q)
        .map_err(CliError::validation)?;
    let all_bounded = rows
        .iter()
        .all(|r| r.estimate <= r.bound * (1.0 + 1e-9) + 1e-15);
    let config = json!({
        "command": "measure-lab vanishing",
        "theta_path": args.theta,
        "angles": args.angles,
        "lambda": args.lambda,
        "budget": args.budget,
        "quadrature": args.quad.echo(),
    });
    let result = json!({
        "rows": to_value(&rows)?,
        "all_within_bound": all_bounded,
    });
    emit(config, result, &args.out)?;
    if !all_bounded {
        return Err(CliError::Contract(
            "an outer estimate exceeded its vanishing bound".into(),
        ));
    }
    Ok(())
}
