//! Command-line front end: JSON problem files in, JSON verdict reports out.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::interp::{self, AglerConfig, Feasibility, InterpConfig, InterpError, InterpolationProblem, ProblemFile};
use crate::kernels::{KernelError, Point};
use crate::lifting::{self, LiftConfig, LiftError, Outcome, Verdict};
use crate::quotient::{self, ModuleDescriptor, QuotientError, QuotientModule};
use crate::tpoly::{TrigPoly, TrigPolyError};

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_VALIDATION: i32 = 4;
pub const EXIT_NUMERICAL: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "polylift", version, about = "Certified interpolation and lifting verdicts on the polydisc")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfigArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct RunConfigArgs {
    /// Grid points per axis (default: 256 for n ≤ 2, 64 for n = 3, 16 beyond)
    #[arg(long = "grid", global = true)]
    pub grid: Option<usize>,
    /// Kernel-series truncation degree for zero-based modules
    #[arg(long = "degree", global = true, default_value_t = 12)]
    pub degree: u32,
    #[arg(long = "seed", global = true, default_value_t = 0)]
    pub seed: u64,
    /// IRLS iterations and refutation sweeps
    #[arg(long = "budget", global = true, default_value_t = 40)]
    pub budget: usize,
    #[arg(long = "tol-yes", global = true, default_value_t = 1e-6)]
    pub tol_yes: f64,
    #[arg(long = "tol-no", global = true, default_value_t = 1e-3)]
    pub tol_no: f64,
    /// Write the report here instead of stdout
    #[arg(long = "out", global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pick matrix positivity
    Pick {
        #[arg(long)]
        problem: PathBuf,
    },
    /// Schur interpolation verdict
    Interp {
        #[arg(long)]
        problem: PathBuf,
    },
    /// Lifting verdict for the compression of a polynomial symbol to a module
    Lift {
        #[arg(long)]
        module: PathBuf,
        #[arg(long)]
        symbol: PathBuf,
    },
    /// Perturbation of an analytic polynomial into the Schur class
    Perturb {
        #[arg(long)]
        symbol: PathBuf,
    },
    /// Carathéodory–Fejér extension by terms of degree > m
    Cf {
        #[arg(long)]
        symbol: PathBuf,
        #[arg(long)]
        m: u32,
    },
    /// Agler decomposition feasibility (two variables)
    Agler {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long, default_value_t = 5000)]
        max_iters: usize,
        #[arg(long, default_value_t = 1e-10)]
        psd_tol: f64,
    },
    /// Run the built-in example suite
    Demo,
    /// Check a problem file against its schema and invariants
    Validate {
        #[arg(long)]
        problem: PathBuf,
    },
}

/// Configuration echoed into every report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub grid_points_per_axis: Option<usize>,
    pub trunc_degree: u32,
    pub seed: u64,
    pub budget_iters: usize,
    pub yes_tol: f64,
    pub no_margin: f64,
    pub refute_margin: f64,
    pub ortho_tol: f64,
    pub eps_irls: f64,
    pub output_path: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfigArgs {
            grid: None,
            degree: 12,
            seed: 0,
            budget: 40,
            tol_yes: 1e-6,
            tol_no: 1e-3,
            out: None,
        }
        .into()
    }
}

impl From<RunConfigArgs> for RunConfig {
    fn from(a: RunConfigArgs) -> Self {
        let lift = LiftConfig::default();
        Self {
            grid_points_per_axis: a.grid,
            trunc_degree: a.degree,
            seed: a.seed,
            budget_iters: a.budget,
            yes_tol: a.tol_yes,
            no_margin: a.tol_no,
            refute_margin: lift.refute_margin,
            ortho_tol: lift.ortho_tol,
            eps_irls: lift.eps_irls,
            output_path: a.out,
        }
    }
}

impl RunConfig {
    pub fn lift(&self) -> LiftConfig {
        LiftConfig {
            grid_points: self.grid_points_per_axis,
            seed: self.seed,
            budget_iters: self.budget_iters,
            yes_tol: self.yes_tol,
            no_margin: self.no_margin,
            refute_margin: self.refute_margin,
            ortho_tol: self.ortho_tol,
            eps_irls: self.eps_irls,
            max_generator_degree: None,
        }
    }

    pub fn interp(&self) -> InterpConfig {
        InterpConfig {
            lift: self.lift(),
            degree: self.trunc_degree,
        }
    }

    fn validate(&self) -> Result<(), CliError> {
        let positive = [self.yes_tol, self.no_margin];
        if self.trunc_degree == 0 || self.budget_iters == 0 || self.grid_points_per_axis == Some(0) {
            return Err(CliError::Validation("degree, budget and grid must be positive".into()));
        }
        if positive.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
            return Err(CliError::Validation("tolerances must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("numerical error: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => EXIT_PARSE,
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::Numerical(_) => EXIT_NUMERICAL,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Parse(_) => "ParseError",
            CliError::Validation(_) => "ValidationError",
            CliError::Numerical(_) => "NumericalError",
        }
    }
}

fn kernel_is_numerical(e: &KernelError) -> bool {
    matches!(e, KernelError::IllConditioned { .. } | KernelError::NotPositiveDefinite)
}

fn quotient_is_numerical(e: &QuotientError) -> bool {
    match e {
        QuotientError::Kernel(k) => kernel_is_numerical(k),
        QuotientError::IllConditioned { .. } | QuotientError::NotPositiveDefinite => true,
        _ => false,
    }
}

fn lift_is_numerical(e: &LiftError) -> bool {
    match e {
        LiftError::Quotient(q) => quotient_is_numerical(q),
        LiftError::Kernel(k) => kernel_is_numerical(k),
        _ => false,
    }
}

fn classify(numerical: bool, message: String) -> CliError {
    if numerical {
        CliError::Numerical(message)
    } else {
        CliError::Validation(message)
    }
}

impl From<InterpError> for CliError {
    fn from(e: InterpError) -> Self {
        let numerical = match &e {
            InterpError::Kernel(k) => kernel_is_numerical(k),
            InterpError::Quotient(q) => quotient_is_numerical(q),
            InterpError::Lift(l) => lift_is_numerical(l),
            _ => false,
        };
        classify(numerical, e.to_string())
    }
}

impl From<LiftError> for CliError {
    fn from(e: LiftError) -> Self {
        classify(lift_is_numerical(&e), e.to_string())
    }
}

impl From<QuotientError> for CliError {
    fn from(e: QuotientError) -> Self {
        classify(quotient_is_numerical(&e), e.to_string())
    }
}

impl From<KernelError> for CliError {
    fn from(e: KernelError) -> Self {
        classify(kernel_is_numerical(&e), e.to_string())
    }
}

impl From<TrigPolyError> for CliError {
    fn from(e: TrigPolyError) -> Self {
        CliError::Validation(e.to_string())
    }
}

/// One JSON report per invocation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub outcome: String,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub certificate: Value,
    pub witness: Value,
    pub details: Value,
    pub diagnostics: Vec<String>,
    pub config_echo: RunConfig,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        match self.outcome.as_str() {
            "CertifiedYes" | "psd" | "feasible" | "ok" => EXIT_YES,
            "CertifiedNo" | "not_psd" | "infeasible" | "mismatch" => EXIT_NO,
            "invalid" => EXIT_VALIDATION,
            _ => EXIT_INCONCLUSIVE,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn read_problem(path: &Path) -> Result<InterpolationProblem, CliError> {
    let file: ProblemFile = read_json(path)?;
    let issues = file.issues();
    if !issues.is_empty() {
        let list: Vec<String> = issues.iter().map(ToString::to_string).collect();
        return Err(CliError::Validation(list.join("; ")));
    }
    Ok(InterpolationProblem::try_from(file)?)
}

fn verdict_report(command: &str, verdict: &Verdict, details: Value, config: &RunConfig) -> Report {
    let certificate = match &verdict.estimate.lower_witness {
        Some(c) => to_value(c),
        None => Value::Null,
    };
    let witness = match (&verdict.refutation, &verdict.estimate.upper_witness) {
        (Some(r), _) => json!({"kind": "refutation", "refutation": r}),
        (None, Some(h)) => json!({"kind": "upper_bound", "h": h, "grid": verdict.estimate.upper_grid}),
        (None, None) => Value::Null,
    };
    let mut details = details;
    if let Value::Object(map) = &mut details {
        map.insert("psi".into(), to_value(&verdict.psi));
        map.insert("operator_norm".into(), to_value(&verdict.operator_norm));
        map.insert("generator_degree".into(), json!(verdict.generator_degree));
        map.insert("grid_points".into(), json!(verdict.grid_points));
        map.insert("certificate_count".into(), json!(verdict.estimate.certificates.len()));
    }
    Report {
        command: command.into(),
        outcome: verdict.outcome.as_str().into(),
        lower: Some(verdict.estimate.lower).filter(|v| v.is_finite()),
        upper: Some(verdict.estimate.upper).filter(|v| v.is_finite()),
        certificate,
        witness,
        details,
        diagnostics: verdict.diagnostics.clone(),
        config_echo: config.clone(),
    }
}

fn plain_report(command: &str, outcome: &str, details: Value, diagnostics: Vec<String>, config: &RunConfig) -> Report {
    Report {
        command: command.into(),
        outcome: outcome.into(),
        lower: None,
        upper: None,
        certificate: Value::Null,
        witness: Value::Null,
        details,
        diagnostics,
        config_echo: config.clone(),
    }
}

fn pick_report(prob: &InterpolationProblem, config: &RunConfig) -> Report {
    let pick = interp::pick_matrix_check(prob);
    let outcome = if pick.psd { "psd" } else { "not_psd" };
    let mut r = plain_report("pick", outcome, json!({"pick": pick}), Vec::new(), config);
    r.certificate = json!({"min_eigenvalue": pick.min_eigenvalue});
    r
}

fn interp_report(prob: &InterpolationProblem, config: &RunConfig) -> Result<Report, CliError> {
    let report = interp::interpolation_verdict(prob, &config.interp())?;
    let details = json!({
        "pick": report.pick,
        "kernel_coefficients": report.psi,
        "interpolant": report.interpolant,
        "construction": report.construction,
    });
    Ok(verdict_report("interp", &report.verdict, details, config))
}

/// Lifting verdict for `S_φ` on `Q`; a non-contractive `S_φ` has no Schur lift.
fn lift_report(desc: ModuleDescriptor, symbol: &TrigPoly, config: &RunConfig) -> Result<Report, CliError> {
    let desc = match desc {
        ModuleDescriptor::ZeroBased { points, trunc: None } => ModuleDescriptor::ZeroBased {
            points,
            trunc: Some(config.trunc_degree),
        },
        d => d,
    };
    let q = QuotientModule::from_descriptor(&desc)?;
    let x = quotient::compress(&q, symbol)?;
    let details = json!({"module": desc});
    match lifting::lift_verdict(&q, &x, &config.lift()) {
        Ok(v) => Ok(verdict_report("lift", &v, details, config)),
        Err(LiftError::NotAContraction { norm }) => {
            let mut r = plain_report(
                "lift",
                Outcome::CertifiedNo.as_str(),
                json!({"module": desc, "operator_norm": norm}),
                vec![format!("‖X‖ = {norm:.12} > 1, so no Schur lift exists")],
                config,
            );
            r.certificate = json!({"operator_norm": norm});
            Ok(r)
        }
        Err(e) => Err(e.into()),
    }
}

fn agler_report(prob: &InterpolationProblem, cfg: &AglerConfig, config: &RunConfig) -> Result<Report, CliError> {
    let r = interp::agler_feasibility(prob, cfg)?;
    let outcome = match r.feasible {
        Feasibility::Feasible => "feasible",
        Feasibility::Infeasible => "infeasible",
        Feasibility::Unknown => "unknown",
    };
    let mut report = plain_report(
        "agler",
        outcome,
        json!({"iterations": r.iterations, "final_gap": r.final_gap, "agler_config": cfg}),
        r.diagnostics.clone(),
        config,
    );
    report.certificate = match &r.witness {
        Some(w) => to_value(w),
        None if r.feasible == Feasibility::Infeasible => json!({
            "restriction_failures": r.restriction_failures,
            "pick_min_eigenvalue": r.pick_min_eigenvalue,
        }),
        None => Value::Null,
    };
    Ok(report)
}

fn validate_report(path: &Path, config: &RunConfig) -> Result<Report, CliError> {
    let file: ProblemFile = read_json(path)?;
    let issues: Vec<String> = file.issues().iter().map(ToString::to_string).collect();
    if issues.is_empty() {
        let prob = InterpolationProblem::try_from(file)?;
        Ok(plain_report("validate", "ok", json!({"problem": prob}), Vec::new(), config))
    } else {
        Ok(plain_report("validate", "invalid", json!({"issues": issues}), issues, config))
    }
}

/// One line of the example suite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DemoCase {
    pub name: String,
    pub expected: String,
    pub got: String,
    pub matched: bool,
}

fn case(name: &str, expected: &str, got: Result<String, CliError>) -> DemoCase {
    let got = got.unwrap_or_else(|e| format!("error: {e}"));
    DemoCase {
        name: name.into(),
        expected: expected.into(),
        matched: got == expected,
        got,
    }
}

fn pass(ok: bool) -> String {
    if ok { "pass" } else { "fail" }.into()
}

fn rc(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Every worked example with its expected outcome, in a fixed order.
pub fn demo_cases(config: &RunConfig) -> Vec<DemoCase> {
    let lift = config.lift();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let z1 = TrigPoly::coordinate(2, 0);
    let z2 = TrigPoly::coordinate(2, 1);
    let two_node = |w: f64| InterpolationProblem::real(&[&[0.0, 0.0], &[0.5, 0.0]], &[0.0, w]);
    let mut out = Vec::new();

    out.push(case("homogeneous (z1+z2)/sqrt2 on Q_1", "CertifiedNo", (|| {
        let q = QuotientModule::homogeneous(1, 2)?;
        let p = &z1.scale(rc(s)) + &z2.scale(rc(s));
        let x = quotient::compress(&q, &p)?;
        Ok(lifting::lift_verdict(&q, &x, &lift)?.outcome.as_str().to_string())
    })()));
    out.push(case("homogeneous z1 z2 on Q_2", "CertifiedYes", (|| {
        let q = QuotientModule::homogeneous(2, 2)?;
        let x = quotient::compress(&q, &(&z1 * &z2))?;
        Ok(lifting::lift_verdict(&q, &x, &lift)?.outcome.as_str().to_string())
    })()));
    out.push(case("kernel coefficients c = (-3/2, 3/2)", "pass", (|| {
        let psi = interp::solve_psi(&two_node(0.5)?)?;
        let ok = (psi.coeffs()[0] - rc(-1.5)).norm() <= 1e-12 && (psi.coeffs()[1] - rc(1.5)).norm() <= 1e-12;
        Ok(pass(ok))
    })()));
    out.push(case("Pick one variable w = (0, 1/2)", "psd", (|| {
        let p = interp::pick_matrix_check(&InterpolationProblem::real(&[&[0.0], &[0.5]], &[0.0, 0.5])?);
        Ok(if p.psd { "psd" } else { "not_psd" }.into())
    })()));
    out.push(case("Pick one variable w = (0, 0.9)", "not_psd", (|| {
        let p = interp::pick_matrix_check(&InterpolationProblem::real(&[&[0.0], &[0.5]], &[0.0, 0.9])?);
        Ok(if p.psd { "psd" } else { "not_psd" }.into())
    })()));
    out.push(case("perturbation f = 0.3 z1 + 0.4 z2", "CertifiedYes", (|| {
        let f = &z1.scale(rc(0.3)) + &z2.scale(rc(0.4));
        Ok(lifting::perturb_verdict(&f, &lift)?.outcome.as_str().to_string())
    })()));
    out.push(case("perturbation f = 2", "CertifiedNo", (|| {
        Ok(lifting::perturb_verdict(&TrigPoly::constant(2, rc(2.0)), &lift)?.outcome.as_str().to_string())
    })()));
    out.push(case("Caratheodory-Fejer p = 0.5, m = 1", "CertifiedYes", (|| {
        Ok(lifting::cf_verdict(&TrigPoly::constant(1, rc(0.5)), 1, &lift)?.outcome.as_str().to_string())
    })()));
    out.push(case("three-point linear interpolant", "pass", (|| {
        let om = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        let nodes: Vec<Point> = (0..3)
            .map(|j| Point::new(vec![om.powu(j) * 0.6, om.powu(2 * j) * 0.6]))
            .collect::<Result<_, _>>()?;
        let basis: Vec<Vec<Complex64>> = (1..3).map(|i| nodes.iter().map(|z| z.coords()[i - 1]).collect()).collect();
        let eg = interp::eg_construct(&nodes, &[rc(0.3), rc(0.0), rc(0.0)], &basis)?;
        let sup = interp::grid_sup(&eg.phi, 512)?;
        Ok(pass(eg.report.interpolation_error <= 1e-10 && sup <= 1.0 + 1e-9))
    })()));
    out.push(case("interpolation, single node", "CertifiedYes", (|| {
        let p = InterpolationProblem::real(&[&[0.2, -0.1]], &[0.5])?;
        Ok(interp::interpolation_verdict(&p, &config.interp())?.verdict.outcome.as_str().to_string())
    })()));
    out.push(case("interpolation, (0,0),(1/2,0) to (0, 0.9)", "CertifiedNo", (|| {
        Ok(interp::interpolation_verdict(&two_node(0.9)?, &config.interp())?.verdict.outcome.as_str().to_string())
    })()));
    let agler = |w: &[f64], nodes: &[&[f64]]| -> Result<String, CliError> {
        let p = InterpolationProblem::real(nodes, w)?;
        Ok(match interp::agler_feasibility(&p, &AglerConfig::default())?.feasible {
            Feasibility::Feasible => "feasible",
            Feasibility::Infeasible => "infeasible",
            Feasibility::Unknown => "unknown",
        }
        .into())
    };
    out.push(case("Agler one node w = 0.5", "feasible", agler(&[0.5], &[&[0.0, 0.0]])));
    out.push(case("Agler two nodes w = (0, 1/2)", "feasible", agler(&[0.0, 0.5], &[&[0.0, 0.0], &[0.5, 0.0]])));
    out.push(case("Agler two nodes w = (0, 0.9)", "infeasible", agler(&[0.0, 0.9], &[&[0.0, 0.0], &[0.5, 0.0]])));
    out
}

/// Executes one subcommand. Errors carry their exit-code class.
pub fn execute(command: &Command, config: &RunConfig) -> Result<Report, CliError> {
    config.validate()?;
    match command {
        Command::Pick { problem } => Ok(pick_report(&read_problem(problem)?, config)),
        Command::Interp { problem } => interp_report(&read_problem(problem)?, config),
        Command::Lift { module, symbol } => lift_report(read_json(module)?, &read_json(symbol)?, config),
        Command::Perturb { symbol } => {
            let f: TrigPoly = read_json(symbol)?;
            let v = lifting::perturb_verdict(&f, &config.lift())?;
            Ok(verdict_report("perturb", &v, json!({}), config))
        }
        Command::Cf { symbol, m } => {
            let p: TrigPoly = read_json(symbol)?;
            let v = lifting::cf_verdict(&p, *m, &config.lift())?;
            Ok(verdict_report("cf", &v, json!({"m": m}), config))
        }
        Command::Agler {
            problem,
            max_iters,
            psd_tol,
        } => agler_report(
            &read_problem(problem)?,
            &AglerConfig {
                max_iters: *max_iters,
                psd_tol: *psd_tol,
            },
            config,
        ),
        Command::Demo => {
            let cases = demo_cases(config);
            let all = cases.iter().all(|c| c.matched);
            let diagnostics = cases
                .iter()
                .filter(|c| !c.matched)
                .map(|c| format!("{}: expected {}, got {}", c.name, c.expected, c.got))
                .collect();
            Ok(plain_report("demo", if all { "ok" } else { "mismatch" }, json!({"cases": cases}), diagnostics, config))
        }
        Command::Validate { problem } => validate_report(problem, config),
    }
}

fn error_json(e: &CliError, config: &RunConfig) -> String {
    let v = json!({
        "error": {"kind": e.kind(), "message": e.to_string()},
        "config_echo": config,
    });
    serde_json::to_string_pretty(&v).expect("serializable") + "\n"
}

struct Evaluated {
    text: String,
    code: i32,
    config: RunConfig,
    error: Option<CliError>,
}

fn evaluate(cli: &Cli) -> Evaluated {
    let config = RunConfig::from(cli.config.clone());
    match execute(&cli.command, &config) {
        Ok(report) => Evaluated {
            text: report.to_json(),
            code: report.exit_code(),
            config,
            error: None,
        },
        Err(e) => Evaluated {
            text: error_json(&e, &config),
            code: e.exit_code(),
            config,
            error: Some(e),
        },
    }
}

/// Like [`run`] but returns the report text instead of printing it. Usage errors come back as
/// an error object with exit code 3; `--out` is still honored.
pub fn run_to_string<I, T>(args: I) -> (String, i32)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_YES };
            let v = json!({"error": {"kind": "ParseError", "message": e.to_string()}});
            return (serde_json::to_string_pretty(&v).expect("serializable") + "\n", code);
        }
    };
    let Evaluated { text, code, config, .. } = evaluate(&cli);
    if let Some(path) = &config.output_path {
        if let Err(e) = fs::write(path, &text) {
            let v = json!({"error": {"kind": "IoError", "message": format!("cannot write {}: {e}", path.display())}});
            return (serde_json::to_string_pretty(&v).expect("serializable") + "\n", EXIT_PARSE);
        }
    }
    (text, code)
}

/// Parses arguments, runs, writes the report, and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_YES };
            let _ = e.print();
            return code;
        }
    };
    let Evaluated { text, code, config, error } = evaluate(&cli);
    if let Some(e) = error {
        eprintln!("{e}");
    }
    match &config.output_path {
        Some(path) => {
            if let Err(e) = fs::write(path, &text) {
                eprintln!("cannot write {}: {e}", path.display());
                return EXIT_PARSE;
            }
        }
        None => print!("{text}"),
    }
    code
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_outcomes() {
        let cfg = RunConfig::default();
        let r = plain_report("pick", "psd", Value::Null, Vec::new(), &cfg);
        assert_eq!(r.exit_code(), 0);
        let r = plain_report("agler", "unknown", Value::Null, Vec::new(), &cfg);
        assert_eq!(r.exit_code(), 2);
        assert_eq!(CliError::Numerical(String::new()).exit_code(), 5);
    }

    #[test]
    fn usage_errors_exit_3() {
        assert_eq!(run(["polylift", "nonsense"]), EXIT_PARSE);
        assert_eq!(run(["polylift", "pick"]), EXIT_PARSE);
    }
}
