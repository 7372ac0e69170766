//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 validation failure
//! (including a failed `repro` check), 3 infeasible request.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use crate::bell::i_alpha_beta;
use crate::correlations::{
    check_no_signalling, chsh_symmetries, communication_cost, local_decomposition, max_chsh, Behavior,
    BehaviorFile, Locality, PROB_TOL,
};
use crate::doubled::doubled_report;
use crate::error::{Error, Result};
use crate::nspoly::{ns_curve, NS_CURVE_HEADER};
use crate::numeric::fmt_sig;
use crate::qubit::{max_violation_ialpha, max_violation_ialphabeta, numeric_maximize, SearchOptions};
use crate::randomness::{
    curve, global_guessing_at_max, guessing_pair, ialpha_quantum_max, linear_grid, write_curve_csv,
    CURVE_HEADER,
};
use crate::repro::{self, ReproConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;

const DIGITS: usize = 9;

#[derive(Debug, Parser)]
#[command(name = "bellrand", version, about = "Device-independent randomness from Bell violations")]
struct Cli {
    #[command(flatten)]
    run: RunArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
struct RunArgs {
    /// Seed for every random choice
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Restarts of the numeric maximizer
    #[arg(long, global = true, default_value_t = 50)]
    restarts: usize,
    /// Tolerance for numeric-vs-closed-form comparisons
    #[arg(long, global = true, default_value_t = 1e-6)]
    tol: f64,
}

/// Validated run parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub restarts: usize,
    pub tol: f64,
}

impl RunConfig {
    pub fn new(seed: u64, restarts: usize, tol: f64) -> Result<Self> {
        if restarts < 1 {
            return Err(Error::Domain("--restarts must be at least 1".into()));
        }
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Error::Domain(format!("--tol must be positive, got {tol}")));
        }
        Ok(Self { seed, restarts, tol })
    }
}

/// `min:max:steps`. Either endpoint may be `qmax`, the quantum maximum of
/// the expression in question.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub min: Endpoint,
    pub max: Endpoint,
    pub steps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Endpoint {
    Value(f64),
    QuantumMax,
}

impl Endpoint {
    fn resolve(self, qmax: f64) -> f64 {
        match self {
            Endpoint::Value(x) => x,
            Endpoint::QuantumMax => qmax,
        }
    }
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [min, max, steps] = parts[..] else {
            return Err(format!("expected min:max:steps, got '{s}'"));
        };
        let endpoint = |t: &str| -> std::result::Result<Endpoint, String> {
            if t == "qmax" {
                return Ok(Endpoint::QuantumMax);
            }
            let x: f64 = t.parse().map_err(|_| format!("bad grid endpoint '{t}'"))?;
            if x.is_finite() {
                Ok(Endpoint::Value(x))
            } else {
                Err(format!("grid endpoint must be finite, got '{t}'"))
            }
        };
        let steps: usize = steps.parse().map_err(|_| format!("bad step count '{steps}'"))?;
        if steps < 2 {
            return Err(format!("grid needs at least 2 steps, got {steps}"));
        }
        Ok(GridSpec {
            min: endpoint(min)?,
            max: endpoint(max)?,
            steps,
        })
    }
}

impl GridSpec {
    pub fn points(&self, qmax: f64) -> Result<Vec<f64>> {
        let (min, max) = (self.min.resolve(qmax), self.max.resolve(qmax));
        if min > max {
            return Err(Error::Domain(format!("grid minimum {min} exceeds maximum {max}")));
        }
        Ok(linear_grid(min, max, self.steps))
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a behavior file: normalization, no-signalling, locality
    Validate { path: PathBuf },
    /// Local and quantum bounds of I_alpha^beta
    Bounds {
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 0.0)]
        beta: f64,
    },
    /// Certified guessing-probability curve for I_alpha, as CSV
    Curve {
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        /// min:max:steps (`qmax` = 2 sqrt(1 + alpha^2))
        #[arg(long, default_value = "2:qmax:50")]
        grid: GridSpec,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// No-signalling guessing probability against CHSH, as CSV
    NsCurve {
        /// min:max:steps (`qmax` = 4)
        #[arg(long, default_value = "2:4:21")]
        grid: GridSpec,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Doubled-realization report, as JSON
    Doubled {
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Numeric maximum of I_alpha^beta over two-qubit realizations
    Maximize {
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 0.0)]
        beta: f64,
        /// Fix the state angle instead of optimizing it
        #[arg(long)]
        theta: Option<f64>,
    },
    /// Recompute and check every headline result
    Repro {
        /// Directory for the report and CSV/JSON artifacts
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

pub fn main() -> i32 {
    run(std::env::args_os(), &mut io::stdout().lock(), &mut io::stderr().lock())
}

/// Parses `args` and runs the command; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Validation(_) | Error::DimensionMismatch { .. } => EXIT_VALIDATION,
        Error::Infeasible(_) => EXIT_INFEASIBLE,
        Error::Domain(_) | Error::Io(_) | Error::Json(_) => EXIT_USAGE,
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    let cfg = RunConfig::new(cli.run.seed, cli.run.restarts, cli.run.tol)?;
    match cli.command {
        Command::Validate { path } => cmd_validate(&path, out),
        Command::Bounds { alpha, beta } => cmd_bounds(alpha, beta, out),
        Command::Curve { alpha, grid, out: path } => cmd_curve(alpha, &grid, path.as_deref(), out),
        Command::NsCurve { grid, out: path } => cmd_ns_curve(&grid, path.as_deref(), out),
        Command::Doubled { alpha, beta, out: path } => cmd_doubled(alpha, beta, path.as_deref(), out),
        Command::Maximize { alpha, beta, theta } => cmd_maximize(alpha, beta, theta, &cfg, out),
        Command::Repro { out: dir } => cmd_repro(&cfg, dir.as_deref(), out),
    }
}

fn emit(path: Option<&Path>, out: &mut dyn Write, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => fs::write(p, bytes)?,
        None => out.write_all(bytes)?,
    }
    Ok(())
}

pub fn cmd_validate(path: &Path, out: &mut dyn Write) -> Result<i32> {
    let text = fs::read_to_string(path)?;
    let file: BehaviorFile = serde_json::from_str(&text)?;
    writeln!(out, "file: {}", path.display())?;

    let table = file.p;
    let mut valid = true;
    let mut norm_errors = Vec::new();
    for (row, r) in table.iter().enumerate() {
        if let Some(x) = r.iter().find(|x| !x.is_finite() || **x < -PROB_TOL) {
            norm_errors.push(format!("row {} has entry {x}", row + 1));
        }
        let s: f64 = r.iter().sum();
        if (s - 1.0).abs() > PROB_TOL {
            norm_errors.push(format!("row {} sums to {s}", row + 1));
        }
    }
    if norm_errors.is_empty() {
        writeln!(out, "normalization: ok")?;
    } else {
        valid = false;
        writeln!(out, "normalization: FAILED ({})", norm_errors.join("; "))?;
    }
    let ns = check_no_signalling(&table, PROB_TOL);
    if ns.holds() {
        writeln!(out, "no-signalling: ok")?;
    } else {
        valid = false;
        for v in &ns.violations {
            writeln!(out, "no-signalling: FAILED ({v})")?;
        }
    }
    if !valid {
        writeln!(out, "verdict: invalid")?;
        return Ok(EXIT_VALIDATION);
    }

    let beh = Behavior::new(table)?;
    let values = chsh_symmetries(&beh);
    for (k, v) in values.iter().enumerate() {
        writeln!(out, "CHSH[{k}]: {}", fmt_sig(*v, DIGITS))?;
    }
    let (k, chsh) = max_chsh(&beh);
    match local_decomposition(&beh) {
        Locality::Local { .. } => {
            writeln!(out, "locality: local (LP feasible)")?;
            writeln!(out, "verdict: local, CHSH={}", fmt_sig(chsh, DIGITS))?;
        }
        Locality::NonLocal { .. } => {
            writeln!(out, "locality: non-local (LP infeasible; symmetry {k})")?;
            writeln!(out, "communication cost: {}", fmt_sig(communication_cost(&beh), DIGITS))?;
            writeln!(out, "verdict: non-local, CHSH={}", fmt_sig(chsh, DIGITS))?;
        }
    }
    Ok(EXIT_OK)
}

pub fn cmd_bounds(alpha: f64, beta: f64, out: &mut dyn Write) -> Result<i32> {
    let expr = i_alpha_beta(alpha, beta)?;
    writeln!(out, "alpha: {alpha}")?;
    writeln!(out, "beta: {beta}")?;
    let local = expr.local_bound();
    writeln!(out, "local bound: {}", fmt_sig(local.local_bound, DIGITS))?;

    let max = max_violation_ialphabeta(alpha, beta)?;
    writeln!(out, "quantum maximum: {}", fmt_sig(max.value, DIGITS))?;
    writeln!(out, "optimal theta: {}", fmt_sig(max.theta_star, DIGITS))?;
    let a2 = max.realization.correlators().alice[1];
    writeln!(
        out,
        "G_2 at maximum: {} (<A_2> = {})",
        fmt_sig(0.5 * (1.0 + a2.abs()), DIGITS),
        fmt_sig(a2.abs(), DIGITS)
    )?;
    if beta == 0.0 {
        let (_, cv) = max_violation_ialpha(alpha)?;
        let chsh = crate::bell::BellExpression::chsh().evaluate(&cv);
        writeln!(out, "CHSH at maximum: {}", fmt_sig(chsh, DIGITS))?;
        let beh = crate::correlations::behavior_from_correlators(&cv)?;
        let g_pair = (0..2).map(|v| guessing_pair(&beh, 1, v)).fold(0.0, f64::max);
        let g = global_guessing_at_max(alpha)?;
        debug_assert!((g_pair - g.g).abs() < 1e-12);
        writeln!(out, "g_pair at maximum: {}", fmt_sig(g.g, DIGITS))?;
        writeln!(out, "min-entropy: {} bits", fmt_sig(g.hmin, DIGITS))?;
    }
    Ok(EXIT_OK)
}

pub fn cmd_curve(alpha: f64, grid: &GridSpec, path: Option<&Path>, out: &mut dyn Write) -> Result<i32> {
    i_alpha_beta(alpha, 0.0)?;
    let points = curve(alpha, &grid.points(ialpha_quantum_max(alpha))?);
    let mut buf = Vec::new();
    write_curve_csv(&mut buf, CURVE_HEADER, &points)?;
    emit(path, out, &buf)?;
    Ok(EXIT_OK)
}

pub fn cmd_ns_curve(grid: &GridSpec, path: Option<&Path>, out: &mut dyn Write) -> Result<i32> {
    let points = ns_curve(&grid.points(4.0)?);
    let mut buf = Vec::new();
    write_curve_csv(&mut buf, NS_CURVE_HEADER, &points)?;
    emit(path, out, &buf)?;
    Ok(EXIT_OK)
}

pub fn cmd_doubled(alpha: f64, beta: f64, path: Option<&Path>, out: &mut dyn Write) -> Result<i32> {
    let report = doubled_report(alpha, beta)?;
    let mut text = serde_json::to_string_pretty(&report)?;
    text.push('\n');
    emit(path, out, text.as_bytes())?;
    Ok(EXIT_OK)
}

pub fn cmd_maximize(alpha: f64, beta: f64, theta: Option<f64>, cfg: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    let expr = i_alpha_beta(alpha, beta)?;
    let opts = SearchOptions {
        restarts: cfg.restarts,
        seed: cfg.seed,
        ..SearchOptions::default()
    };
    let r = numeric_maximize(&expr, theta, &opts);
    writeln!(out, "value: {}", fmt_sig(r.value, 12))?;
    writeln!(out, "theta: {}", fmt_sig(r.realization.theta(), DIGITS))?;
    writeln!(out, "restart: {}", r.restart)?;
    writeln!(out, "{}", r.realization.to_json())?;
    Ok(EXIT_OK)
}

pub fn cmd_repro(cfg: &RunConfig, dir: Option<&Path>, out: &mut dyn Write) -> Result<i32> {
    let rc = ReproConfig {
        seed: cfg.seed,
        restarts: cfg.restarts,
        tol: cfg.tol,
    };
    let checks = repro::run_all(&rc);
    let report = repro::render(&checks);
    out.write_all(report.as_bytes())?;
    if let Some(dir) = dir {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("report.txt"), &report)?;
        let mut buf = Vec::new();
        write_curve_csv(&mut buf, CURVE_HEADER, &curve(1.0, &repro::default_curve_grid(1.0)))?;
        fs::write(dir.join("curve_alpha1.csv"), &buf)?;
        buf.clear();
        write_curve_csv(&mut buf, NS_CURVE_HEADER, &ns_curve(&linear_grid(2.0, 4.0, 21)))?;
        fs::write(dir.join("ns_curve.csv"), &buf)?;
        for eps in repro::EPSILONS {
            let mut text = serde_json::to_string_pretty(&doubled_report(1.0, 2.0 - eps)?)?;
            text.push('\n');
            fs::write(dir.join(format!("doubled_eps{eps}.json")), text)?;
        }
    }
    Ok(if checks.iter().all(|c| c.passed) { EXIT_OK } else { EXIT_VALIDATION })
}
