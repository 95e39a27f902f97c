//! The `qrs` command line: `payoff`, `calibrate`, `sweep`, `simulate`, `chsh`.
//!
//! Exit codes: 0 success, 2 invalid input or configuration, 3 calibration
//! failure. Floats are reported to 10 significant digits.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::Error;
use crate::game::{
    canonical_game, estimate_payoff, exact_payoff, partial_bsm_povm, simulate_runs, Strategy,
};
use crate::qmath::SQRT_3;
use crate::states::{werner_state, RefereeEnsemble};
use crate::witness::{
    self, bootstrap_calibration, chsh_werner, ensemble_from_counts, regime_classify,
    CalibrationReport, CountRecord,
};

#[derive(Parser, Debug)]
#[command(name = "qrs", version, about = "Quantum-refereed steering game toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact (and optionally sampled) payoff for an honest Werner-state strategy.
    Payoff(RunConfig),
    /// Calibrate r* from a referee ensemble or tomography counts.
    Calibrate(RunConfig),
    /// Exact payoff over a grid of Werner parameters.
    Sweep(RunConfig),
    /// Monte Carlo runs: writes a tally CSV and prints the payoff estimate.
    Simulate(RunConfig),
    /// CHSH value of a Werner state at the optimal settings.
    Chsh(RunConfig),
}

/// Calibration parameter: a number or `auto` (calibrated from the ensemble).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RValue {
    Fixed(f64),
    Auto,
}

impl FromStr for RValue {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(RValue::Auto);
        }
        s.parse::<f64>().map(RValue::Fixed).map_err(|e| format!("{s:?}: {e}"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Werner parameter of the shared state.
    #[arg(long = "W")]
    pub w: Option<f64>,
    /// Calibration parameter, or `auto` for max(r*, 1) of the ensemble.
    #[arg(long, default_value = "1")]
    pub r: RValue,
    /// Two-photon interference visibility of Bob's measurement.
    #[arg(long, default_value_t = 1.0)]
    pub visibility: f64,
    /// Runs per referee setting (payoff: 0 skips sampling).
    #[arg(long, default_value_t = 0)]
    pub n: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Referee ensemble JSON (default: ideal preparations).
    #[arg(long)]
    pub ensemble: Option<PathBuf>,
    /// Referee tomography counts CSV.
    #[arg(long)]
    pub counts: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Comma-separated Werner grid for `sweep`.
    #[arg(long)]
    pub grid: Option<String>,
    /// Bootstrap trials when calibrating from counts.
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliOutcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Calibration(_) => 3,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

/// Rounds to 10 significant digits.
pub fn sig10(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.9e}").parse().unwrap_or(x)
}

/// Parses `args` (including the program name) and runs the command.
pub fn execute<I, T>(args: I) -> CliOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                CliOutcome { code, stdout: text, stderr: String::new() }
            } else {
                CliOutcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match run(&cli.command) {
        Ok(stdout) => CliOutcome { code: 0, stdout, stderr: String::new() },
        Err(f) => CliOutcome { code: f.code, stdout: String::new(), stderr: format!("error: {}\n", f.message) },
    }
}

fn run(cmd: &Command) -> Result<String, Failure> {
    match cmd {
        Command::Payoff(cfg) => cmd_payoff(cfg),
        Command::Calibrate(cfg) => cmd_calibrate(cfg),
        Command::Sweep(cfg) => cmd_sweep(cfg),
        Command::Simulate(cfg) => cmd_simulate(cfg),
        Command::Chsh(cfg) => cmd_chsh(cfg),
    }
}

fn load_ensemble(cfg: &RunConfig) -> Result<(RefereeEnsemble, Vec<crate::RefereeKey>), Failure> {
    match (&cfg.ensemble, &cfg.counts) {
        (Some(_), Some(_)) => Err(invalid("pass either --ensemble or --counts, not both")),
        (Some(path), None) => Ok((RefereeEnsemble::read_json(path)?, Vec::new())),
        (None, Some(path)) => Ok(ensemble_from_counts(&CountRecord::read_csv(path)?)?),
        (None, None) => Ok((RefereeEnsemble::ideal(), Vec::new())),
    }
}

fn resolve_r(cfg: &RunConfig, ensemble: &RefereeEnsemble) -> Result<f64, Failure> {
    match cfg.r {
        RValue::Fixed(r) if r.is_finite() && r >= 0.0 => Ok(r),
        RValue::Fixed(r) => Err(invalid(format!("--r must be a nonnegative number, got {r}"))),
        RValue::Auto => Ok(witness::rstar_legal(witness::rstar_oracle(ensemble)?)),
    }
}

fn require_w(cfg: &RunConfig) -> Result<f64, Failure> {
    let w = cfg.w.ok_or_else(|| invalid("--W is required"))?;
    if !(0.0..=1.0).contains(&w) {
        return Err(invalid(format!("--W must lie in [0, 1], got {w}")));
    }
    Ok(w)
}

fn honest_strategy(w: f64, visibility: f64) -> Result<Strategy, Failure> {
    Ok(Strategy::honest(werner_state(w)?, partial_bsm_povm(visibility)?)?)
}

fn emit(cfg: &RunConfig, body: String) -> Result<String, Failure> {
    match &cfg.out {
        Some(path) => {
            std::fs::write(path, &body).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
            Ok(String::new())
        }
        None => Ok(body),
    }
}

fn render_record(fields: &[(&str, Value)], format: Format) -> String {
    match format {
        Format::Json => {
            let map: serde_json::Map<String, Value> =
                fields.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
            let mut s = serde_json::to_string_pretty(&Value::Object(map)).expect("json");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = String::from("quantity,value\n");
            for (k, v) in fields {
                let v = match v {
                    Value::String(text) => text.clone(),
                    other => other.to_string(),
                };
                let _ = writeln!(s, "{k},{v}");
            }
            s
        }
    }
}

fn cmd_payoff(cfg: &RunConfig) -> Result<String, Failure> {
    let w = require_w(cfg)?;
    let (ensemble, _) = load_ensemble(cfg)?;
    let r = resolve_r(cfg, &ensemble)?;
    let spec = canonical_game(r)?;
    let strategy = honest_strategy(w, cfg.visibility)?;
    let exact = exact_payoff(&spec, &strategy, &ensemble)?;
    let mut fields = vec![
        ("W", json!(w)),
        ("r", json!(sig10(r))),
        ("visibility", json!(cfg.visibility)),
        ("exact_payoff", json!(sig10(exact))),
        ("werner_reference", json!(sig10(3.0 * w - SQRT_3 * r))),
        ("regime", json!(regime_classify(w, r).label())),
    ];
    if cfg.n > 0 {
        let tally = simulate_runs(&spec, &strategy, &ensemble, cfg.n, cfg.seed)?;
        let est = estimate_payoff(&spec, &tally)?;
        fields.push(("estimate", json!(sig10(est.value))));
        fields.push(("stderr", json!(sig10(est.stderr))));
        fields.push(("n_per_setting", json!(cfg.n)));
    }
    emit(cfg, render_record(&fields, cfg.format.unwrap_or(Format::Json)))
}

fn cmd_calibrate(cfg: &RunConfig) -> Result<String, Failure> {
    if cfg.ensemble.is_none() && cfg.counts.is_none() {
        return Err(invalid("calibrate needs --ensemble or --counts"));
    }
    let (ensemble, clipped) = load_ensemble(cfg)?;
    let bootstrap = match &cfg.counts {
        Some(path) => Some(bootstrap_calibration(&CountRecord::read_csv(path)?, cfg.trials, cfg.seed)?),
        None => None,
    };
    let mut report = CalibrationReport::build(&ensemble, &clipped, bootstrap)?;
    report.r_star_oracle = sig10(report.r_star_oracle);
    report.r_star_printed = report.r_star_printed.map(sig10);
    report.r_star_legal = sig10(report.r_star_legal);
    report.avg_fidelity = sig10(report.avg_fidelity);
    for b in &mut report.bound_at_r {
        b.r = sig10(b.r);
        b.bound = sig10(b.bound);
    }
    if let Some(b) = report.bootstrap.as_mut() {
        b.mean = sig10(b.mean);
        b.std = sig10(b.std);
    }
    let mut body = serde_json::to_string_pretty(&report).map_err(|e| invalid(e.to_string()))?;
    body.push('\n');
    emit(cfg, body)
}

fn parse_grid(grid: Option<&str>) -> Result<Vec<f64>, Failure> {
    let values: Vec<f64> = grid
        .unwrap_or("")
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().map_err(|e| invalid(format!("bad grid value {s:?}: {e}"))))
        .collect::<Result<_, _>>()?;
    if values.is_empty() {
        return Err(invalid("empty W grid"));
    }
    if let Some(bad) = values.iter().find(|w| !(0.0..=1.0).contains(*w)) {
        return Err(invalid(format!("grid value {bad} outside [0, 1]")));
    }
    Ok(values)
}

fn cmd_sweep(cfg: &RunConfig) -> Result<String, Failure> {
    let grid = parse_grid(cfg.grid.as_deref())?;
    let (ensemble, _) = load_ensemble(cfg)?;
    let r = resolve_r(cfg, &ensemble)?;
    let spec = canonical_game(r)?;
    let mut out = String::new();
    let _ = writeln!(out, "# r={}", sig10(r));
    let _ = writeln!(out, "# threshold r/sqrt3={}", sig10(r / SQRT_3));
    let _ = writeln!(out, "# threshold bell_local={}", witness::BELL_LOCAL_BOUND);
    let _ = writeln!(out, "# threshold vertesi={}", witness::VERTESI_BOUND);
    let _ = writeln!(out, "# threshold chsh={}", sig10(witness::CHSH_BOUND));
    out.push_str("W,exact_payoff,regime\n");
    for w in grid {
        let p = exact_payoff(&spec, &honest_strategy(w, cfg.visibility)?, &ensemble)?;
        let _ = writeln!(out, "{w},{},{}", sig10(p), regime_classify(w, r));
    }
    emit(cfg, out)
}

fn cmd_simulate(cfg: &RunConfig) -> Result<String, Failure> {
    let w = require_w(cfg)?;
    if cfg.n == 0 {
        return Err(invalid("--n must be at least 1"));
    }
    let tally_path = cfg.out.as_ref().ok_or_else(|| invalid("simulate needs --out for the tally CSV"))?;
    let (ensemble, _) = load_ensemble(cfg)?;
    let r = resolve_r(cfg, &ensemble)?;
    let spec = canonical_game(r)?;
    let strategy = honest_strategy(w, cfg.visibility)?;
    let tally = simulate_runs(&spec, &strategy, &ensemble, cfg.n, cfg.seed)?;
    tally.write_csv(tally_path)?;
    let est = estimate_payoff(&spec, &tally)?;
    let exact = exact_payoff(&spec, &strategy, &ensemble)?;
    let fields = [
        ("W", json!(w)),
        ("r", json!(sig10(r))),
        ("visibility", json!(cfg.visibility)),
        ("n_per_setting", json!(cfg.n)),
        ("seed", json!(cfg.seed)),
        ("estimate", json!(sig10(est.value))),
        ("stderr", json!(sig10(est.stderr))),
        ("exact_payoff", json!(sig10(exact))),
    ];
    Ok(render_record(&fields, cfg.format.unwrap_or(Format::Json)))
}

fn cmd_chsh(cfg: &RunConfig) -> Result<String, Failure> {
    let w = require_w(cfg)?;
    let s = chsh_werner(w)?;
    let fields = [
        ("W", json!(w)),
        ("chsh", json!(sig10(s))),
        ("classical_bound", json!(2.0)),
        ("violates", json!(s > 2.0)),
    ];
    emit(cfg, render_record(&fields, cfg.format.unwrap_or(Format::Json)))
}

#[cfg(test)]
mod tests {
    #![allow(clippy::inconsistent_digit_grouping)]
    use super::*;

    fn run(args: &[&str]) -> CliOutcome {
        execute(std::iter::once("qrs").chain(args.iter().copied()))
    }

    #[test]
    fn sig10_rounds() {
        assert_eq!(sig10(0.221_664_418_835_7), 0.221_664_418_8);
        assert_eq!(sig10(0.0), 0.0);
        assert_eq!(sig10(-1_234.567_890_123), -1_234.567_89);
    }

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_grid(Some("0, 0.5,1")).unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_grid(Some("")).unwrap_err().code, 2);
        assert_eq!(parse_grid(None).unwrap_err().code, 2);
        assert_eq!(parse_grid(Some("0.2,1.5")).unwrap_err().code, 2);
    }

    #[test]
    fn bad_arguments_exit_2() {
        assert_eq!(run(&["payoff"]).code, 2);
        assert_eq!(run(&["payoff", "--W", "2"]).code, 2);
        assert_eq!(run(&["payoff", "--W", "0.5", "--r", "-1"]).code, 2);
        assert_eq!(run(&["payoff", "--W", "0.5", "--r", "abc"]).code, 2);
        assert_eq!(run(&["nonsense"]).code, 2);
        assert_eq!(run(&["--help"]).code, 0);
    }
}
