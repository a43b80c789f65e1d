//! Command-line front end for the order-theoretic fixed-point toolkit.
//!
//! Three subcommands bind the library to config files and JSON reports:
//!
//! * `verify <fixture>` — machine-check one of the built-in
//!   counterexample chains (`lemma_2_4`, `example_2_7`, `lemma_2_8`,
//!   `lemma_2_9`, `lemma_2_11`);
//! * `poset <fixture>` / `poset --config FILE` — check fixed-point
//!   structure of a built-in planar grid example (`remark_3_11`,
//!   `example_3_12_1`, `example_3_12_2`) or of a poset-with-map document;
//! * `solve --config FILE` — solve a discretized integral equation by
//!   monotone iteration, after auditing its solvability conditions.
//!
//! Exit codes are stable for CI use: `0` when every claim, hypothesis and
//! convergence check passed; `1` when a mathematical claim was falsified
//! (a failed claim or hypothesis, broken monotonicity, no convergence, or
//! a trivial solution); `2` for unusable input (unknown fixtures, bad
//! flags, malformed files, I/O failures).
//!
//! Reports are canonical JSON — object keys sorted, shortest round-trip
//! float formatting — so identical runs produce byte-identical output.
//! The environment variable `ORDFIX_SEED` reseeds every randomized
//! sampler (default `0`).

use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ordfix_core::cone::counterexamples::{verify_counterexample, ChainName, ChainParams};
use ordfix_core::hammerstein::{
    audit_conditions, explore_solution_set, monotone_solve_with, parse_problem_config,
    ExplorationReport, HammersteinError, SolveControls, SolveReport,
};
use ordfix_core::poset::io::parse_poset_document;
use ordfix_core::poset::lattice::is_sublattice;
use ordfix_core::poset::{
    fixed_point_set, verify_fixed_point_theorem, verify_poset_example, ExampleName, PosetError,
};
use ordfix_core::scalar::{format_rational, parse_rational};
use ordfix_core::Rational;
use serde_json::{json, Map, Value};

/// Exit code for runs in which every check passed.
pub const EXIT_PASS: i32 = 0;
/// Exit code for falsified claims, failed hypotheses, or non-convergence.
pub const EXIT_FALSIFIED: i32 = 1;
/// Exit code for unusable input: bad flags, files, or parameters.
pub const EXIT_USAGE: i32 = 2;

/// Command-line grammar.
#[derive(Debug, Parser)]
#[command(
    name = "ordfix",
    version,
    about = "Machine-checks order-theoretic fixed-point constructions and solves \
             discretized integral equations by monotone iteration"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Machine-check a built-in counterexample chain.
    Verify(VerifyArgs),
    /// Check fixed-point structure of a grid example or poset document.
    Poset(PosetArgs),
    /// Audit and solve a discretized integral equation.
    Solve(SolveArgs),
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Fixture name: lemma_2_4, example_2_7, lemma_2_8, lemma_2_9, or
    /// lemma_2_11.
    fixture: String,
    /// Chain length to check (default 64; 16 for lemma_2_9, whose exact
    /// parameters shrink geometrically).
    #[arg(long = "n-max")]
    n_max: Option<usize>,
    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PosetArgs {
    /// Built-in fixture name: remark_3_11, example_3_12_1, or
    /// example_3_12_2.  Omit when using --config.
    fixture: Option<String>,
    /// Poset document (JSON with elements, relation pairs, and an
    /// optional set-valued map and seed).
    #[arg(long, conflicts_with = "fixture")]
    config: Option<PathBuf>,
    /// Restrict the run to one check; default runs both.
    #[arg(long, value_enum)]
    check: Option<CheckKind>,
    /// Grid step for built-in fixtures, e.g. "0.25" or "1/4"
    /// (default: the fixture's documented step).
    #[arg(long)]
    step: Option<String>,
    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SolveArgs {
    /// Problem description (domain, grid, kernel, nonlinearity, p,
    /// gamma, and optional eps/max_iter/ball_samples).
    #[arg(long)]
    config: PathBuf,
    /// Step tolerance override for both convergence norms.
    #[arg(long)]
    eps: Option<f64>,
    /// Iteration budget override.
    #[arg(long = "max-iter")]
    max_iter: Option<usize>,
    /// JSON array of node vectors to iterate from (sub-/supersolutions).
    #[arg(long)]
    seeds: Option<PathBuf>,
    /// Iterate even when the solvability audit fails (the report records
    /// the override, and the run still exits nonzero).
    #[arg(long)]
    force: bool,
    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Which poset check to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckKind {
    /// Fixed-point existence: isotonicity, inductive images, seed below
    /// image, and the certified fixed-point structure.
    #[value(name = "thm3.9")]
    Theorem,
    /// Closure of the fixed-point set under host joins and meets.
    #[value(name = "sublattice")]
    Sublattice,
}

/// A fully validated run request.
#[derive(Debug)]
pub enum RunConfig {
    /// Counterexample-chain verification.
    Verify {
        /// Which chain to check.
        fixture: ChainName,
        /// Chain length.
        n_max: usize,
        /// Report destination (`None` = standard output).
        out: Option<PathBuf>,
    },
    /// Built-in planar grid example.
    PosetBuiltin {
        /// Which example to check.
        fixture: ExampleName,
        /// Grid step.
        step: Rational,
        /// Check selection (`None` = both).
        check: Option<CheckKind>,
        /// Report destination.
        out: Option<PathBuf>,
    },
    /// Poset document from a file.
    PosetConfig {
        /// Document path.
        path: PathBuf,
        /// Check selection (`None` = both).
        check: Option<CheckKind>,
        /// Report destination.
        out: Option<PathBuf>,
    },
    /// Integral-equation solve from a configuration file.
    Solve {
        /// Problem configuration path.
        path: PathBuf,
        /// Tolerance override.
        eps: Option<f64>,
        /// Budget override.
        max_iter: Option<usize>,
        /// Optional seed-vectors file.
        seeds: Option<PathBuf>,
        /// Proceed past a failed audit.
        force: bool,
        /// Report destination.
        out: Option<PathBuf>,
    },
}

/// Outcome of a run: the exit code plus the report payload.
#[derive(Debug)]
pub struct RunResult {
    /// `0`, `1`, or `2` per the exit-code contract.
    pub exit_code: i32,
    /// Canonicalizable report document.
    pub payload: Value,
}

/// An error that ends the run with a message on standard error.
#[derive(Debug)]
pub struct CliError {
    /// Exit code to return (`1` or `2`).
    pub code: i32,
    /// Message for standard error.
    pub message: String,
}

impl CliError {
    fn usage(message: impl Display) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: message.to_string(),
        }
    }
}

/// Reads the sampler seed from `ORDFIX_SEED` (default 0).
fn sampler_seed() -> Result<u64, CliError> {
    match std::env::var("ORDFIX_SEED") {
        Ok(text) => text
            .trim()
            .parse::<u64>()
            .map_err(|_| CliError::usage(format!("ORDFIX_SEED must be an unsigned integer, got {text:?}"))),
        Err(std::env::VarError::NotPresent) => Ok(0),
        Err(err) => Err(CliError::usage(format!("ORDFIX_SEED unreadable: {err}"))),
    }
}

/// Validates parsed arguments into a [`RunConfig`].
///
/// # Errors
///
/// [`CliError`] with exit code 2 for unknown fixtures, missing files, or
/// unparsable numeric overrides.
pub fn parse_config(cli: Cli) -> Result<RunConfig, CliError> {
    match cli.command {
        Command::Verify(args) => {
            let fixture = ChainName::from_str(&args.fixture).map_err(CliError::usage)?;
            let n_max = args.n_max.unwrap_or(match fixture {
                ChainName::Lemma2_9 => 16,
                _ => 64,
            });
            Ok(RunConfig::Verify {
                fixture,
                n_max,
                out: args.out,
            })
        }
        Command::Poset(args) => match (args.fixture, args.config) {
            (Some(name), None) => {
                let fixture = ExampleName::from_str(&name).map_err(CliError::usage)?;
                let step = match args.step {
                    None => fixture.default_step(),
                    Some(text) => parse_rational(&text).ok_or_else(|| {
                        CliError::usage(format!("grid step {text:?} is not a rational number"))
                    })?,
                };
                Ok(RunConfig::PosetBuiltin {
                    fixture,
                    step,
                    check: args.check,
                    out: args.out,
                })
            }
            (None, Some(path)) => {
                if args.step.is_some() {
                    return Err(CliError::usage(
                        "--step applies only to built-in grid fixtures",
                    ));
                }
                require_file(&path)?;
                Ok(RunConfig::PosetConfig {
                    path,
                    check: args.check,
                    out: args.out,
                })
            }
            (None, None) => Err(CliError::usage(
                "poset needs a built-in fixture name or --config FILE",
            )),
            (Some(_), Some(_)) => unreachable!("clap rejects fixture together with --config"),
        },
        Command::Solve(args) => {
            require_file(&args.config)?;
            if let Some(seeds) = &args.seeds {
                require_file(seeds)?;
            }
            if let Some(eps) = args.eps {
                if !eps.is_finite() || eps <= 0.0 {
                    return Err(CliError::usage(format!(
                        "--eps must be positive and finite, got {eps}"
                    )));
                }
            }
            if args.max_iter == Some(0) {
                return Err(CliError::usage("--max-iter must be at least 1"));
            }
            Ok(RunConfig::Solve {
                path: args.config,
                eps: args.eps,
                max_iter: args.max_iter,
                seeds: args.seeds,
                force: args.force,
                out: args.out,
            })
        }
    }
}

fn require_file(path: &Path) -> Result<(), CliError> {
    if path.is_file() {
        Ok(())
    } else {
        Err(CliError::usage(format!(
            "file not found: {}",
            path.display()
        )))
    }
}

/// Executes a validated run.
///
/// Mathematical failures (falsified claims, failed hypotheses, broken
/// monotonicity, non-convergence) come back as a [`RunResult`] with exit
/// code 1 and the failure recorded in the payload; unusable input is a
/// [`CliError`] with exit code 2.
///
/// # Errors
///
/// [`CliError`] for input and I/O problems only.
pub fn run(config: &RunConfig) -> Result<RunResult, CliError> {
    match config {
        RunConfig::Verify { fixture, n_max, .. } => run_verify(*fixture, *n_max),
        RunConfig::PosetBuiltin {
            fixture,
            step,
            check,
            ..
        } => run_poset_builtin(*fixture, step, *check),
        RunConfig::PosetConfig { path, check, .. } => run_poset_config(path, *check),
        RunConfig::Solve {
            path,
            eps,
            max_iter,
            seeds,
            force,
            ..
        } => run_solve(path, *eps, *max_iter, seeds.as_deref(), *force),
    }
}

/// Report destination of a config, if any.
#[must_use]
pub fn out_path(config: &RunConfig) -> Option<&Path> {
    match config {
        RunConfig::Verify { out, .. }
        | RunConfig::PosetBuiltin { out, .. }
        | RunConfig::PosetConfig { out, .. }
        | RunConfig::Solve { out, .. } => out.as_deref(),
    }
}

fn run_verify(fixture: ChainName, n_max: usize) -> Result<RunResult, CliError> {
    let seed = sampler_seed()?;
    let params = ChainParams {
        seed,
        ..ChainParams::default()
    };
    let report = verify_counterexample(fixture, n_max, &params)
        .map_err(|err| CliError::usage(format!("cannot run {fixture}: {err}")))?;
    let pass = report.all_pass();
    let payload = json!({
        "command": "verify",
        "fixture": fixture.as_str(),
        "n_max": n_max,
        "seed": seed,
        "pass": pass,
        "claims": to_value(&report.claims)?,
    });
    Ok(RunResult {
        exit_code: if pass { EXIT_PASS } else { EXIT_FALSIFIED },
        payload,
    })
}

/// Claim-id suffixes that belong to the fixed-point-existence check.
const THEOREM_SUFFIXES: [&str; 6] = [
    "host_is_lattice",
    "fixed_set_matches",
    "hypotheses_pass",
    "fixed_set_inductive",
    "fixed_points_above_seed",
    "maximal_fixed_point_above_seed",
];

/// Claim-id suffixes that belong to the sublattice check.
const SUBLATTICE_SUFFIXES: [&str; 3] = [
    "host_is_lattice",
    "fixed_set_is_not_a_sublattice",
    "cited_witness_pair_escapes",
];

fn claim_selected(id: &str, check: Option<CheckKind>) -> bool {
    let suffix = id.rsplit('/').next().unwrap_or(id);
    match check {
        None => true,
        Some(CheckKind::Theorem) => THEOREM_SUFFIXES.contains(&suffix),
        Some(CheckKind::Sublattice) => SUBLATTICE_SUFFIXES.contains(&suffix),
    }
}

fn run_poset_builtin(
    fixture: ExampleName,
    step: &Rational,
    check: Option<CheckKind>,
) -> Result<RunResult, CliError> {
    let report = verify_poset_example(fixture, step)
        .map_err(|err| CliError::usage(format!("cannot run {fixture}: {err}")))?;
    let claims: Vec<Value> = report
        .claims
        .iter()
        .filter(|claim| claim_selected(&claim.claim, check))
        .map(to_value)
        .collect::<Result<_, _>>()?;
    let pass = claims
        .iter()
        .all(|claim| claim["pass"].as_bool() == Some(true));
    let payload = json!({
        "command": "poset",
        "fixture": fixture.as_str(),
        "step": format_rational(step),
        "check": check_label(check),
        "pass": pass,
        "claims": claims,
    });
    Ok(RunResult {
        exit_code: if pass { EXIT_PASS } else { EXIT_FALSIFIED },
        payload,
    })
}

fn check_label(check: Option<CheckKind>) -> &'static str {
    match check {
        None => "all",
        Some(CheckKind::Theorem) => "thm3.9",
        Some(CheckKind::Sublattice) => "sublattice",
    }
}

fn run_poset_config(path: &Path, check: Option<CheckKind>) -> Result<RunResult, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|err| CliError::usage(format!("cannot read {}: {err}", path.display())))?;
    let document = parse_poset_document(&text)
        .map_err(|err| CliError::usage(format!("bad poset document: {err}")))?;
    let Some(map) = &document.map else {
        return Err(CliError::usage(
            "the poset document has no map; both checks need one",
        ));
    };
    let poset = &document.poset;
    let domain: Vec<usize> = map.domain().collect();
    let mut payload = Map::new();
    payload.insert("command".into(), "poset".into());
    payload.insert("source".into(), "config".into());
    payload.insert("check".into(), check_label(check).into());
    let mut pass = true;

    if check != Some(CheckKind::Sublattice) {
        let x0 = match document.x0 {
            Some(x0) => {
                if !domain.contains(&x0) {
                    return Err(CliError::usage(format!(
                        "seed {:?} is outside the map's domain",
                        poset.element(x0)
                    )));
                }
                x0
            }
            None => domain
                .iter()
                .copied()
                .find(|&c| domain.iter().all(|&d| poset.leq(c, d)))
                .ok_or_else(|| {
                    CliError::usage(
                        "the map's domain has no least element; add an explicit \"x0\"",
                    )
                })?,
        };
        match verify_fixed_point_theorem(poset, &domain, map, x0) {
            Ok(report) => {
                payload.insert("theorem".into(), to_value(&report)?);
            }
            Err(PosetError::HypothesisFailed { name, witness, log }) => {
                pass = false;
                payload.insert(
                    "theorem".into(),
                    json!({
                        "failed_hypothesis": name,
                        "witness": witness,
                        "hypothesis_log": to_value(&log)?,
                    }),
                );
            }
            Err(err) => {
                return Err(CliError::usage(format!("cannot run the check: {err}")));
            }
        }
    }

    if check != Some(CheckKind::Theorem) {
        let fixed = fixed_point_set(map)
            .map_err(|err| CliError::usage(format!("cannot list fixed points: {err}")))?;
        if fixed.is_empty() {
            pass = false;
            payload.insert(
                "sublattice".into(),
                json!({ "skipped": "the map has no fixed points" }),
            );
        } else {
            match is_sublattice(poset, &fixed) {
                Ok(result) => {
                    payload.insert("sublattice".into(), to_value(&result)?);
                }
                Err(err) => {
                    return Err(CliError::usage(format!(
                        "the sublattice check needs a lattice host: {err}"
                    )));
                }
            }
        }
    }

    payload.insert("pass".into(), pass.into());
    Ok(RunResult {
        exit_code: if pass { EXIT_PASS } else { EXIT_FALSIFIED },
        payload: Value::Object(payload),
    })
}

fn run_solve(
    path: &Path,
    eps_override: Option<f64>,
    max_iter_override: Option<usize>,
    seeds_path: Option<&Path>,
    force: bool,
) -> Result<RunResult, CliError> {
    let seed = sampler_seed()?;
    let text = fs::read_to_string(path)
        .map_err(|err| CliError::usage(format!("cannot read {}: {err}", path.display())))?;
    let (problem, settings) =
        parse_problem_config(&text).map_err(|err| CliError::usage(format!("bad problem: {err}")))?;
    let eps = eps_override.unwrap_or(settings.eps);
    let max_iter = max_iter_override.unwrap_or(settings.max_iter);
    let seeds: Option<Vec<Vec<f64>>> = match seeds_path {
        None => None,
        Some(seeds_path) => {
            let text = fs::read_to_string(seeds_path).map_err(|err| {
                CliError::usage(format!("cannot read {}: {err}", seeds_path.display()))
            })?;
            Some(serde_json::from_str(&text).map_err(|err| {
                CliError::usage(format!("seeds must be a JSON array of node vectors: {err}"))
            })?)
        }
    };

    let audit = audit_conditions(&problem, settings.ball_samples, seed)
        .map_err(|err| CliError::usage(format!("cannot audit the problem: {err}")))?;
    let mut payload = Map::new();
    payload.insert("command".into(), "solve".into());
    payload.insert("eps".into(), finite(eps, "eps")?);
    payload.insert("max_iter".into(), max_iter.into());
    payload.insert("seed".into(), seed.into());
    payload.insert("forced".into(), force.into());
    payload.insert("audit".into(), to_value(&audit)?);

    if !audit.all_pass() && !force {
        let condition = audit.first_failure().unwrap_or("unknown").to_string();
        payload.insert(
            "error".into(),
            json!({ "kind": "conditions_failed", "condition": condition }),
        );
        payload.insert("pass".into(), false.into());
        return Ok(RunResult {
            exit_code: EXIT_FALSIFIED,
            payload: Value::Object(payload),
        });
    }

    let controls = SolveControls {
        ball_samples: settings.ball_samples,
        seed,
        override_conditions: force,
    };
    let report = match monotone_solve_with(&problem, eps, max_iter, &controls) {
        Ok(report) => report,
        Err(err) => {
            let (kind, detail) = solve_error_parts(&err);
            let code = match err {
                HammersteinError::MonotonicityBroken { .. }
                | HammersteinError::BallEscaped { .. }
                | HammersteinError::NoConvergence { .. }
                | HammersteinError::ConditionsFailed { .. } => EXIT_FALSIFIED,
                _ => return Err(CliError::usage(format!("cannot iterate: {err}"))),
            };
            payload.insert("error".into(), json!({ "kind": kind, "detail": detail }));
            payload.insert("pass".into(), false.into());
            return Ok(RunResult {
                exit_code: code,
                payload: Value::Object(payload),
            });
        }
    };
    payload.insert("report".into(), solve_report_value(&report)?);
    let mut pass = report.nonzero_ok && !report.conditions_overridden;

    if let Some(seeds) = seeds {
        match explore_solution_set(&problem, &seeds, eps, max_iter) {
            Ok(exploration) => {
                payload.insert("exploration".into(), exploration_value(&exploration)?);
            }
            Err(err) => {
                let (kind, detail) = solve_error_parts(&err);
                match err {
                    HammersteinError::BadSeed { .. }
                    | HammersteinError::MonotonicityBroken { .. }
                    | HammersteinError::BallEscaped { .. }
                    | HammersteinError::NoConvergence { .. } => {
                        pass = false;
                        payload
                            .insert("error".into(), json!({ "kind": kind, "detail": detail }));
                    }
                    _ => {
                        return Err(CliError::usage(format!("cannot explore seeds: {err}")));
                    }
                }
            }
        }
    }

    payload.insert("pass".into(), pass.into());
    Ok(RunResult {
        exit_code: if pass { EXIT_PASS } else { EXIT_FALSIFIED },
        payload: Value::Object(payload),
    })
}

fn solve_error_parts(err: &HammersteinError) -> (&'static str, String) {
    let kind = match err {
        HammersteinError::MonotonicityBroken { .. } => "monotonicity_broken",
        HammersteinError::BallEscaped { .. } => "ball_escaped",
        HammersteinError::NoConvergence { .. } => "no_convergence",
        HammersteinError::ConditionsFailed { .. } => "conditions_failed",
        HammersteinError::BadSeed { .. } => "bad_seed",
        _ => "invalid_input",
    };
    (kind, err.to_string())
}

/// Converts a solve report to JSON after checking every float is finite.
fn solve_report_value(report: &SolveReport) -> Result<Value, CliError> {
    let mut values = vec![report.residual_p, report.norm_p, report.lambda];
    values.extend_from_slice(&report.solution);
    ensure_finite(&values, "solve report")?;
    to_value(report)
}

/// Converts an exploration report to JSON after the same finiteness check.
fn exploration_value(report: &ExplorationReport) -> Result<Value, CliError> {
    for solution in &report.solutions {
        ensure_finite(solution, "exploration report")?;
    }
    to_value(report)
}

fn ensure_finite(values: &[f64], what: &str) -> Result<(), CliError> {
    match values.iter().find(|v| !v.is_finite()) {
        None => Ok(()),
        Some(bad) => Err(CliError::usage(format!(
            "refusing to write a {what} containing the non-finite value {bad}"
        ))),
    }
}

fn finite(value: f64, what: &str) -> Result<Value, CliError> {
    ensure_finite(&[value], what)?;
    Ok(json!(value))
}

fn to_value<T: serde::Serialize>(value: &T) -> Result<Value, CliError> {
    serde_json::to_value(value)
        .map_err(|err| CliError::usage(format!("cannot serialize the report: {err}")))
}

/// Renders a payload as canonical JSON: keys sorted (guaranteed by the
/// ordered map representation), two-space indentation, shortest
/// round-trip float formatting, trailing newline.
#[must_use]
pub fn canonical_json(payload: &Value) -> String {
    let mut text = serde_json::to_string_pretty(payload).expect("JSON values always serialize");
    text.push('\n');
    text
}

/// Writes the report to `out` (or standard output when `None`).
///
/// # Errors
///
/// [`CliError`] with exit code 2 when the destination is unwritable.
pub fn emit_report(result: &RunResult, out: Option<&Path>) -> Result<(), CliError> {
    let text = canonical_json(&result.payload);
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => fs::write(path, &text)
            .map_err(|err| CliError::usage(format!("cannot write {}: {err}", path.display()))),
    }
}

/// Full entry point: parse, run, emit, and map everything to an exit
/// code.  Clap usage errors print to standard error and exit 2; help and
/// version requests exit 0.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = err.print();
            return code;
        }
    };
    let config = match parse_config(cli) {
        Ok(config) => config,
        Err(err) => {
            eprintln!("error: {}", err.message);
            return err.code;
        }
    };
    let result = match run(&config) {
        Ok(result) => result,
        Err(err) => {
            eprintln!("error: {}", err.message);
            return err.code;
        }
    };
    if let Err(err) = emit_report(&result, out_path(&config)) {
        eprintln!("error: {}", err.message);
        return err.code;
    }
    result.exit_code
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<RunConfig, CliError> {
        parse_config(Cli::try_parse_from(args).expect("grammar accepts the tokens"))
    }

    #[test]
    fn verify_arguments_resolve_fixture_and_depth() {
        let config = parse(&["ordfix", "verify", "lemma_2_4", "--n-max", "64"]).unwrap();
        match config {
            RunConfig::Verify { fixture, n_max, .. } => {
                assert_eq!(fixture, ChainName::Lemma2_4);
                assert_eq!(n_max, 64);
            }
            other => panic!("wrong config: {other:?}"),
        }
        // Per-fixture default depths.
        match parse(&["ordfix", "verify", "lemma_2_9"]).unwrap() {
            RunConfig::Verify { n_max, .. } => assert_eq!(n_max, 16),
            other => panic!("wrong config: {other:?}"),
        }
        match parse(&["ordfix", "verify", "example_2_7"]).unwrap() {
            RunConfig::Verify { n_max, .. } => assert_eq!(n_max, 64),
            other => panic!("wrong config: {other:?}"),
        }
    }

    #[test]
    fn unknown_fixtures_are_usage_errors() {
        let err = parse(&["ordfix", "verify", "lemma_9_9"]).unwrap_err();
        assert_eq!(err.code, EXIT_USAGE);
        assert!(err.message.contains("lemma_9_9"));
        let err = parse(&["ordfix", "poset", "remark_9_9"]).unwrap_err();
        assert_eq!(err.code, EXIT_USAGE);
    }

    #[test]
    fn poset_steps_accept_decimals_and_fractions() {
        match parse(&["ordfix", "poset", "remark_3_11", "--step", "1/2"]).unwrap() {
            RunConfig::PosetBuiltin { step, .. } => {
                assert_eq!(format_rational(&step), "0.5");
            }
            other => panic!("wrong config: {other:?}"),
        }
        match parse(&["ordfix", "poset", "example_3_12_1"]).unwrap() {
            RunConfig::PosetBuiltin { step, fixture, .. } => {
                assert_eq!(fixture, ExampleName::Example3_12_1);
                assert_eq!(format_rational(&step), "0.5");
            }
            other => panic!("wrong config: {other:?}"),
        }
        let err = parse(&["ordfix", "poset", "remark_3_11", "--step", "tiny"]).unwrap_err();
        assert_eq!(err.code, EXIT_USAGE);
    }

    #[test]
    fn poset_requires_a_source_and_solve_requires_real_files() {
        assert_eq!(parse(&["ordfix", "poset"]).unwrap_err().code, EXIT_USAGE);
        let err = parse(&["ordfix", "solve", "--config", "/no/such/file.json"]).unwrap_err();
        assert_eq!(err.code, EXIT_USAGE);
        assert!(err.message.contains("file not found"));
    }

    #[test]
    fn solve_overrides_are_validated_at_parse_time() {
        let dir = tempfile::tempdir().unwrap();
        let config = dir.path().join("p.json");
        fs::write(&config, "{}").unwrap();
        let path = config.to_str().unwrap();
        let err = parse(&["ordfix", "solve", "--config", path, "--eps", "0"]).unwrap_err();
        assert_eq!(err.code, EXIT_USAGE);
        let err = parse(&["ordfix", "solve", "--config", path, "--max-iter", "0"]).unwrap_err();
        assert_eq!(err.code, EXIT_USAGE);
        assert!(parse(&["ordfix", "solve", "--config", path, "--force"]).is_ok());
    }

    #[test]
    fn canonical_json_sorts_keys_and_terminates_with_newline() {
        let payload = json!({"zeta": 1, "alpha": {"nested_z": true, "nested_a": false}});
        let text = canonical_json(&payload);
        let alpha = text.find("\"alpha\"").unwrap();
        let zeta = text.find("\"zeta\"").unwrap();
        assert!(alpha < zeta);
        let nested_a = text.find("\"nested_a\"").unwrap();
        let nested_z = text.find("\"nested_z\"").unwrap();
        assert!(nested_a < nested_z);
        assert!(text.ends_with('\n'));
    }

    #[test]
    fn non_finite_reports_are_rejected_before_writing() {
        let report = SolveReport {
            iterates_count: 1,
            solution: vec![1.0, f64::NAN],
            residual_p: 0.0,
            norm_p: 1.0,
            lambda: 1.0,
            monotone_ok: true,
            nonzero_ok: true,
            conditions_overridden: false,
            condition_log: Vec::new(),
        };
        let err = solve_report_value(&report).unwrap_err();
        assert_eq!(err.code, EXIT_USAGE);
        assert!(err.message.contains("non-finite"));
    }

    #[test]
    fn empty_claim_lists_stay_valid_reports() {
        let payload = json!({"claims": [], "pass": true});
        assert!(canonical_json(&payload).contains("\"claims\": []"));
    }
}
