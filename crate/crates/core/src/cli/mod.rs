//! Command-line front end. Every subcommand prints JSON, except
//! `attack-report --table`.

mod attack;
mod config;

pub use attack::{attack_report, render_table, AttackError, AttackReport, AttackRow};
pub use config::{ChannelKind, Mode, RetryKind, RunConfig};

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

use crate::coding::{fbl_report, FblInputs, FblReport};
use crate::protocol::{
    run_experiment, run_session_observed, seeded_rng, JsonLinesTranscript, SessionObserver, SessionStatus,
    DEFAULT_ACCEPTANCE,
};
use crate::quantum::{
    game_success_probability, operator_fixture, validate_comb, validate_process_matrix, CausalOrder, CombReport,
    ProcessKind, ValidationReport, DEFAULT_TOLERANCE,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Runtime(_) => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "cnsqkd", version, about = "Key agreement over a causally non-separable process")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a process, check the comb conditions and evaluate the game.
    VerifyQuantum {
        #[arg(long, default_value = "wcns")]
        process: ProcessKind,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
    },
    /// Finite-blocklength payload and extractable key length.
    Fbl {
        #[arg(long, default_value_t = 1990)]
        n: u64,
        #[arg(long, default_value = "1e-5", value_parser = parse_number)]
        epsilon: f64,
        #[arg(long, default_value = "1e-6", value_parser = parse_number)]
        delta: f64,
        #[arg(long, default_value = "0.1666", value_parser = parse_number)]
        p: f64,
        /// Eve's crossover probability; fractions such as `1/3` are accepted.
        #[arg(long, default_value = "1/3", value_parser = parse_number)]
        p_eve: f64,
        /// Channel uses for the key-length bound, `n` if omitted.
        #[arg(long)]
        k: Option<u64>,
    },
    /// Run one key-agreement session.
    Run(RunConfig),
    /// Run many seeded sessions and aggregate the round counts.
    Experiment(RunConfig),
    /// Summarize an attack-curve CSV.
    AttackReport {
        csv: PathBuf,
        #[arg(long, default_value_t = DEFAULT_ACCEPTANCE)]
        q0: f64,
        /// Print a text table instead of JSON.
        #[arg(long)]
        table: bool,
    },
    /// Write processes and instrument operators as JSON.
    ExportFixture { path: PathBuf },
}

/// Decimal or `a/b`.
pub fn parse_number(s: &str) -> Result<f64, String> {
    let parse = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    match s.split_once('/') {
        Some((a, b)) => {
            let d = parse(b)?;
            if d == 0.0 {
                return Err("zero denominator".into());
            }
            Ok(parse(a)? / d)
        }
        None => parse(s),
    }
}

#[derive(Serialize)]
struct QuantumReport {
    process: ProcessKind,
    validation: ValidationReport,
    valid: bool,
    comb_alice_first: CombReport,
    comb_bob_first: CombReport,
    comb_alice_first_passed: bool,
    comb_bob_first_passed: bool,
    p_succ: f64,
    expected_p_succ: Option<f64>,
    passed: bool,
}

#[derive(Serialize)]
struct FblOutput {
    #[serde(flatten)]
    inputs: FblInputs,
    #[serde(flatten)]
    report: FblReport,
    extractable: bool,
}

fn expected_game_value(kind: ProcessKind) -> Option<f64> {
    match kind {
        ProcessKind::Wcns => Some((2.0 + std::f64::consts::SQRT_2) / 4.0),
        ProcessKind::WhiteNoise => Some(0.5),
        ProcessKind::CombAB => Some(0.75),
        ProcessKind::CombBA | ProcessKind::WcnsIntercepted => None,
    }
}

fn verify_quantum(kind: ProcessKind, tol: f64) -> Result<(QuantumReport, bool), CliError> {
    let w = kind.build();
    let op = w.operator();
    let validation = validate_process_matrix(op, tol);
    let runtime = |e: crate::quantum::QuantumError| CliError::Runtime(e.to_string());
    let a_first = validate_comb(op, CausalOrder::AliceFirst, tol).map_err(runtime)?;
    let b_first = validate_comb(op, CausalOrder::BobFirst, tol).map_err(runtime)?;
    let p_succ = game_success_probability(&w);
    let expected = expected_game_value(kind);
    let value_ok = expected.is_none_or(|e| (p_succ - e).abs() < 1e-9);
    let order_ok = match kind {
        ProcessKind::Wcns => !a_first.passed() && !b_first.passed(),
        ProcessKind::CombAB => a_first.passed(),
        ProcessKind::CombBA => b_first.passed(),
        ProcessKind::WhiteNoise => a_first.passed() && b_first.passed(),
        ProcessKind::WcnsIntercepted => true,
    };
    let passed = validation.passed() && value_ok && order_ok;
    Ok((
        QuantumReport {
            process: kind,
            valid: validation.passed(),
            validation,
            comb_alice_first_passed: a_first.passed(),
            comb_bob_first_passed: b_first.passed(),
            comb_alice_first: a_first,
            comb_bob_first: b_first,
            p_succ,
            expected_p_succ: expected,
            passed,
        },
        passed,
    ))
}

fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| CliError::Runtime(e.to_string()))
}

fn emit(text: &str, output: Option<&Path>, stdout: &mut dyn Write) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Runtime(e.to_string());
    match output {
        Some(path) => std::fs::write(path, text).map_err(io),
        None => stdout.write_all(text.as_bytes()).map_err(io),
    }
}

/// Runs a parsed command. `Ok(false)` means the command ran but a check or
/// the session itself failed.
pub fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<bool, CliError> {
    match &cli.command {
        Command::VerifyQuantum { process, tol } => {
            let (report, passed) = verify_quantum(*process, *tol)?;
            emit(&to_json(&report)?, None, stdout)?;
            if passed {
                Ok(true)
            } else {
                Err(CliError::Validation(format!("{process} failed its checks")))
            }
        }
        Command::Fbl {
            n,
            epsilon,
            delta,
            p,
            p_eve,
            k,
        } => {
            let inputs = FblInputs {
                n: *n,
                epsilon: *epsilon,
                delta: *delta,
                p: *p,
                p_eve: *p_eve,
                k: k.unwrap_or(*n),
            };
            let report = fbl_report(&inputs).map_err(|e| CliError::Validation(e.to_string()))?;
            let out = FblOutput {
                inputs,
                report,
                extractable: report.key_length > 0.0,
            };
            emit(&to_json(&out)?, None, stdout)?;
            Ok(true)
        }
        Command::Run(flags) => {
            let rc = flags.resolve()?;
            let config = rc.session()?;
            let mut rng = seeded_rng(rc.master_seed());
            let runtime = |e: crate::protocol::ProtocolError| CliError::Runtime(e.to_string());
            let stats = match &rc.transcript {
                Some(path) => {
                    let file = File::create(path).map_err(|e| CliError::Runtime(e.to_string()))?;
                    let mut t = JsonLinesTranscript::new(BufWriter::new(file));
                    let stats = run_session_observed(&config, &mut rng, &mut t).map_err(runtime)?;
                    t.into_inner().flush().map_err(|e| CliError::Runtime(e.to_string()))?;
                    stats
                }
                None => run_session_observed(&config, &mut rng, &mut () as &mut dyn SessionObserver).map_err(runtime)?,
            };
            emit(&to_json(&stats)?, rc.output.as_deref(), stdout)?;
            match stats.status {
                SessionStatus::Ok => Ok(true),
                other => Err(CliError::Runtime(format!("session ended with status {other:?}"))),
            }
        }
        Command::Experiment(flags) => {
            let rc = flags.resolve()?;
            let config = rc.session()?;
            let trials = rc.trials.unwrap_or(1000);
            let report = run_experiment(trials, &config, rc.master_seed()).map_err(|e| CliError::Runtime(e.to_string()))?;
            emit(&to_json(&report)?, rc.output.as_deref(), stdout)?;
            if report.timeouts > 0 {
                return Err(CliError::Runtime(format!("{} sessions hit the round cap", report.timeouts)));
            }
            Ok(true)
        }
        Command::AttackReport { csv, q0, table } => {
            let file = File::open(csv).map_err(|e| CliError::Validation(format!("{}: {e}", csv.display())))?;
            let report = attack_report(file, *q0).map_err(|e| CliError::Validation(e.to_string()))?;
            let text = if *table { render_table(&report) } else { to_json(&report)? };
            emit(&text, None, stdout)?;
            if report.eve_non_increasing {
                Ok(true)
            } else {
                Err(CliError::Validation("eve_value is not non-increasing in Q".into()))
            }
        }
        Command::ExportFixture { path } => {
            emit(&to_json(&operator_fixture())?, Some(path), stdout)?;
            Ok(true)
        }
    }
}

/// Entry point of the binary.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match execute(&cli, &mut lock) {
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
