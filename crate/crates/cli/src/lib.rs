//! The `qdilog` command: `verify` runs named suites over a list of τ,
//! `eval` prints one value, `table` writes plot data.
//!
//! Exit codes: 0 all checks passed, 1 a check failed or a value is undefined,
//! 2 usage error (including an unknown suite), 3 I/O failure.

pub mod config;
pub mod eval;
pub mod run;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::Serialize;

use config::{Format, Settings};
use eval::{Evaluator, Function};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Domain(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "qdilog",
    version,
    about = "Modular quantum dilogarithm: evaluation and identity checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run verification suites and report every check.
    Verify(VerifyArgs),
    /// Print one value with its error estimate.
    Eval(EvalArgs),
    /// Write `input,re,im,est_error` rows over a range.
    Table(TableArgs),
}

#[derive(Debug, clap::Args)]
pub struct VerifyArgs {
    /// Comma-separated τ values, real or `a+bi` [default: 1]
    #[arg(long, allow_hyphen_values = true)]
    pub tau: Option<String>,
    /// Comma-separated suite names or `all` [default: all]
    #[arg(long)]
    pub suite: Option<String>,
    /// Grid size and length at τ = 1, `NxL` [default: 2048x24]
    #[arg(long)]
    pub grid: Option<String>,
    /// Tolerance override: a number for every suite, and/or `suite=value` pairs
    #[arg(long)]
    pub tol: Option<String>,
    /// Report file, written once at the end
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Report file format [default: json]
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Seed for sampled points [default: 1]
    #[arg(long)]
    pub seed: Option<u64>,
    /// Print the JSON report on stdout; the summary table goes to stderr
    #[arg(long)]
    pub json: bool,
    /// Flat `key = value` file with the same keys as the flags; flags win
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct EvalArgs {
    #[arg(value_enum)]
    pub function: Function,
    /// Point, real or `a+bi`; for `rho` this is τ
    #[arg(allow_hyphen_values = true)]
    pub point: String,
    #[arg(long, allow_hyphen_values = true)]
    pub tau: Option<String>,
    /// Fixed z for `rho`
    #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
    pub z: f64,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, clap::Args)]
pub struct TableArgs {
    #[arg(value_enum)]
    pub function: Function,
    #[arg(long, allow_hyphen_values = true)]
    pub from: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub to: f64,
    #[arg(long)]
    pub step: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub tau: Option<String>,
    /// Fixed z for `rho`
    #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
    pub z: f64,
    /// CSV file; stdout when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses `args` (program name first) and runs; returns the exit code.
pub fn main_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(stdout, "{text}")
            } else {
                write!(stderr, "{text}")
            };
            return code;
        }
    };
    match dispatch(cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn io(e: std::io::Error) -> CliError {
    CliError::Io(e.to_string())
}

fn dispatch(cmd: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, CliError> {
    match cmd {
        Command::Verify(a) => verify(a, stdout, stderr),
        Command::Eval(a) => {
            let tau = a.tau.as_deref().map(config::parse_complex).transpose()?;
            let ev = Evaluator::new(a.function, tau, a.z)?;
            let point = config::parse_complex(&a.point)?;
            let v = ev.eval(point)?;
            if a.json {
                #[derive(Serialize)]
                struct Out {
                    function: String,
                    point: [f64; 2],
                    value: [f64; 2],
                    est_error: Option<f64>,
                    tau: Option<[f64; 2]>,
                    #[serde(skip_serializing_if = "Option::is_none")]
                    z: Option<f64>,
                }
                let out = Out {
                    function: format!("{:?}", a.function),
                    point: [point.re, point.im],
                    value: [v.re, v.im],
                    est_error: v.est_error,
                    tau: tau.map(|t| [t.re, t.im]),
                    z: (a.function == Function::Rho).then_some(a.z),
                };
                writeln!(
                    stdout,
                    "{}",
                    serde_json::to_string(&out).expect("serialises")
                )
                .map_err(io)?;
            } else {
                writeln!(stdout, "{}", eval::format_value(&v)).map_err(io)?;
            }
            Ok(0)
        }
        Command::Table(a) => {
            let tau = a.tau.as_deref().map(config::parse_complex).transpose()?;
            let ev = Evaluator::new(a.function, tau, a.z)?;
            let csv = eval::table(&ev, &eval::range(a.from, a.to, a.step)?);
            match &a.out {
                Some(p) => run::write_output(p, &csv)?,
                None => write!(stdout, "{csv}").map_err(io)?,
            }
            Ok(0)
        }
    }
}

fn verify(a: VerifyArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, CliError> {
    let file = match &a.config {
        Some(p) => config::read_config_file(p)?,
        None => Settings::default(),
    };
    let flags = Settings {
        tau: a.tau,
        suite: a.suite,
        grid: a.grid,
        tol: a.tol,
        out: a.out.map(|p| p.to_string_lossy().into_owned()),
        format: a.format,
        seed: a.seed,
    };
    let cfg = flags.over(file).resolve()?;
    let out = run::execute(&cfg)?;
    if let Some(p) = &cfg.out {
        run::write_output(p, &run::render(&out, cfg.format))?;
    }
    let table = run::summary_table(&out);
    if a.json {
        write!(stdout, "{}", run::to_json(&out)).map_err(io)?;
        write!(stderr, "{table}").map_err(io)?;
    } else {
        write!(stdout, "{table}").map_err(io)?;
    }
    Ok(if out.all_passed() { 0 } else { 1 })
}
