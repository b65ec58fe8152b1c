//! Command-line front end: flags and config files, dispatch, exit codes.
//!
//! Exit codes: 0 success or PASS, 1 computation error, 2 configuration
//! error, 3 verdict FAIL.

mod config;
mod emit;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

pub use config::{parse_config, to_config_text, Command, RunConfig, DEFAULT_A_SWEEP, DEFAULT_EPS, KEYS};
pub use emit::{construction_csv, csv_text, fmt_f64, manifest, verdict_json, CONSTRUCTION_COLUMNS};
pub use run::{execute, Outcome};

use crate::error::Error;

pub const EXIT_OK: u8 = 0;
pub const EXIT_COMPUTATION: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_FAIL: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "dual-minkowski", version, about = "Solvers and checks for the dual Lp-Minkowski equation")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand, Debug)]
enum Sub {
    /// Solve the classical Minkowski problem for each eps
    Minkowski(Flags),
    /// Solve the dual problem variationally for f = |x'|^alpha |x_n|^beta
    Solve(Flags),
    /// Build both solutions over the eps sweep and report the verdict
    Construct(Flags),
    /// Fit the decay exponent of F over a sweep of a
    Bounds(Flags),
    /// Decay, envelope and S0 checks of the constructed family
    Sweep(Flags),
    /// Seeded identity and formula checks
    Verify(Flags),
}

#[derive(Args, Debug, Default)]
struct Flags {
    #[arg(long, allow_hyphen_values = true)]
    n: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    p: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    q: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<String>,
    /// Comma-separated eps values
    #[arg(long, allow_hyphen_values = true)]
    eps: Option<String>,
    /// Comma-separated ellipsoid aspect ratios
    #[arg(long = "a-sweep", allow_hyphen_values = true)]
    a_sweep: Option<String>,
    /// Number of grid nodes
    #[arg(long = "N", allow_hyphen_values = true)]
    nodes: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    grading: Option<String>,
    /// Maximizer tolerance
    #[arg(long, allow_hyphen_values = true)]
    tol: Option<String>,
    /// Output directory
    #[arg(long)]
    out: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    seed: Option<String>,
    /// key = value file; flags override it
    #[arg(long)]
    config: Option<PathBuf>,
}

impl Flags {
    fn pairs(&self) -> Vec<(&'static str, String)> {
        let all = [
            ("n", &self.n),
            ("p", &self.p),
            ("q", &self.q),
            ("alpha", &self.alpha),
            ("beta", &self.beta),
            ("delta", &self.delta),
            ("eps", &self.eps),
            ("a-sweep", &self.a_sweep),
            ("N", &self.nodes),
            ("grading", &self.grading),
            ("tol", &self.tol),
            ("out", &self.out),
            ("seed", &self.seed),
        ];
        all.into_iter()
            .filter_map(|(k, v)| v.as_ref().map(|v| (k, v.clone())))
            .collect()
    }
}

/// Parses arguments into a validated configuration.
pub fn config_from_args<I, T>(args: I) -> std::result::Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(CliError::Usage)?;
    let (command, flags) = match cli.command {
        Sub::Minkowski(f) => (Command::Minkowski, f),
        Sub::Solve(f) => (Command::Solve, f),
        Sub::Construct(f) => (Command::Construct, f),
        Sub::Bounds(f) => (Command::Bounds, f),
        Sub::Sweep(f) => (Command::Sweep, f),
        Sub::Verify(f) => (Command::Verify, f),
    };
    let file = match &flags.config {
        Some(path) => Some(std::fs::read_to_string(path).map_err(|e| {
            CliError::Run(Error::Config(format!("cannot read {}: {e}", path.display())))
        })?),
        None => None,
    };
    let mut pairs = flags.pairs();
    pairs.push(("command", command.name().to_string()));
    parse_config(file.as_deref(), &pairs).map_err(CliError::Run)
}

#[derive(Debug)]
pub enum CliError {
    Usage(clap::Error),
    Run(Error),
}

/// Runs the program on `args` and maps the outcome to an exit code.
pub fn run_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cfg = match config_from_args(args) {
        Ok(cfg) => cfg,
        Err(CliError::Usage(e)) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
        Err(CliError::Run(e)) => return report_error(&e),
    };
    match execute(&cfg) {
        Ok(outcome) => {
            for line in &outcome.report {
                println!("{line}");
            }
            if outcome.pass {
                EXIT_OK
            } else {
                EXIT_FAIL
            }
        }
        Err(e) => report_error(&e),
    }
}

fn report_error(e: &Error) -> u8 {
    eprintln!("error: {e}");
    if e.is_config() {
        EXIT_CONFIG
    } else {
        EXIT_COMPUTATION
    }
}

pub fn main() -> ExitCode {
    ExitCode::from(run_args(std::env::args_os()))
}
