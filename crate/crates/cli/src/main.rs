//! `boolezeta`: reproducible experiments on ergodic mean values of zeta- and
//! L-functions along orbits of affine Boolean transformations.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 numeric failure.

mod commands;
mod config;
mod output;

use std::fmt;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::Flags;

#[derive(Debug, Parser)]
#[command(name = "boolezeta", version, about = "Ergodic mean values of zeta and L-functions under Boolean maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Command {
    /// Stream an orbit as CSV rows (step, value).
    Orbit,
    /// Kolmogorov–Smirnov check of orbit samples against the invariant Cauchy law.
    Distcheck,
    /// Closed form, quadrature and ergodic average at one or more points.
    Mean,
    /// Comparison table over a grid of points, one row per point.
    Compare,
    /// Running 2l-th moments on the critical line.
    Lindelof,
    /// Laurent coefficients about s = 1.
    Laurent,
    /// Stieltjes constants by two independent methods.
    Stieltjes,
}

/// Failure classes mapped onto exit codes.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Numeric(String),
    Io(std::io::Error),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) | Failure::Io(_) => 1,
            Failure::Numeric(_) => 2,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "error: {m}"),
            Failure::Numeric(m) => write!(f, "numeric failure: {m}"),
            Failure::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<boolezeta_core::Error> for Failure {
    fn from(e: boolezeta_core::Error) -> Self {
        if e.is_numeric_failure() {
            Failure::Numeric(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(e.into())
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let cfg = cli.flags.resolve()?;
    match cli.command {
        Command::Orbit => commands::orbit(&cfg),
        Command::Distcheck => commands::distcheck(&cfg),
        Command::Mean => commands::mean(&cfg),
        Command::Compare => commands::compare(&cfg),
        Command::Lindelof => commands::lindelof(&cfg),
        Command::Laurent => commands::laurent(&cfg),
        Command::Stieltjes => commands::stieltjes(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{f}");
            ExitCode::from(f.exit_code())
        }
    }
}
