//! `rvq`: tables, reports and plots for information transfer from state
//! preparation to measurement outcomes.
//!
//! Exit codes: 0 success, 1 numerical failure, 2 usage error.

mod commands;
mod config;
mod output;
mod svg;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::config::CommonArgs;

#[derive(Debug, Parser)]
#[command(name = "rvq", version, about = "Information transfer from preparation to measurement")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Differential entropies of the built-in priors.
    Entropy(CommonArgs),
    /// Mutual information along a trial schedule and its large-N limit.
    Sweep(CommonArgs),
    /// Histogram of the α-density induced by a probability rule.
    Induced(CommonArgs),
    /// Uniformity of Born-rule probabilities for complex and real states.
    Sykora(CommonArgs),
    /// SU(2) Bell experiment: equivalence to real four-dimensional states.
    Su2(CommonArgs),
    /// SU(3) generalized Bell experiment: the 16/81 bound.
    Su3(CommonArgs),
    /// SIC frames and the probabilities they cannot reach.
    Sic(CommonArgs),
    /// Orthogonal evolution and the reflection that needs an ancilla.
    Dynamics(CommonArgs),
    /// Data and plots for the α mapping, slope identity and uncertainty regions.
    Figures(CommonArgs),
}

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }

    pub fn io(e: std::io::Error) -> Self {
        Self { code: 1, message: e.to_string() }
    }
}

impl From<rvq::Error> for CliError {
    fn from(e: rvq::Error) -> Self {
        use rvq::Error::*;
        let code = match e {
            Dimension { .. } | UnsupportedDimension(_) | InvalidSchedule(_) | TooFewSamples { .. } | OutOfRange(_) => 2,
            _ => 1,
        };
        Self { code, message: e.to_string() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Entropy(a) => commands::entropy(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::Induced(a) => commands::induced(a),
        Command::Sykora(a) => commands::sykora(a),
        Command::Su2(a) => commands::su2(a),
        Command::Su3(a) => commands::su3(a),
        Command::Sic(a) => commands::sic(a),
        Command::Dynamics(a) => commands::dynamics(a),
        Command::Figures(a) => commands::figures(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("rvq: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
