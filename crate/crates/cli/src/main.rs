//! `xbudget`: exchange-gate feasibility, gate error, Monte Carlo and sweeps.
//!
//! Exit status: 0 when the analysis completed (whatever the verdict),
//! 1 on internal failure, 2 on bad input.

mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn internal(e: impl std::fmt::Display) -> Self {
        CliError::Internal(e.to_string())
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Internal(_) => 1,
        }
    }
}

impl From<exchange_budget::Error> for CliError {
    fn from(e: exchange_budget::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<exchange_budget::specfile::SpecError> for CliError {
    fn from(e: exchange_budget::specfile::SpecError) -> Self {
        CliError::Input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    let result = match cli.command {
        Command::Feasibility(a) => commands::feasibility(a),
        Command::Gate(a) => commands::gate(a),
        Command::Mc(a) => commands::mc(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::Catalog(a) => commands::catalog(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let kind = match e {
                CliError::Input(_) => "input error",
                CliError::Internal(_) => "internal error",
            };
            eprintln!("xbudget: {kind}: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
