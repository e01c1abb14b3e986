//! `ctinv`: command-line front end for the one-term inversion library.
//!
//! Exit status: 0 on success, 1 when a computation fails or a check does
//! not hold, 2 on invalid usage.

mod args;
mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use ctinv::Execution;

use args::{Cli, Command, Format};

pub struct Ctx {
    pub format: Format,
    pub output: Option<PathBuf>,
    pub exec: Execution,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Compute(ctinv::Error),
    Failed(String),
    Io(std::io::Error),
}

impl From<ctinv::Error> for CliError {
    fn from(e: ctinv::Error) -> Self {
        match e {
            // a branch index the user asked for that maps below L = -1/2
            ctinv::Error::InadmissibleBranch { .. } => CliError::Usage(e.to_string()),
            other => CliError::Compute(other),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    commands::validate(&cli.command)?;
    let ctx = Ctx {
        format: cli.format,
        output: cli.output.clone(),
        exec: if cli.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        },
    };
    let cmd = &cli.command;
    match cmd {
        Command::Invert(a) => commands::invert(&ctx, cmd, a),
        Command::CheckTheorem(a) => commands::check_theorem(&ctx, cmd, a),
        Command::CheckProposition(a) => commands::check_proposition(&ctx, cmd, a),
        Command::ScanWronskian(a) => commands::scan_wronskian(&ctx, cmd, a),
        Command::Zeros(a) => commands::zeros_table(&ctx, cmd, a),
        Command::VerifyRoundtrip(a) => commands::verify_roundtrip(&ctx, cmd, a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}\n\nFor more information, try '--help'.");
            ExitCode::from(2)
        }
        Err(CliError::Compute(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(CliError::Failed(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
