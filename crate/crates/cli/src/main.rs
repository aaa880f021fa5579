//! `bergman` command-line harness.
//!
//! Exit status: 0 when every check passes, 1 when a check fails or the
//! computation errors, 2 when a supplied hypothesis is violated, 64 for a
//! malformed configuration.

mod commands;
mod config;
mod output;

use std::process::ExitCode;

use bergman::LabError;
use clap::Parser;

use crate::commands::RunError;
use crate::config::{Cli, RunConfig};

const EXIT_USAGE: u8 = 64;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let config = match RunConfig::resolve(cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}\n\nRun `bergman --help` for usage.");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match commands::run(&config) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(RunError::Usage(e)) => {
            eprintln!("error: {e}\n\nRun `bergman --help` for usage.");
            ExitCode::from(EXIT_USAGE)
        }
        Err(RunError::Lab(e @ LabError::HypothesisViolation { .. })) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(RunError::Lab(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(RunError::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
