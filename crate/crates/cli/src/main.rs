//! `radialwave` command-line front end.
//!
//! Exit status: 0 when every check passes or the run ends as expected, 1 when
//! a check fails or a run goes wrong, 2 for invalid input.

mod args;
mod catalog;
mod error;
mod model;
mod reconstruct;
mod sim;
mod verify;

use std::process::ExitCode;

use clap::Parser;

use args::{with_config, Cli, Command};
use error::{config, CliError};

const THREADS_VAR: &str = "RADIALWAVE_THREADS";

/// Writes to stdout; a closed pipe (e.g. `| head`) is not an error.
pub(crate) fn emit(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|()| out.flush());
}

fn limit_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_VAR) else { return Ok(()) };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| config(format!("{THREADS_VAR} must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| config(format!("thread pool: {e}")))
}

fn dispatch(command: Command) -> Result<bool, CliError> {
    match command {
        Command::Catalog(a) => {
            let rows = catalog::rows(&a)?;
            if a.json {
                emit(&(serde_json::to_string_pretty(&rows).expect("rows serialize") + "\n"));
            } else {
                emit(&catalog::render_table(&rows));
            }
            Ok(true)
        }
        Command::Verify(a) => {
            let path = a.config.clone();
            verify::verify(with_config(a, path.as_deref())?)
        }
        Command::Simulate(a) => {
            let path = a.config.clone();
            sim::simulate(with_config(a, path.as_deref())?)
        }
        Command::Convergence(a) => {
            let path = a.config.clone();
            sim::convergence(with_config(a, path.as_deref())?)
        }
        Command::Blowup(a) => {
            let path = a.config.clone();
            sim::blowup(with_config(a, path.as_deref())?)
        }
        Command::Reconstruct(a) => {
            let path = a.config.clone();
            reconstruct::reconstruct(with_config(a, path.as_deref())?)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match limit_threads().and_then(|()| dispatch(cli.command)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
