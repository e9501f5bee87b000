//! Batch front end for `betashift-core`.
//!
//! [`run`] parses an argument vector, executes one subcommand and writes data
//! to `out` and diagnostics to `err`. The binary is a thin wrapper around it.

use std::io::Write;

use betashift_core::Error;
use clap::Parser;

mod args;
mod commands;
mod render;
pub mod verify;

pub use args::{Cli, Command, Format};
pub use render::{render, Output};

/// Exit status for a successful run.
pub const EXIT_OK: i32 = 0;
/// Malformed command line.
pub const EXIT_USAGE: i32 = 1;
/// Input outside the domain of the operation: bad word, probability or base.
pub const EXIT_DOMAIN: i32 = 2;
/// Precision, guard or solver failure.
pub const EXIT_PRECISION: i32 = 3;
/// `verify` ran to completion and at least one check failed.
pub const EXIT_CHECK_FAILED: i32 = 4;

/// Failure of a subcommand before any data is written.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

/// Exit status for a core error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidExpansion(_) | Error::Domain(_) | Error::Inadmissible | Error::Parse(_) => {
            EXIT_DOMAIN
        }
        Error::Precision { .. }
        | Error::Undecided { .. }
        | Error::Guard { .. }
        | Error::Solver(_)
        | Error::Consistency(_) => EXIT_PRECISION,
    }
}

/// Runs one invocation and returns its exit status.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(rendered.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(rendered.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    let mut warnings = Vec::new();
    let result = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| commands::execute(&cli, &mut warnings)),
            Err(e) => Err(CliError::Usage(format!("cannot start {n} worker threads: {e}"))),
        },
        None => commands::execute(&cli, &mut warnings),
    };
    for w in &warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    match result {
        Ok(output) => {
            let text = render(&output, cli.format);
            if out.write_all(text.as_bytes()).is_err() {
                return EXIT_PRECISION;
            }
            if output.failed {
                EXIT_CHECK_FAILED
            } else {
                EXIT_OK
            }
        }
        Err(CliError::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_USAGE
        }
        Err(CliError::Core(e)) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
