//! Command-line front end for `entropy-lab`.
//!
//! Exit codes: 0 on success, 1 when a report violates its tolerance, 2 on
//! usage, input or I/O errors.

pub mod commands;
pub mod config;
pub mod report;

use std::ffi::OsString;

pub use commands::{execute, Outcome};
pub use config::{parse_and_validate, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Clap(clap::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Run(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Clap(e) => e.exit_code(),
            _ => 2,
        }
    }
}

/// Parses, runs and emits; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match parse_and_validate(argv) {
        Ok(cfg) => cfg,
        Err(CliError::Clap(e)) => {
            let _ = e.print();
            return e.exit_code();
        }
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let outcome = match execute(&cfg).and_then(|o| {
        report::emit_report(&o.rows, cfg.format, cfg.out.as_deref())?;
        Ok(o)
    }) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    for v in &outcome.violations {
        eprintln!("tolerance violation: {v}");
    }
    if outcome.violations.is_empty() {
        0
    } else {
        1
    }
}
