//! Library behind the `exceedance` binary, so integration tests can drive
//! the commands in-process.

pub mod args;
mod analyze;
mod limits;
mod output;
mod simulate;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;
use serde::Serialize;

use args::{Cli, Command};

pub use output::SCHEMA_VERSION;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NO_DATA: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

/// A failure mapped to an exit code and a short machine-readable kind.
#[derive(Debug, thiserror::Error)]
#[error("{message}")]
pub struct CliError {
    pub code: i32,
    pub kind: &'static str,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, kind: "invalid-argument", message: message.into() }
    }

    fn context(mut self, ctx: &str) -> Self {
        self.message = format!("{ctx}: {}", self.message);
        self
    }
}

impl From<exceedance::Error> for CliError {
    fn from(e: exceedance::Error) -> Self {
        use exceedance::Error as E;
        let (code, kind) = match &e {
            E::InvalidArgument(_) => (EXIT_USAGE, "invalid-argument"),
            E::Parse { .. } | E::Csv(_) => (EXIT_USAGE, "parse"),
            E::Io(_) => (EXIT_USAGE, "io"),
            E::NoData(_) => (EXIT_NO_DATA, "no-data"),
            E::Numeric(_) => (EXIT_NUMERIC, "numeric"),
            E::DegenerateBootstrap { .. } => (EXIT_NUMERIC, "degenerate-bootstrap"),
        };
        Self { code, kind, message: e.to_string() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self { code: EXIT_USAGE, kind: "io", message: e.to_string() }
    }
}

pub(crate) type CliResult<T> = Result<T, CliError>;

#[derive(Serialize)]
struct ErrorReport<'a> {
    error: ErrorBody<'a>,
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    kind: &'a str,
    exit_code: i32,
    message: &'a str,
}

/// Parses `argv`, runs the command and returns the process exit code.
/// Results go to `--out` or `stdout`; diagnostics and errors to `stderr`.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    let result = match &cli.command {
        Command::Analyze(a) => analyze::run(&cli.common, a, stdout).map_err(|e| e.context("analyze")),
        Command::Simulate(s) => simulate::run(&cli.common, s, stdout, stderr).map_err(|e| e.context("simulate")),
        Command::Limits(l) => limits::run(&cli.common, l, stdout).map_err(|e| e.context("limits")),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let report = ErrorReport { error: ErrorBody { kind: e.kind, exit_code: e.code, message: &e.message } };
            let _ = writeln!(stderr, "{}", serde_json::to_string(&report).unwrap_or_default());
            e.code
        }
    }
}
