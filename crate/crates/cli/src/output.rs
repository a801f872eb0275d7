use std::fs::File;
use std::io::{BufWriter, Write};

use serde::Serialize;

use crate::args::{Common, Format};
use crate::CliResult;

/// Version of the JSON report layout described by `schemas/report.schema.json`.
pub const SCHEMA_VERSION: &str = "1.0.0";

/// Fields shared by every JSON report.
#[derive(Debug, Serialize)]
pub struct Header {
    pub schema_version: &'static str,
    pub tool_version: &'static str,
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generated_at: Option<String>,
    pub seed: u64,
}

impl Header {
    pub fn new(command: &'static str, common: &Common) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION"),
            command,
            generated_at: (!common.no_timestamp)
                .then(|| chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)),
            seed: common.seed,
        }
    }
}

pub fn format_or(common: &Common, default: Format) -> Format {
    common.format.unwrap_or(default)
}

/// Sends `write` either to `--out` or to `stdout`.
pub fn emit(common: &Common, stdout: &mut dyn Write, write: impl FnOnce(&mut dyn Write) -> std::io::Result<()>) -> CliResult<()> {
    match &common.out {
        Some(path) => {
            let mut f = BufWriter::new(File::create(path).map_err(|e| {
                crate::CliError::from(e).context_path(path)
            })?);
            write(&mut f)?;
            f.flush()?;
        }
        None => write(stdout)?,
    }
    Ok(())
}

pub fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)
}

impl crate::CliError {
    fn context_path(mut self, path: &std::path::Path) -> Self {
        self.message = format!("{}: {}", path.display(), self.message);
        self
    }
}
