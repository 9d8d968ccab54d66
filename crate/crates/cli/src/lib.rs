//! Verification campaigns over `wald-core`, emitted as newline-delimited
//! JSON (or CSV) reports.

pub mod campaigns;
pub mod config;
pub mod matrix;
mod pool;
mod random;
pub mod report;

use std::fs::File;
use std::io::{self, BufWriter, Write};

pub use campaigns::{run_campaign, Campaign, Selection};
pub use config::{Format, SessionConfig};
pub use report::{Report, Row};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error(transparent)]
    Core(#[from] wald_core::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::ConfigInvalid(_) | CliError::Core(_) => 2,
            CliError::Io(_) => 1,
        }
    }
}

/// Writes the report to `--out` or stdout and returns the exit code.
pub fn emit(report: &Report, cfg: &SessionConfig) -> Result<i32, CliError> {
    let mut sink: Box<dyn Write> = match &cfg.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(io::stdout().lock()),
    };
    report.write(cfg.format, &mut sink)?;
    sink.flush()?;
    Ok(if report.all_pass() { 0 } else { 1 })
}

/// Prints an error as a JSON object on stderr and exits.
pub fn fail(err: &CliError) -> ! {
    eprintln!("{}", serde_json::json!({"error": err.to_string()}));
    std::process::exit(err.exit_code())
}
