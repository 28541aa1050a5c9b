//! Parameter sweeps and datasets for the driven circuit-QED polariton model.

pub mod config;
pub mod dataset;
pub mod error;
pub mod tasks;

use std::path::Path;

pub use config::RunConfig;
pub use error::CliError;
pub use tasks::{run_task, Artifact};

use config::Format;

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "POLARITON_LAB_THREADS";

/// Runs the configured task, in a dedicated pool when `POLARITON_LAB_THREADS` is set.
pub fn run(cfg: &RunConfig) -> Result<Artifact, CliError> {
    match std::env::var(THREADS_ENV) {
        Ok(raw) => {
            let threads: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
                CliError::Config(format!(
                    "{THREADS_ENV} must be a positive integer, got `{raw}`"
                ))
            })?;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| {
                    CliError::Config(format!("cannot start {threads} worker threads: {e}"))
                })?;
            pool.install(|| run_task(cfg))
        }
        Err(_) => run_task(cfg),
    }
}

pub fn render(cfg: &RunConfig, artifact: &Artifact) -> Result<String, CliError> {
    match artifact {
        Artifact::Report(v) => Ok(pretty(v)),
        Artifact::Table(d) => match cfg.output.format.unwrap_or(Format::Csv) {
            Format::Csv => d.to_csv(),
            Format::Json => Ok(pretty(&d.to_json())),
        },
    }
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON serializes");
    s.push('\n');
    s
}

/// Writes to `output.path`, or returns the text for standard output.
pub fn emit(cfg: &RunConfig, artifact: &Artifact) -> Result<Option<String>, CliError> {
    let text = render(cfg, artifact)?;
    match &cfg.output.path {
        Some(path) => {
            write_file(path, &text)?;
            Ok(None)
        }
        None => Ok(Some(text)),
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
