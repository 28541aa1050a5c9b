use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use polariton_lab::config::Task;
use polariton_lab::{emit, run, CliError, RunConfig};

/// Driven circuit-QED polaritons: spectra, sweeps and reference tables.
#[derive(Debug, Parser)]
#[command(name = "polariton-lab", version)]
struct Args {
    /// eigen | sweep | table1 | spectrum | classify | oracle-check
    task: String,

    /// JSON run configuration; defaults are used when omitted.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Output file (overrides `output.path`).
    #[arg(long)]
    out: Option<PathBuf>,

    /// Override a config field by dotted path, e.g. `params.Omega=20` or `axes.0.count=41`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

fn parse_task(raw: &str) -> Result<Task, CliError> {
    serde_json::from_value(serde_json::Value::String(raw.to_string())).map_err(|_| {
        CliError::Config(format!(
            "unknown task `{raw}` (expected eigen, sweep, table1, spectrum, classify or oracle-check)"
        ))
    })
}

fn execute(args: Args) -> Result<(), CliError> {
    let mut cfg = RunConfig::load(args.config.as_deref(), &args.set)?;
    cfg.task = Some(parse_task(&args.task)?);
    if let Some(out) = args.out {
        cfg.output.path = Some(out);
    }
    let artifact = run(&cfg)?;
    if let Some(text) = emit(&cfg, &artifact)? {
        std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(e.to_string()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match execute(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("polariton-lab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
