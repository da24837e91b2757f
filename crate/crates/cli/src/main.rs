//! `qaseries` command line. Exit codes: 0 completed, 1 error, 2 a zero
//! witness was found.

mod commands;
mod config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;
use qaseries::sieve::MEMORY_BUDGET_ENV;
use qaseries::SieveConfig;
use serde::Serialize;

use config::{Format, RunConfig};

#[derive(Debug, Parser)]
#[command(
    name = "qaseries",
    version,
    about = "Quasi-alternating prime series explorer"
)]
#[command(after_help = format!(
    "Exit codes: 0 ok, 1 error, 2 zero witness found.\n\
     The sieve memory budget in bytes is read from {MEMORY_BUDGET_ENV}."
))]
struct Cli {
    #[command(flatten)]
    run: RunConfig,

    /// TOML file with the same fields as the flags; flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Serialize)]
struct Metadata {
    tool: &'static str,
    version: &'static str,
    generated_at: String,
}

/// Structured output: everything outside `metadata` depends only on the
/// configuration.
#[derive(Serialize)]
struct Document<'a> {
    metadata: Metadata,
    config: &'a RunConfig,
    result: serde_json::Value,
}

fn execute(cli: Cli) -> anyhow::Result<bool> {
    let cfg = match &cli.config {
        Some(path) => RunConfig::from_file(path)?.overlay(cli.run),
        None => cli.run,
    };
    let sieve = SieveConfig::from_env()?;
    if let Some(jobs) = cfg.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .context("setting up the worker pool")?;
    }
    let out = commands::run(&cfg, sieve)?;
    let bytes = match cfg.format() {
        Format::Text => out.text.into_bytes(),
        Format::Csv => out.csv,
        Format::Json => {
            let doc = Document {
                metadata: Metadata {
                    tool: "qaseries",
                    version: env!("CARGO_PKG_VERSION"),
                    generated_at: chrono::Utc::now()
                        .to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
                },
                config: &cfg,
                result: out.result,
            };
            let mut b = serde_json::to_vec_pretty(&doc)?;
            b.push(b'\n');
            b
        }
    };
    match &cfg.output {
        Some(path) => qaseries::store::write_atomic(path, &bytes)
            .with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().lock().write_all(&bytes)?,
    }
    Ok(out.zero_found)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
