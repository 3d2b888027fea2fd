//! Command-line experiments over the `exceedance` library.
//!
//! Every command writes a CSV table, a `<table>.meta.json` sidecar with its
//! metadata, and a `<table>.config.json` file holding the resolved
//! configuration that reproduces it. CSV bytes depend only on the
//! configuration and the crate version.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod figures;

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::Parser;
use exceedance::write_table;

pub use args::Cli;
use args::Command;
use commands::Artifact;
pub use config::ExperimentConfig;
pub use error::{CliError, CliResult};

/// What a successful invocation wrote.
#[derive(Debug, Clone)]
pub struct Report {
    pub table_path: PathBuf,
    pub config_path: PathBuf,
    pub summary: String,
}

/// `<path>.config.json`.
pub fn config_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".config.json");
    PathBuf::from(s)
}

/// Parse `args` (including the program name) and run the command.
pub fn run_from<I, T>(args: I) -> CliResult<Report>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| CliError::Config(e.to_string()))?;
    run(cli)
}

pub fn run(cli: Cli) -> CliResult<Report> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(CliError::Config("--threads must be >= 1".into()));
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| CliError::Config(format!("cannot start {threads} threads: {e}")))?;
        return pool.install(|| execute(&cli));
    }
    execute(&cli)
}

fn execute(cli: &Cli) -> CliResult<Report> {
    let artifact = match &cli.command {
        Command::Simulate(a) => commands::simulate_cmd(a)?,
        Command::Compare(a) => commands::compare_cmd(a)?,
        Command::EstimateTheta(a) => commands::estimate_theta_cmd(a)?,
        Command::Acf(a) => commands::acf_cmd(a)?,
        Command::Ingest(a) => commands::ingest_cmd(a)?,
        Command::ReproduceFigure(a) => commands::figure_cmd(a)?,
    };
    emit(artifact, cli.out_dir.as_deref())
}

fn emit(mut artifact: Artifact, out_dir: Option<&Path>) -> CliResult<Report> {
    let table_path = match artifact.output.take() {
        Some(p) => p,
        None => out_dir.unwrap_or(Path::new(".")).join(&artifact.default_name),
    };
    if let Some(parent) = table_path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)
            .map_err(|e| CliError::Data(format!("cannot create {}: {e}", parent.display())))?;
    }
    let created = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
    let meta = &mut artifact.table.metadata;
    meta.insert("command".into(), artifact.command.into());
    meta.insert("version".into(), env!("CARGO_PKG_VERSION").into());
    meta.insert("created_unix".into(), created.to_string());
    write_table(&table_path, &artifact.table)?;

    let config_path = config_path(&table_path);
    let record = serde_json::json!({
        "command": artifact.command,
        "version": env!("CARGO_PKG_VERSION"),
        "config": artifact.config,
    });
    let text = serde_json::to_string_pretty(&record).expect("config serializes") + "\n";
    std::fs::write(&config_path, text)
        .map_err(|e| CliError::Data(format!("cannot write {}: {e}", config_path.display())))?;
    Ok(Report {
        table_path,
        config_path,
        summary: artifact.summary,
    })
}
