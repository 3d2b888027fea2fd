use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use exceedance::{ProcessSpec, ThresholdSpec};

use crate::config::{default_path_len, ExperimentConfig, StatisticKind, DEFAULT_PATHS};
use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "exceedance", version, about = "Hitting times of threshold exceedances: simulation, models and estimation")]
pub struct Cli {
    /// Upper bound on worker threads. Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Directory for outputs written without an explicit --output.
    #[arg(long, global = true, env = "EXCEEDANCE_OUT_DIR")]
    pub out_dir: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-path hitting statistics (0 marks "no hit within the path").
    Simulate(RunArgs),
    /// Monte Carlo pmf of the first hitting time against the closed-form models.
    Compare(RunArgs),
    /// Intervals estimate of the extremal index from a CSV column or a simulated path.
    EstimateTheta(EstimateArgs),
    /// Non-centred sample autocorrelation of a CSV column.
    Acf(AcfArgs),
    /// Edge list to degree sequence CSV.
    Ingest(IngestArgs),
    /// Data behind one of the four figures.
    ReproduceFigure(FigureArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProcessKind {
    Armax,
    MovingMax,
    Ar1Uniform,
    IidFrechet,
}

#[derive(Debug, Default, Args)]
pub struct ProcessArgs {
    #[arg(long, value_enum)]
    pub process: Option<ProcessKind>,
    /// ARMAX coefficient.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Moving-maxima weights, comma separated, non-increasing, summing to 1.
    #[arg(long, value_delimiter = ',')]
    pub weights: Option<Vec<f64>>,
    /// AR(1) lattice size.
    #[arg(long)]
    pub r: Option<u32>,
}

impl ProcessArgs {
    pub fn resolve(&self) -> CliResult<Option<ProcessSpec>> {
        let Some(kind) = self.process else {
            if self.alpha.is_some() || self.weights.is_some() || self.r.is_some() {
                return Err(CliError::config("--alpha, --weights and --r need --process"));
            }
            return Ok(None);
        };
        let name = kind.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
        let missing = |flag: &str| CliError::config(format!("--process {name} needs {flag}"));
        let spec = match kind {
            ProcessKind::Armax => ProcessSpec::armax(self.alpha.ok_or_else(|| missing("--alpha"))?)?,
            ProcessKind::MovingMax => ProcessSpec::moving_max(self.weights.clone().ok_or_else(|| missing("--weights"))?)?,
            ProcessKind::Ar1Uniform => ProcessSpec::ar1_uniform(self.r.ok_or_else(|| missing("--r"))?)?,
            ProcessKind::IidFrechet => ProcessSpec::IidFrechet,
        };
        Ok(Some(spec))
    }
}

#[derive(Debug, Default, Args)]
pub struct TheoryArgs {
    /// Extremal index used by the models; defaults to that of the process.
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long)]
    pub j0: Option<u64>,
    /// Tail index of the Pareto inter-arrival times.
    #[arg(long)]
    pub alpha_tail: Option<f64>,
    /// Observation horizon T of the timed hitting time.
    #[arg(long)]
    pub horizon: Option<f64>,
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long)]
    pub interarrival_scale: Option<f64>,
}

#[derive(Debug, Default, Args)]
pub struct RunArgs {
    /// JSON experiment config; flags given on the command line override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub process: ProcessArgs,
    /// Threshold as the exceedance probability of the marginal quantile.
    #[arg(long, conflicts_with = "u")]
    pub rho: Option<f64>,
    /// Absolute threshold.
    #[arg(long)]
    pub u: Option<f64>,
    #[arg(long)]
    pub paths: Option<u64>,
    /// Values per path; defaults to ceil(50 / (theta rho)).
    #[arg(long)]
    pub path_len: Option<usize>,
    #[arg(long, value_enum)]
    pub statistic: Option<StatisticKind>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub burn_in: Option<usize>,
    /// Largest j in the comparison table.
    #[arg(long)]
    pub j_max: Option<usize>,
    #[command(flatten)]
    pub theory: TheoryArgs,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

impl RunArgs {
    /// Merge the flags over the config file, if any, and fill defaults.
    pub fn resolve(&self) -> CliResult<ExperimentConfig> {
        let base = self.config.as_deref().map(ExperimentConfig::load).transpose()?;
        let process = match (self.process.resolve()?, &base) {
            (Some(p), _) => p,
            (None, Some(b)) => b.process.clone(),
            (None, None) => return Err(CliError::config("missing --process (or --config)")),
        };
        let threshold = match (self.rho, self.u, &base) {
            (Some(rho), _, _) => ThresholdSpec::Quantile { rho },
            (None, Some(u), _) => ThresholdSpec::Absolute { u },
            (None, None, Some(b)) => b.threshold,
            (None, None, None) => return Err(CliError::config("missing --rho or --u (or --config)")),
        };
        let mut theory = base.as_ref().map(|b| b.theory.clone()).unwrap_or_default();
        let t = &self.theory;
        theory.theta = t.theta.or(theory.theta);
        theory.n = t.n.or(theory.n);
        theory.j0 = t.j0.unwrap_or(theory.j0);
        theory.alpha_tail = t.alpha_tail.unwrap_or(theory.alpha_tail);
        theory.horizon = t.horizon.or(theory.horizon);
        theory.tau = t.tau.or(theory.tau);
        theory.interarrival_scale = t.interarrival_scale.unwrap_or(theory.interarrival_scale);

        let mut config = ExperimentConfig {
            process,
            threshold,
            paths: self.paths.or(base.as_ref().map(|b| b.paths)).unwrap_or(DEFAULT_PATHS),
            path_len: 0,
            statistic: self
                .statistic
                .or(base.as_ref().map(|b| b.statistic))
                .unwrap_or(StatisticKind::First),
            theory,
            master_seed: self.seed.or(base.as_ref().map(|b| b.master_seed)).unwrap_or(0),
            burn_in: self.burn_in.or(base.as_ref().map(|b| b.burn_in)).unwrap_or(0),
            j_max: self.j_max.or(base.as_ref().and_then(|b| b.j_max)),
            output: self.output.clone().or(base.as_ref().and_then(|b| b.output.clone())),
        };
        config.path_len = match self.path_len.or(base.as_ref().map(|b| b.path_len)) {
            Some(len) => len,
            None => default_path_len(config.theta(), config.rho()?),
        };
        config.validate()?;
        Ok(config)
    }
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    /// CSV file holding the series.
    #[arg(long, conflicts_with = "process")]
    pub input: Option<PathBuf>,
    /// Column of --input; defaults to `degree` when present, else the first column.
    #[arg(long)]
    pub column: Option<String>,
    #[command(flatten)]
    pub process: ProcessArgs,
    /// Length of the simulated series.
    #[arg(long, default_value_t = 1_000_000)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.05)]
    pub rho: f64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AcfArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub column: Option<String>,
    #[arg(long, default_value_t = 100)]
    pub max_lag: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    /// Edge list: one whitespace-separated `u v` pair per line, `#` comments.
    #[arg(long)]
    pub edges: PathBuf,
    /// Label stored with the degree sequence; defaults to the file stem.
    #[arg(long)]
    pub label: Option<String>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    /// Figure number, 1 to 4.
    #[arg(value_parser = clap::value_parser!(u8).range(1..=4))]
    pub which: u8,
    /// Extremal index of figures 1 and 2.
    #[arg(long, default_value_t = 0.1)]
    pub theta: f64,
    /// Extremal indices of the figure 3 curves.
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.22, 0.15])]
    pub thetas: Vec<f64>,
    /// Threshold of figure 3.
    #[arg(long, default_value_t = 0.05)]
    pub rho: f64,
    /// Largest j0 of figure 3.
    #[arg(long, default_value_t = 100)]
    pub j0_max: u64,
    /// Degree-sequence CSVs written by `ingest`, for figure 4.
    #[arg(long)]
    pub input: Vec<PathBuf>,
    #[arg(long, default_value_t = 100)]
    pub max_lag: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
}
