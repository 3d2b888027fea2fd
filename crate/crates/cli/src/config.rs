//! Serializable experiment description. A resolved config, together with the
//! crate version, determines every byte of a command's CSV output.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use exceedance::processes::InterArrivalSpec;
use exceedance::{McConfig, ProcessSpec, Statistic, TheoryParams, ThresholdSpec};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const DEFAULT_PATHS: u64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum StatisticKind {
    First,
    Second,
    JointFirstGap,
    Timed,
}

/// Theory-side parameters; `theta` and `rho` default to the process and threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoryConfig {
    #[serde(default)]
    pub theta: Option<f64>,
    #[serde(default)]
    pub n: Option<u64>,
    #[serde(default)]
    pub j0: u64,
    #[serde(default = "one")]
    pub alpha_tail: f64,
    /// `None` is an unbounded horizon.
    #[serde(default)]
    pub horizon: Option<f64>,
    #[serde(default)]
    pub tau: Option<f64>,
    /// Scale of the Pareto inter-arrival times.
    #[serde(default = "one")]
    pub interarrival_scale: f64,
}

fn one() -> f64 {
    1.0
}

impl Default for TheoryConfig {
    fn default() -> Self {
        Self {
            theta: None,
            n: None,
            j0: 0,
            alpha_tail: one(),
            horizon: None,
            tau: None,
            interarrival_scale: one(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub process: ProcessSpec,
    pub threshold: ThresholdSpec,
    pub paths: u64,
    pub path_len: usize,
    pub statistic: StatisticKind,
    #[serde(default)]
    pub theory: TheoryConfig,
    pub master_seed: u64,
    #[serde(default)]
    pub burn_in: usize,
    /// Largest `j` tabulated by `compare`.
    #[serde(default)]
    pub j_max: Option<usize>,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::config(format!("invalid config {}: {e}", path.display())))
    }

    /// Exceedance probability of the threshold under the exact marginal.
    pub fn rho(&self) -> CliResult<f64> {
        match self.threshold {
            ThresholdSpec::Quantile { rho } => Ok(rho),
            ThresholdSpec::Absolute { u } => {
                let rho = 1.0 - self.process.marginal().cdf(u);
                if rho > 0.0 && rho < 1.0 {
                    Ok(rho)
                } else {
                    Err(CliError::config(format!("threshold u = {u} has exceedance probability {rho}")))
                }
            }
        }
    }

    pub fn threshold_u(&self) -> CliResult<f64> {
        Ok(self.threshold.resolve_for(&self.process)?)
    }

    pub fn theta(&self) -> f64 {
        self.theory.theta.unwrap_or_else(|| self.process.theta())
    }

    pub fn theory_params(&self) -> CliResult<TheoryParams> {
        let mut p = TheoryParams::new(self.theta(), self.rho()?)?.with_j0(self.theory.j0);
        if let Some(n) = self.theory.n {
            p = p.with_n(n);
        }
        p = p.with_horizon(self.theory.alpha_tail, self.theory.horizon.unwrap_or(f64::INFINITY))?;
        p.tau = self.theory.tau;
        p.validate()?;
        Ok(p)
    }

    pub fn interarrival(&self) -> CliResult<InterArrivalSpec> {
        Ok(InterArrivalSpec::new(self.theory.alpha_tail, self.theory.interarrival_scale)?)
    }

    pub fn statistic(&self) -> CliResult<Statistic> {
        Ok(match self.statistic {
            StatisticKind::First => Statistic::First,
            StatisticKind::Second => Statistic::Second,
            StatisticKind::JointFirstGap => Statistic::JointFirstGap,
            StatisticKind::Timed => Statistic::Timed {
                horizon: self.theory.horizon.unwrap_or(f64::INFINITY),
                interarrival: self.interarrival()?,
            },
        })
    }

    pub fn mc_config(&self) -> McConfig {
        McConfig {
            process: self.process.clone(),
            threshold: self.threshold,
            paths: self.paths,
            path_len: self.path_len,
            master_seed: self.master_seed,
            burn_in: self.burn_in,
        }
    }

    pub fn validate(&self) -> CliResult<()> {
        self.process.validate()?;
        self.threshold_u()?;
        if self.paths == 0 {
            return Err(CliError::config("paths must be >= 1"));
        }
        if self.path_len == 0 {
            return Err(CliError::config("path-len must be >= 1"));
        }
        if let Some(h) = self.theory.horizon {
            if h.is_nan() || h < 0.0 {
                return Err(CliError::config(format!("horizon must be nonnegative, got {h}")));
            }
        }
        self.theory_params()?;
        Ok(())
    }
}

/// `ceil(50 / (theta rho))`, long enough that the mass beyond the path is negligible.
pub fn default_path_len(theta: f64, rho: f64) -> usize {
    (50.0 / (theta * rho)).ceil().max(1.0) as usize
}
