//! Hitting times of a threshold and their Monte Carlo distributions.
//!
//! Indices are 1-based: `T* = 1` means `X_1` already exceeds. Exceedance is
//! strict, `X_i > u`.

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::empirical_quantile;
use crate::processes::{InterArrivalSpec, PathGenerator, ProcessSpec, SamplePath};
use crate::rng::{Channel, RngStream};

/// Overflow mass above which a Monte Carlo pmf is flagged.
pub const OVERFLOW_FLAG: f64 = 0.01;
/// Overflow mass a well-sized run stays below.
pub const OVERFLOW_BUDGET: f64 = 1e-3;

const MIN_PATHS_PER_TASK: u64 = 1024;

/// How the threshold `u` is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum ThresholdSpec {
    /// `u` is the `(1 - rho)`-quantile of the marginal.
    Quantile { rho: f64 },
    Absolute { u: f64 },
}

impl ThresholdSpec {
    /// Resolve against the exact marginal of a known model.
    pub fn resolve_for(&self, spec: &ProcessSpec) -> Result<f64> {
        match *self {
            ThresholdSpec::Quantile { rho } => spec.marginal().upper_quantile(rho),
            ThresholdSpec::Absolute { u } => finite_threshold(u),
        }
    }

    /// Resolve against observed data with the order-statistic quantile.
    pub fn resolve_for_data(&self, data: &[f64]) -> Result<f64> {
        match *self {
            ThresholdSpec::Quantile { rho } => {
                crate::processes::check_open_unit("rho", rho)?;
                empirical_quantile(data, 1.0 - rho)
            }
            ThresholdSpec::Absolute { u } => finite_threshold(u),
        }
    }
}

fn finite_threshold(u: f64) -> Result<f64> {
    if u.is_finite() {
        Ok(u)
    } else {
        Err(Error::domain(format!("threshold must be finite, got {u}")))
    }
}

/// Ordered exceedance indices of one path.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HittingRecord {
    /// Strictly increasing, 1-based.
    pub exceedance_indices: Vec<usize>,
}

impl HittingRecord {
    pub fn first(&self) -> Option<usize> {
        self.kth(1)
    }

    pub fn second(&self) -> Option<usize> {
        self.kth(2)
    }

    /// The k-th hitting time, `k >= 1`.
    pub fn kth(&self, k: usize) -> Option<usize> {
        k.checked_sub(1).and_then(|i| self.exceedance_indices.get(i).copied())
    }

    pub fn inter_gaps(&self) -> Vec<usize> {
        self.exceedance_indices.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.exceedance_indices.is_empty()
    }
}

/// First `k` exceedance indices of `values` over `u`.
pub fn hitting_times_in(values: &[f64], u: f64, k: usize) -> Result<HittingRecord> {
    if k == 0 {
        return Err(Error::domain("k must be >= 1"));
    }
    let exceedance_indices = values
        .iter()
        .enumerate()
        .filter(|(_, &x)| x > u)
        .map(|(i, _)| i + 1)
        .take(k)
        .collect();
    Ok(HittingRecord { exceedance_indices })
}

pub fn hitting_times(path: &SamplePath, u: f64, k: usize) -> Result<HittingRecord> {
    hitting_times_in(&path.values, u, k)
}

/// All gaps between consecutive exceedances. Gaps are collected from the first
/// exceedance on, which realizes the conditioning on `X_1 > u` of the
/// inter-cluster size.
pub fn inter_exceedance_gaps(values: &[f64], u: f64) -> Vec<usize> {
    let mut gaps = Vec::new();
    let mut last = None;
    for (i, &x) in values.iter().enumerate() {
        if x > u {
            if let Some(prev) = last {
                gaps.push(i - prev);
            }
            last = Some(i);
        }
    }
    gaps
}

/// First hitting index `j + 1` if it arrives by time `horizon`, i.e.
/// `S_{j+1} = Y_1 + ... + Y_j <= horizon`.
pub fn timed_first_hitting(path: &SamplePath, u: f64, horizon: f64) -> Result<Option<usize>> {
    let ys = path
        .interarrivals
        .as_ref()
        .ok_or_else(|| Error::domain("timed hitting needs a path with inter-arrival times"))?;
    let Some(first) = hitting_times(path, u, 1)?.first() else {
        return Ok(None);
    };
    let arrival: f64 = ys[..first - 1].iter().sum();
    Ok((arrival <= horizon).then_some(first))
}

/// Monte Carlo probability mass function over `1..=j_max` plus an overflow
/// bucket for outcomes beyond `j_max` or never observed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmpiricalPmf {
    counts: Vec<u64>,
    overflow: u64,
    paths: u64,
}

impl EmpiricalPmf {
    pub fn new(j_max: usize) -> Self {
        Self {
            counts: vec![0; j_max],
            overflow: 0,
            paths: 0,
        }
    }

    /// Build from observed outcomes (`None` goes to overflow).
    pub fn from_outcomes(j_max: usize, outcomes: impl IntoIterator<Item = Option<usize>>) -> Self {
        let mut pmf = Self::new(j_max);
        for o in outcomes {
            pmf.record(o);
        }
        pmf
    }

    #[inline]
    pub fn record(&mut self, outcome: Option<usize>) {
        self.paths += 1;
        match outcome {
            Some(j) if j >= 1 && j <= self.counts.len() => self.counts[j - 1] += 1,
            _ => self.overflow += 1,
        }
    }

    pub fn merge(mut self, other: Self) -> Self {
        debug_assert_eq!(self.counts.len(), other.counts.len());
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.overflow += other.overflow;
        self.paths += other.paths;
        self
    }

    pub fn j_max(&self) -> usize {
        self.counts.len()
    }

    pub fn paths(&self) -> u64 {
        self.paths
    }

    pub fn count(&self, j: usize) -> u64 {
        j.checked_sub(1).and_then(|i| self.counts.get(i)).copied().unwrap_or(0)
    }

    pub fn overflow_count(&self) -> u64 {
        self.overflow
    }

    pub fn prob(&self, j: usize) -> f64 {
        self.ratio(self.count(j))
    }

    pub fn overflow_prob(&self) -> f64 {
        self.ratio(self.overflow)
    }

    /// Binomial standard error `sqrt(p (1 - p) / paths)` of [`Self::prob`].
    pub fn stderr(&self, j: usize) -> f64 {
        let p = self.prob(j);
        if self.paths == 0 {
            0.0
        } else {
            (p * (1.0 - p) / self.paths as f64).sqrt()
        }
    }

    pub fn overflow_flagged(&self) -> bool {
        self.overflow_prob() > OVERFLOW_FLAG
    }

    pub fn within_overflow_budget(&self) -> bool {
        self.overflow_prob() < OVERFLOW_BUDGET
    }

    /// Mean over the paths that landed in `1..=j_max`.
    pub fn observed_mean(&self) -> Option<f64> {
        let hit = self.paths - self.overflow;
        (hit > 0).then(|| self.weighted_sum(0) as f64 / hit as f64)
    }

    /// `sum_{j > j0} j P{T = j}` estimated over all paths.
    pub fn truncated_mean(&self, j0: usize) -> f64 {
        self.ratio(self.weighted_sum(j0))
    }

    fn weighted_sum(&self, j0: usize) -> u128 {
        self.counts
            .iter()
            .enumerate()
            .skip(j0)
            .map(|(i, &c)| (i as u128 + 1) * u128::from(c))
            .sum()
    }

    fn ratio<N: Into<u128>>(&self, n: N) -> f64 {
        if self.paths == 0 {
            0.0
        } else {
            n.into() as f64 / self.paths as f64
        }
    }
}

/// Joint Monte Carlo pmf of `(T*, T** - T*)` on `1..=j_max` squared.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointPmf {
    j_max: usize,
    counts: BTreeMap<(usize, usize), u64>,
    overflow: u64,
    paths: u64,
}

impl JointPmf {
    pub fn new(j_max: usize) -> Self {
        Self {
            j_max,
            counts: BTreeMap::new(),
            overflow: 0,
            paths: 0,
        }
    }

    pub fn record(&mut self, outcome: Option<(usize, usize)>) {
        self.paths += 1;
        match outcome {
            Some((j, m)) if (1..=self.j_max).contains(&j) && (1..=self.j_max).contains(&m) => {
                *self.counts.entry((j, m)).or_insert(0) += 1
            }
            _ => self.overflow += 1,
        }
    }

    pub fn merge(mut self, other: Self) -> Self {
        for (k, c) in other.counts {
            *self.counts.entry(k).or_insert(0) += c;
        }
        self.overflow += other.overflow;
        self.paths += other.paths;
        self
    }

    pub fn j_max(&self) -> usize {
        self.j_max
    }

    pub fn paths(&self) -> u64 {
        self.paths
    }

    pub fn prob(&self, j: usize, m: usize) -> f64 {
        self.counts.get(&(j, m)).map_or(0.0, |&c| c as f64 / self.paths as f64)
    }

    pub fn overflow_prob(&self) -> f64 {
        self.overflow as f64 / self.paths.max(1) as f64
    }

    /// Occupied cells with their probabilities, ordered by `(j, m)`.
    pub fn cells(&self) -> impl Iterator<Item = ((usize, usize), f64)> + '_ {
        let n = self.paths as f64;
        self.counts.iter().map(move |(&k, &c)| (k, c as f64 / n))
    }

    /// Total variation distance to a model pmf on the grid `[1, limit]^2`.
    /// Mass outside the grid (including overflow) is compared as one cell.
    pub fn total_variation(&self, limit: usize, model: impl Fn(usize, usize) -> f64) -> f64 {
        let limit = limit.min(self.j_max);
        let mut model_grid = 0.0;
        for j in 1..=limit {
            for m in 1..=limit {
                model_grid += model(j, m);
            }
        }
        let mut abs_diff = 0.0;
        let mut model_seen = 0.0;
        let mut emp_grid = 0.0;
        for ((j, m), p) in self.cells() {
            if j <= limit && m <= limit {
                let q = model(j, m);
                abs_diff += (p - q).abs();
                model_seen += q;
                emp_grid += p;
            }
        }
        abs_diff += model_grid - model_seen;
        abs_diff += ((1.0 - emp_grid) - (1.0 - model_grid)).abs();
        0.5 * abs_diff
    }
}

/// Which hitting statistic a Monte Carlo run records.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Statistic {
    First,
    Second,
    JointFirstGap,
    Timed { horizon: f64, interarrival: InterArrivalSpec },
}

/// Monte Carlo run description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub process: ProcessSpec,
    pub threshold: ThresholdSpec,
    pub paths: u64,
    pub path_len: usize,
    pub master_seed: u64,
    #[serde(default)]
    pub burn_in: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum McOutput {
    Pmf(EmpiricalPmf),
    Joint(JointPmf),
}

impl McOutput {
    pub fn into_pmf(self) -> Option<EmpiricalPmf> {
        match self {
            McOutput::Pmf(p) => Some(p),
            McOutput::Joint(_) => None,
        }
    }

    pub fn into_joint(self) -> Option<JointPmf> {
        match self {
            McOutput::Joint(p) => Some(p),
            McOutput::Pmf(_) => None,
        }
    }
}

/// Scan a lazily generated path for its first `k` exceedances, stopping at
/// `path_len` values.
fn scan_hits<const K: usize>(gen: &mut PathGenerator<'_>, u: f64, path_len: usize) -> [Option<usize>; K] {
    let mut hits = [None; K];
    let mut found = 0;
    for i in 1..=path_len {
        if gen.next_value() > u {
            hits[found] = Some(i);
            found += 1;
            if found == K {
                break;
            }
        }
    }
    hits
}

/// First `k` exceedance indices of path `path_index` of a Monte Carlo run,
/// generated lazily and scanned no further than `config.path_len` values.
/// Identical to [`hitting_times`] on the materialized path.
pub fn path_hitting_record(config: &McConfig, u: f64, path_index: u64, k: usize) -> HittingRecord {
    let stream = RngStream::new(config.master_seed, path_index);
    let mut gen = config.process.generator(stream, config.burn_in);
    let mut exceedance_indices = Vec::with_capacity(k);
    for i in 1..=config.path_len {
        if exceedance_indices.len() == k {
            break;
        }
        if gen.next_value() > u {
            exceedance_indices.push(i);
        }
    }
    HittingRecord { exceedance_indices }
}

/// Whether `S_j = Y_1 + ... + Y_{j-1}` on the inter-arrival channel of
/// `stream` is at most `horizon`. Draws only as many `Y` as needed.
pub fn arrives_by(stream: RngStream, j: usize, interarrival: &InterArrivalSpec, horizon: f64) -> bool {
    let mut rng = stream.rng(Channel::InterArrival);
    let mut arrival = 0.0;
    for _ in 1..j {
        arrival += interarrival.from_uniform(1.0 - rng.random::<f64>());
        if arrival > horizon {
            return false;
        }
    }
    true
}

/// Per-path outcome of the statistic, for the path at `path_index`.
fn path_outcome(config: &McConfig, u: f64, statistic: &Statistic, path_index: u64) -> Outcome {
    let stream = RngStream::new(config.master_seed, path_index);
    let mut gen = config.process.generator(stream, config.burn_in);
    match statistic {
        Statistic::First => Outcome::Single(scan_hits::<1>(&mut gen, u, config.path_len)[0]),
        Statistic::Second => Outcome::Single(scan_hits::<2>(&mut gen, u, config.path_len)[1]),
        Statistic::JointFirstGap => {
            let [a, b] = scan_hits::<2>(&mut gen, u, config.path_len);
            Outcome::Pair(a.zip(b).map(|(a, b)| (a, b - a)))
        }
        Statistic::Timed { horizon, interarrival } => {
            let first = scan_hits::<1>(&mut gen, u, config.path_len)[0];
            Outcome::Single(first.filter(|&j| arrives_by(stream, j, interarrival, *horizon)))
        }
    }
}

enum Outcome {
    Single(Option<usize>),
    Pair(Option<(usize, usize)>),
}

/// Monte Carlo estimate of the distribution of `statistic`.
///
/// Path `i` always uses stream `(master_seed, i)` and counts are merged by
/// addition, so the result does not depend on the number of worker threads.
pub fn mc_pmf(config: &McConfig, statistic: &Statistic) -> Result<McOutput> {
    if config.paths == 0 {
        return Err(Error::domain("paths must be >= 1"));
    }
    if config.path_len == 0 {
        return Err(Error::domain("path_len must be >= 1"));
    }
    config.process.validate()?;
    if let Statistic::Timed { horizon, interarrival } = statistic {
        interarrival.validate()?;
        if horizon.is_nan() || *horizon < 0.0 {
            return Err(Error::domain(format!("horizon must be nonnegative, got {horizon}")));
        }
    }
    let u = config.threshold.resolve_for(&config.process)?;
    let j_max = config.path_len;
    let n_paths = usize::try_from(config.paths).map_err(|_| Error::domain("paths exceeds the address space"))?;
    let paths = (0..n_paths).into_par_iter().map(|i| i as u64).with_min_len(MIN_PATHS_PER_TASK as usize);
    let out = match statistic {
        Statistic::JointFirstGap => McOutput::Joint(
            paths
                .fold(
                    || JointPmf::new(j_max),
                    |mut acc, i| {
                        if let Outcome::Pair(o) = path_outcome(config, u, statistic, i) {
                            acc.record(o);
                        }
                        acc
                    },
                )
                .reduce(|| JointPmf::new(j_max), JointPmf::merge),
        ),
        _ => McOutput::Pmf(
            paths
                .fold(
                    || EmpiricalPmf::new(j_max),
                    |mut acc, i| {
                        if let Outcome::Single(o) = path_outcome(config, u, statistic, i) {
                            acc.record(o);
                        }
                        acc
                    },
                )
                .reduce(|| EmpiricalPmf::new(j_max), EmpiricalPmf::merge),
        ),
    };
    Ok(out)
}
