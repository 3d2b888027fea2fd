//! One function per subcommand. Each returns the table it produced, the
//! resolved configuration, and a short human-readable summary.

use std::path::{Path, PathBuf};

use exceedance::hitting::{arrives_by, path_hitting_record};
use exceedance::processes::{simulate, ProcessSpec};
use exceedance::theory;
use exceedance::{
    estimate_theta, heavy_acf, mc_pmf, read_edge_list, EmpiricalPmf, ExperimentTable, RngStream, Statistic,
    ThetaEstimate,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::args::{AcfArgs, EstimateArgs, FigureArgs, IngestArgs, RunArgs};
use crate::config::{ExperimentConfig, StatisticKind};
use crate::error::{CliError, CliResult};
use crate::figures::{self, FigureParams};

/// A finished command, ready to be written.
pub struct Artifact {
    pub command: &'static str,
    pub table: ExperimentTable,
    /// Explicit output path, if one was requested.
    pub output: Option<PathBuf>,
    pub default_name: String,
    pub config: serde_json::Value,
    pub summary: String,
}

fn to_json(value: &impl Serialize) -> serde_json::Value {
    serde_json::to_value(value).expect("configs serialize to JSON")
}

fn usize_paths(paths: u64) -> CliResult<usize> {
    usize::try_from(paths).map_err(|_| CliError::config("paths exceeds the address space"))
}

/// Per-path first and second hitting times and their gap; 0 marks a missing
/// value. The timed statistic adds the first hitting time observed by the
/// horizon.
pub fn simulate_cmd(args: &RunArgs) -> CliResult<Artifact> {
    let config = args.resolve()?;
    let table = simulate_table(&config)?;
    let summary = format!(
        "{} paths of {} values, {}",
        config.paths,
        config.path_len,
        config.process.label()
    );
    Ok(Artifact {
        command: "simulate",
        table,
        output: config.output.clone(),
        default_name: "simulate.csv".into(),
        config: to_json(&config),
        summary,
    })
}

pub fn simulate_table(config: &ExperimentConfig) -> CliResult<ExperimentTable> {
    let u = config.threshold_u()?;
    let mc = config.mc_config();
    let statistic = config.statistic()?;
    let rows: Vec<[i64; 4]> = (0..usize_paths(config.paths)?)
        .into_par_iter()
        .map(|i| {
            let i = i as u64;
            let rec = path_hitting_record(&mc, u, i, 2);
            let first = rec.first();
            let timed = match &statistic {
                Statistic::Timed { horizon, interarrival } => first
                    .filter(|&j| arrives_by(RngStream::new(mc.master_seed, i), j, interarrival, *horizon))
                    .map_or(0, |j| j as i64),
                _ => 0,
            };
            let as_int = |v: Option<usize>| v.map_or(0, |j| j as i64);
            let gap = rec.inter_gaps().first().copied();
            [as_int(first), as_int(rec.second()), as_int(gap), timed]
        })
        .collect();
    let mut t = ExperimentTable::new();
    t.push_int_column("path", (0..rows.len() as i64).collect())?;
    for (k, name) in ["first", "second", "gap"].iter().enumerate() {
        t.push_int_column(name, rows.iter().map(|r| r[k]).collect())?;
    }
    if config.statistic == StatisticKind::Timed {
        t.push_int_column("timed_first", rows.iter().map(|r| r[3]).collect())?;
    }
    t.metadata.insert("process".into(), config.process.label());
    t.metadata.insert("threshold_u".into(), u.to_string());
    t.metadata.insert("seed".into(), config.master_seed.to_string());
    t.metadata.insert("missing".into(), "0 means no such hit within path_len values".into());
    Ok(t)
}

/// Monte Carlo pmf of `T*` (or of the timed `T*_T`) with standard errors,
/// the closed-form models, and z-scores against each model.
pub fn compare_cmd(args: &RunArgs) -> CliResult<Artifact> {
    let config = args.resolve()?;
    let (table, pmf) = compare_table(&config)?;
    let mut summary = format!(
        "{} paths, overflow mass {:.3e}",
        pmf.paths(),
        pmf.overflow_prob()
    );
    if pmf.overflow_flagged() {
        summary.push_str(" (FLAGGED: increase --path-len)");
    }
    Ok(Artifact {
        command: "compare",
        table,
        output: config.output.clone(),
        default_name: "compare.csv".into(),
        config: to_json(&config),
        summary,
    })
}

fn model_z(empirical: f64, model: f64, paths: u64) -> f64 {
    let se = (model * (1.0 - model) / paths as f64).sqrt();
    if se > 0.0 {
        (empirical - model) / se
    } else if empirical == model {
        0.0
    } else {
        f64::MAX.copysign(empirical - model)
    }
}

pub fn compare_table(config: &ExperimentConfig) -> CliResult<(ExperimentTable, EmpiricalPmf)> {
    let statistic = config.statistic()?;
    if !matches!(statistic, Statistic::First | Statistic::Timed { .. }) {
        return Err(CliError::config("compare supports --statistic first or timed"));
    }
    let p = config.theory_params()?;
    let pmf = mc_pmf(&config.mc_config(), &statistic)?
        .into_pmf()
        .expect("single statistics give a pmf");
    let default_j_max = (5.0 / (p.theta * p.rho)).ceil() as usize;
    let mut j_max = config.j_max.unwrap_or(default_j_max).min(config.path_len).max(1);

    let mut models: Vec<(&str, Box<dyn Fn(u64) -> CliResult<f64>>)> = Vec::new();
    if let Statistic::Timed { .. } = statistic {
        // P{T*_T = j} against psi_{j-1} (1 - (j - 1) T^(-alpha)).
        if p.horizon.is_finite() {
            let last_defined = p.horizon.powf(p.alpha_tail).floor() as usize + 1;
            j_max = j_max.min(last_defined);
        }
        models.push(("timed_model", Box::new(move |j| Ok(theory::timed_pmf_model(j - 1, &p)?))));
    } else {
        models.push(("psi", Box::new(move |j| Ok(theory::psi_pmf(j, &p)))));
        models.push(("limit_geometric", Box::new(move |j| Ok(theory::limit_geometric_pmf(j, &p)))));
        match &config.process {
            ProcessSpec::Ar1Uniform { r } => {
                let (u, r) = (config.threshold_u()?, *r);
                let n = p.n.unwrap_or_else(|| (1.0 / p.rho).round() as u64);
                j_max = j_max.min(theory::ar1_m_minus_one(u, r)? as usize);
                if j_max == 0 {
                    return Err(CliError::config("the AR(1) pmf needs m - 1 >= 1; take u closer to one"));
                }
                models.push(("exact", Box::new(move |j| Ok(theory::ar1_pmf(j, u, r, n)?))));
            }
            _ => models.push(("exact", Box::new(move |j| Ok(theory::armax_pmf_exact(j, &p))))),
        }
    }

    let js: Vec<u64> = (1..=j_max as u64).collect();
    let mut t = ExperimentTable::new();
    t.push_int_column("j", js.iter().map(|&j| j as i64).collect())?;
    t.push_real_column("empirical", js.iter().map(|&j| pmf.prob(j as usize)).collect())?;
    t.push_real_column("stderr", js.iter().map(|&j| pmf.stderr(j as usize)).collect())?;
    let mut z_columns = Vec::new();
    for (name, model) in &models {
        let values: Vec<f64> = js.iter().map(|&j| model(j)).collect::<CliResult<_>>()?;
        let z = js
            .iter()
            .zip(&values)
            .map(|(&j, &m)| model_z(pmf.prob(j as usize), m, pmf.paths()))
            .collect();
        t.push_real_column(name, values)?;
        z_columns.push((format!("z_{name}"), z));
    }
    for (name, z) in z_columns {
        t.push_real_column(&name, z)?;
    }
    t.metadata.insert("process".into(), config.process.label());
    t.metadata.insert("paths".into(), pmf.paths().to_string());
    t.metadata.insert("overflow_prob".into(), pmf.overflow_prob().to_string());
    t.metadata.insert("overflow_flagged".into(), pmf.overflow_flagged().to_string());
    t.metadata.insert("z_scores".into(), "(empirical - model) / sqrt(model (1 - model) / paths)".into());
    Ok((t, pmf))
}

#[derive(Serialize)]
struct EstimateConfig<'a> {
    input: Option<&'a Path>,
    column: Option<&'a str>,
    process: Option<ProcessSpec>,
    n: Option<usize>,
    seed: Option<u64>,
    rho: f64,
}

pub fn estimate_theta_cmd(args: &EstimateArgs) -> CliResult<Artifact> {
    let process = args.process.resolve()?;
    let (data, config) = match (&args.input, process) {
        (Some(path), None) => (
            series_of(path, args.column.as_deref())?,
            EstimateConfig {
                input: Some(path),
                column: args.column.as_deref(),
                process: None,
                n: None,
                seed: None,
                rho: args.rho,
            },
        ),
        (None, Some(spec)) => {
            if args.n == 0 {
                return Err(CliError::config("--n must be >= 1"));
            }
            let values = simulate(&spec, args.n, RngStream::new(args.seed, 0), 0)?.values;
            (
                values,
                EstimateConfig {
                    input: None,
                    column: None,
                    process: Some(spec),
                    n: Some(args.n),
                    seed: Some(args.seed),
                    rho: args.rho,
                },
            )
        }
        _ => return Err(CliError::config("give either --input or --process")),
    };
    let est = estimate_theta(&data, args.rho)?;
    let table = estimate_table(&est);
    let summary = format!(
        "theta_hat = {} ({} exceedances, {:?} variant)",
        est.theta_hat, est.n_exceedances, est.used_variant
    );
    Ok(Artifact {
        command: "estimate-theta",
        table,
        output: args.output.clone(),
        default_name: "estimate_theta.csv".into(),
        config: to_json(&config),
        summary,
    })
}

fn estimate_table(est: &ThetaEstimate) -> ExperimentTable {
    let mut t = ExperimentTable::new();
    t.push_real_column("theta_hat", vec![est.theta_hat])
        .and_then(|t| t.push_real_column("raw", vec![est.raw]))
        .and_then(|t| t.push_int_column("n_exceedances", vec![est.n_exceedances as i64]))
        .and_then(|t| t.push_real_column("threshold_u", vec![est.threshold_u.unwrap_or(0.0)]))
        .expect("single-row columns");
    t.metadata.insert("method".into(), format!("{:?}", est.method).to_lowercase());
    t.metadata.insert("variant".into(), format!("{:?}", est.used_variant).to_lowercase());
    t
}

/// The named column, or `degree` (else the first column) when unnamed.
fn series_of(path: &Path, column: Option<&str>) -> CliResult<Vec<f64>> {
    match column {
        Some(name) => figures::read_named_column(path, name),
        None => figures::read_column(path, Some("degree")),
    }
}

#[derive(Serialize)]
struct AcfConfig<'a> {
    input: &'a Path,
    column: Option<&'a str>,
    max_lag: usize,
}

pub fn acf_cmd(args: &AcfArgs) -> CliResult<Artifact> {
    let data = series_of(&args.input, args.column.as_deref())?;
    let acf = heavy_acf(&data, args.max_lag)?;
    let mut t = ExperimentTable::new();
    t.push_int_column("lag", acf.lags.iter().map(|&l| l as i64).collect())?;
    t.push_real_column("acf", acf.values)?;
    Ok(Artifact {
        command: "acf",
        table: t,
        output: args.output.clone(),
        default_name: "acf.csv".into(),
        config: to_json(&AcfConfig {
            input: &args.input,
            column: args.column.as_deref(),
            max_lag: args.max_lag,
        }),
        summary: format!("{} lags of {} values", args.max_lag, data.len()),
    })
}

#[derive(Serialize)]
struct IngestConfig<'a> {
    edges: &'a Path,
    label: &'a str,
}

pub fn ingest_cmd(args: &IngestArgs) -> CliResult<Artifact> {
    let label = args.label.clone().unwrap_or_else(|| figures::label_of(&args.edges));
    let mut seq = read_edge_list(&args.edges)?;
    seq.source_label.clone_from(&label);
    let degree_sum: u64 = seq.degrees.iter().sum();
    Ok(Artifact {
        command: "ingest",
        table: seq.to_table(),
        output: args.output.clone(),
        default_name: format!("{label}_degrees.csv"),
        config: to_json(&IngestConfig {
            edges: &args.edges,
            label: &label,
        }),
        summary: format!("{} nodes, {} undirected edges", seq.node_count(), degree_sum / 2),
    })
}

pub fn figure_cmd(args: &FigureArgs) -> CliResult<Artifact> {
    let params = FigureParams {
        which: args.which,
        theta: args.theta,
        thetas: args.thetas.clone(),
        rho: args.rho,
        j0_max: args.j0_max,
        inputs: args.input.clone(),
        max_lag: args.max_lag,
    };
    let table = figures::figure_table(&params)?;
    Ok(Artifact {
        command: "reproduce-figure",
        summary: format!("figure {}: {} rows", args.which, table.row_count()),
        table,
        output: args.output.clone(),
        default_name: format!("figure{}.csv", args.which),
        config: to_json(&params),
    })
}
