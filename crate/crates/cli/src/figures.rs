//! Data behind the four figures, one CSV column per plotted curve.

use std::path::{Path, PathBuf};

use exceedance::ingest::ColumnData;
use exceedance::theory::{self, TheoryParams};
use exceedance::{estimate_theta, heavy_acf, read_table, ExperimentTable};
use serde::Serialize;

use crate::error::{CliError, CliResult};

/// Exceedance probabilities `k / 100`, `k = 1..=99`.
pub fn rho_grid() -> Vec<f64> {
    (1..=99).map(|k| k as f64 / 100.0).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct FigureParams {
    pub which: u8,
    pub theta: f64,
    pub thetas: Vec<f64>,
    pub rho: f64,
    pub j0_max: u64,
    pub inputs: Vec<PathBuf>,
    pub max_lag: usize,
}

pub fn figure_table(params: &FigureParams) -> CliResult<ExperimentTable> {
    match params.which {
        1 => first_hitting_vs_rho(params.theta),
        2 => means_vs_rho(params.theta),
        3 => truncated_mean_vs_j0(&params.thetas, params.rho, params.j0_max),
        4 => degree_acf(&params.inputs, params.max_lag),
        other => Err(CliError::config(format!("no figure {other}; choose 1 to 4"))),
    }
}

/// `P{T* = j}` by the uncorrected product form and by `psi_{j-1}`, for
/// `j = 5` and `j = 20`, against `rho`.
pub fn first_hitting_vs_rho(theta: f64) -> CliResult<ExperimentTable> {
    let rhos = rho_grid();
    let params: Vec<TheoryParams> = rhos.iter().map(|&r| TheoryParams::new(theta, r)).collect::<Result<_, _>>()?;
    let curve = |f: fn(u64, &TheoryParams) -> f64, j: u64| params.iter().map(|p| f(j, p)).collect::<Vec<_>>();
    let mut t = ExperimentTable::new();
    t.push_real_column("rho", rhos.clone())?;
    for j in [5, 20] {
        t.push_real_column(&format!("armax_pmf_j{j}"), curve(theory::armax_pmf_uncorrected, j))?;
        t.push_real_column(&format!("psi_j{j}"), curve(theory::psi_pmf, j))?;
    }
    t.metadata.insert("theta".into(), theta.to_string());
    Ok(t)
}

/// Mean first hitting time (uncorrected and exact) and the truncated-mean
/// model `Lambda rho` at `j0 = 0` and `j0 = 5`, against `rho`.
pub fn means_vs_rho(theta: f64) -> CliResult<ExperimentTable> {
    let rhos = rho_grid();
    let params: Vec<TheoryParams> = rhos.iter().map(|&r| TheoryParams::new(theta, r)).collect::<Result<_, _>>()?;
    let mut t = ExperimentTable::new();
    t.push_real_column("rho", rhos.clone())?;
    t.push_real_column("mean_uncorrected", params.iter().map(theory::armax_mean_uncorrected).collect())?;
    t.push_real_column("mean_exact", params.iter().map(theory::armax_mean_exact).collect())?;
    for j0 in [0, 5] {
        t.push_real_column(
            &format!("lambda_rho_j0_{j0}"),
            params.iter().map(|p| theory::truncated_mean_model(&p.with_j0(j0))).collect(),
        )?;
    }
    t.metadata.insert("theta".into(), theta.to_string());
    Ok(t)
}

/// `Lambda rho` against `j0 = 0..=j0_max`, one column per `theta`.
pub fn truncated_mean_vs_j0(thetas: &[f64], rho: f64, j0_max: u64) -> CliResult<ExperimentTable> {
    if thetas.is_empty() {
        return Err(CliError::config("--thetas is empty"));
    }
    let mut t = ExperimentTable::new();
    t.push_int_column("j0", (0..=j0_max as i64).collect())?;
    for &theta in thetas {
        let p = TheoryParams::new(theta, rho)?;
        t.push_real_column(
            &format!("lambda_rho_theta_{theta}"),
            (0..=j0_max).map(|j0| theory::truncated_mean_model(&p.with_j0(j0))).collect(),
        )?;
    }
    t.metadata.insert("rho".into(), rho.to_string());
    Ok(t)
}

/// Heavy-tail ACF of each ingested degree sequence, with its intervals
/// estimate of the extremal index at `rho = 0.05` in the metadata.
pub fn degree_acf(inputs: &[PathBuf], max_lag: usize) -> CliResult<ExperimentTable> {
    if inputs.is_empty() {
        return Err(CliError::data(
            "figure 4 needs degree sequences: run `exceedance ingest --edges <edge-list>` and pass the resulting CSV with --input",
        ));
    }
    let mut t = ExperimentTable::new();
    t.push_int_column("lag", (0..=max_lag as i64).collect())?;
    for path in inputs {
        let label = label_of(path);
        let series = read_column(path, Some("degree"))?;
        let acf = heavy_acf(&series, max_lag)?;
        t.push_real_column(&format!("acf_{label}"), acf.values)
            .map_err(|_| CliError::config(format!("two inputs share the label {label:?}")))?;
        match estimate_theta(&series, 0.05) {
            Ok(est) => {
                t.metadata.insert(format!("theta_hat_{label}"), est.theta_hat.to_string());
            }
            Err(e) => {
                t.metadata.insert(format!("theta_hat_{label}"), format!("unavailable: {e}"));
            }
        }
        t.metadata.insert(format!("order_{label}"), "file order of first appearance".into());
    }
    Ok(t)
}

pub(crate) fn label_of(path: &Path) -> String {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    stem.strip_suffix("_degrees").map(str::to_string).unwrap_or(stem)
}

/// A numeric column of a CSV table: `preferred` if present, else the first.
pub fn read_column(path: &Path, preferred: Option<&str>) -> CliResult<Vec<f64>> {
    let table = read_table(path)?;
    let column = match preferred.and_then(|name| table.column(name)) {
        Some(c) => c,
        None => table
            .columns()
            .first()
            .map(|c| &c.data)
            .ok_or_else(|| CliError::data(format!("{} has no columns", path.display())))?,
    };
    Ok(match column {
        ColumnData::Real(v) => v.clone(),
        ColumnData::Int(_) => column.to_f64(),
    })
}

/// The named column, which must exist.
pub fn read_named_column(path: &Path, name: &str) -> CliResult<Vec<f64>> {
    let table = read_table(path)?;
    table
        .column(name)
        .map(ColumnData::to_f64)
        .ok_or_else(|| CliError::data(format!("{} has no column {name:?}", path.display())))
}
