//! Data-driven quantities: order-statistic quantiles, the intervals estimator
//! of the extremal index, and the non-centred sample autocorrelation for
//! heavy-tailed data.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hitting::inter_exceedance_gaps;
use crate::processes::check_open_unit;

/// Order-statistic quantile: the `ceil(level * n)`-th smallest value, without
/// interpolation, so the threshold is always an observed value.
pub fn empirical_quantile(data: &[f64], level: f64) -> Result<f64> {
    if data.is_empty() {
        return Err(Error::domain("quantile of empty data"));
    }
    check_open_unit("quantile level", level)?;
    if data.iter().any(|x| x.is_nan()) {
        return Err(Error::domain("data contain NaN"));
    }
    let rank = order_rank(level, data.len());
    let mut buf = data.to_vec();
    let (_, kth, _) = buf.select_nth_unstable_by(rank - 1, f64::total_cmp);
    Ok(*kth)
}

/// `ceil(level * n)`, clamped to `[1, n]`. A product that lands within
/// rounding error of an integer is taken as that integer, so `0.07 * 100`
/// gives rank 7 rather than 8.
fn order_rank(level: f64, n: usize) -> usize {
    let pos = level * n as f64;
    let nearest = pos.round();
    let rank = if (pos - nearest).abs() <= 1e-9 * nearest.max(1.0) {
        nearest
    } else {
        pos.ceil()
    };
    (rank as usize).clamp(1, n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThetaMethod {
    Intervals,
}

/// Which form of the intervals estimator was used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntervalsVariant {
    /// `2 (sum T)^2 / (N sum T^2)`, used when every gap is at most 2.
    Basic,
    /// `2 (sum (T-1))^2 / (N sum (T-1)(T-2))`.
    Shifted,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaEstimate {
    /// Capped at 1.
    pub theta_hat: f64,
    /// The uncapped statistic.
    pub raw: f64,
    pub n_exceedances: usize,
    pub method: ThetaMethod,
    pub used_variant: IntervalsVariant,
    /// Threshold the gaps were taken at, when known.
    pub threshold_u: Option<f64>,
}

/// Intervals estimator of the extremal index from inter-exceedance gaps.
pub fn intervals_estimator(gaps: &[usize]) -> Result<ThetaEstimate> {
    if gaps.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "the intervals estimator needs at least 2 gaps, got {}",
            gaps.len()
        )));
    }
    if gaps.contains(&0) {
        return Err(Error::domain("inter-exceedance gaps must be >= 1"));
    }
    let n = gaps.len() as f64;
    let max = gaps.iter().copied().max().unwrap_or(0);
    let (variant, num, den) = if max <= 2 {
        let sum: f64 = gaps.iter().map(|&t| t as f64).sum();
        let sum_sq: f64 = gaps.iter().map(|&t| (t as f64) * (t as f64)).sum();
        (IntervalsVariant::Basic, 2.0 * sum * sum, n * sum_sq)
    } else {
        let sum: f64 = gaps.iter().map(|&t| (t - 1) as f64).sum();
        let sum_prod: f64 = gaps.iter().map(|&t| ((t - 1) * t.saturating_sub(2)) as f64).sum();
        (IntervalsVariant::Shifted, 2.0 * sum * sum, n * sum_prod)
    };
    if den == 0.0 {
        return Err(Error::DegenerateData("intervals estimator denominator is zero".into()));
    }
    let raw = num / den;
    Ok(ThetaEstimate {
        theta_hat: raw.min(1.0),
        raw,
        n_exceedances: gaps.len() + 1,
        method: ThetaMethod::Intervals,
        used_variant: variant,
        threshold_u: None,
    })
}

/// Threshold `data` at its `(1 - rho)` order-statistic quantile and apply the
/// intervals estimator to the resulting gaps.
pub fn estimate_theta(data: &[f64], rho: f64) -> Result<ThetaEstimate> {
    check_open_unit("rho", rho)?;
    let u = empirical_quantile(data, 1.0 - rho)?;
    let gaps = inter_exceedance_gaps(data, u);
    let mut est = intervals_estimator(&gaps)?;
    est.threshold_u = Some(u);
    Ok(est)
}

/// Non-centred sample autocorrelation at lags `0..=max_lag`.
#[derive(Debug, Clone, PartialEq)]
pub struct AcfResult {
    pub lags: Vec<usize>,
    pub values: Vec<f64>,
}

/// `acf(j) = sum_{t=1}^{n-j} X_t X_{t+j} / sum_{t=1}^{n} X_t^2`, with no mean
/// subtraction. Each lag is summed in index order, so the result does not
/// depend on how lags are spread across threads.
pub fn heavy_acf(data: &[f64], max_lag: usize) -> Result<AcfResult> {
    if max_lag >= data.len() {
        return Err(Error::domain(format!(
            "max_lag must be below the series length {}, got {max_lag}",
            data.len()
        )));
    }
    if data.iter().any(|x| !x.is_finite()) {
        return Err(Error::domain("data must be finite"));
    }
    let denom: f64 = data.iter().map(|x| x * x).sum();
    if denom == 0.0 {
        return Err(Error::DegenerateData("autocorrelation of an all-zero series".into()));
    }
    let values = (0..=max_lag)
        .into_par_iter()
        .map(|lag| {
            if lag == 0 {
                1.0
            } else {
                data.iter().zip(&data[lag..]).map(|(a, b)| a * b).sum::<f64>() / denom
            }
        })
        .collect();
    Ok(AcfResult {
        lags: (0..=max_lag).collect(),
        values,
    })
}
