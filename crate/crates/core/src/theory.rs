//! Closed-form hitting-time models.
//!
//! Powers of `1 - rho` are evaluated as `exp(k * ln_1p(-rho))` and
//! `1 - (1 - rho)^theta` as `-expm1(theta * ln_1p(-rho))`, which keeps every
//! evaluator accurate for `rho` down to `1e-12` and below.
//!
//! Notation: `s = (1 - rho)^theta`, `eta = 1 - s`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::processes::check_open_unit;

/// Parameters shared by the closed-form models.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TheoryParams {
    /// Extremal index, in `(0, 1]`.
    pub theta: f64,
    /// Exceedance probability of the threshold, in `(0, 1)`.
    pub rho: f64,
    /// Sample-size scale, with `rho ~ tau / n`.
    #[serde(default)]
    pub n: Option<u64>,
    /// Truncation index of the truncated mean.
    #[serde(default)]
    pub j0: u64,
    /// Tail index of the inter-arrival times.
    #[serde(default = "default_alpha_tail")]
    pub alpha_tail: f64,
    /// Observation horizon `T` of the timed hitting time.
    #[serde(default = "default_horizon")]
    pub horizon: f64,
    /// Defaults to `rho * n` when `n` is set.
    #[serde(default)]
    pub tau: Option<f64>,
}

fn default_alpha_tail() -> f64 {
    1.0
}

fn default_horizon() -> f64 {
    f64::INFINITY
}

impl TheoryParams {
    pub fn new(theta: f64, rho: f64) -> Result<Self> {
        let p = Self {
            theta,
            rho,
            n: None,
            j0: 0,
            alpha_tail: default_alpha_tail(),
            horizon: default_horizon(),
            tau: None,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_j0(mut self, j0: u64) -> Self {
        self.j0 = j0;
        self
    }

    pub fn with_n(mut self, n: u64) -> Self {
        self.n = Some(n);
        self
    }

    pub fn with_horizon(mut self, alpha_tail: f64, horizon: f64) -> Result<Self> {
        self.alpha_tail = alpha_tail;
        self.horizon = horizon;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.theta > 0.0 && self.theta <= 1.0) {
            return Err(Error::domain(format!("theta must lie in (0, 1], got {}", self.theta)));
        }
        check_open_unit("rho", self.rho)?;
        if !(self.alpha_tail > 0.0 && self.alpha_tail.is_finite()) {
            return Err(Error::domain(format!("alpha_tail must be positive, got {}", self.alpha_tail)));
        }
        if self.horizon.is_nan() || self.horizon <= 0.0 {
            return Err(Error::domain(format!("horizon must be positive, got {}", self.horizon)));
        }
        if let Some(tau) = self.tau {
            if !(tau > 0.0 && tau.is_finite()) {
                return Err(Error::domain(format!("tau must be positive, got {tau}")));
            }
        }
        Ok(())
    }

    /// `tau`, or `rho * n` when only `n` is given.
    pub fn tau(&self) -> Option<f64> {
        self.tau.or_else(|| self.n.map(|n| self.rho * n as f64))
    }

    fn ln_q(&self) -> f64 {
        (-self.rho).ln_1p()
    }

    /// `(1 - rho)^(theta * k)`.
    fn s_pow(&self, k: f64) -> f64 {
        (self.theta * k * self.ln_q()).exp()
    }

    /// `(1 - rho)^e`.
    fn q_pow(&self, e: f64) -> f64 {
        (e * self.ln_q()).exp()
    }

    /// `1 - (1 - rho)^theta`.
    fn eta(&self) -> f64 {
        -(self.theta * self.ln_q()).exp_m1()
    }
}

/// The geometric reparameterization `(1 - rho)^theta = 1 - eta` and the
/// normalizing constant `c = eta / (theta^2 (1 - (1 - eta)^(1/theta)))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReparamQuantities {
    pub eta: f64,
    pub c: f64,
}

pub fn reparam(p: &TheoryParams) -> ReparamQuantities {
    let eta = p.eta();
    // (1 - eta)^(1/theta) = 1 - rho, so the denominator is theta^2 rho.
    let c = eta / (p.theta * p.theta * p.rho);
    ReparamQuantities { eta, c }
}

/// Limit model of the inter-cluster size, `theta^2 rho (1 - rho)^((j-1) theta)`.
pub fn inter_cluster_pmf(j: u64, p: &TheoryParams) -> f64 {
    debug_assert!(j >= 1);
    p.theta * p.theta * p.rho * p.s_pow((j - 1) as f64)
}

/// `psi_{j-1} = theta^2 rho^2 (1 - rho)^(theta (j-1)) / (1 - (1 - rho)^theta)`,
/// the asymptotic model of `P{T* = j}`. Not normalized for `theta < 1`.
pub fn psi_pmf(j: u64, p: &TheoryParams) -> f64 {
    debug_assert!(j >= 1);
    psi_scale(p) * p.s_pow((j - 1) as f64)
}

fn psi_scale(p: &TheoryParams) -> f64 {
    let tr = p.theta * p.rho;
    tr * tr / p.eta()
}

/// `sum_{j >= 1} psi_{j-1} = theta^2 rho^2 / (1 - (1 - rho)^theta)^2`.
pub fn psi_total_mass(p: &TheoryParams) -> f64 {
    let r = p.theta * p.rho / p.eta();
    r * r
}

/// Geometric law with success probability `theta rho`.
pub fn limit_geometric_pmf(j: u64, p: &TheoryParams) -> f64 {
    debug_assert!(j >= 1);
    let tr = p.theta * p.rho;
    tr * ((j - 1) as f64 * (-tr).ln_1p()).exp()
}

/// `P{chi > j} = (1 - theta rho)^j` for the limit geometric law.
pub fn limit_geometric_tail(j: u64, p: &TheoryParams) -> f64 {
    (j as f64 * (-(p.theta * p.rho)).ln_1p()).exp()
}

/// `Lambda_n = theta^2 rho / eta^3 * (1 - rho)^(theta j0) * (j0 eta + 1)`.
pub fn lambda_n(p: &TheoryParams) -> f64 {
    let eta = p.eta();
    let j0 = p.j0 as f64;
    p.theta * p.theta * p.rho / (eta * eta * eta) * p.s_pow(j0) * (j0 * eta + 1.0)
}

/// Model of the truncated mean `sum_{j > j0} j P{T* = j}`, i.e. `Lambda_n rho`.
pub fn truncated_mean_model(p: &TheoryParams) -> f64 {
    lambda_n(p) * p.rho
}

/// Model of `P{T*_T = j + 1}`: `psi_j (1 - j T^(-alpha))`.
pub fn timed_pmf_model(j: u64, p: &TheoryParams) -> Result<f64> {
    let bound = (p.j0 as f64).powf(1.0 / p.alpha_tail);
    if !(p.horizon > bound) {
        return Err(Error::domain(format!(
            "the timed model needs T>j₀^{{1/α}}: T = {}, j0 = {}, alpha = {}",
            p.horizon, p.j0, p.alpha_tail
        )));
    }
    let factor = 1.0 - j as f64 / p.horizon.powf(p.alpha_tail);
    if factor < 0.0 {
        return Err(Error::domain(format!(
            "the timed model needs 1 - j T^(-alpha) >= 0, got {factor} at j = {j}"
        )));
    }
    Ok(psi_pmf(j + 1, p) * factor)
}

/// Product of two geometric(`theta rho`) masses, the model of
/// `P{T* = j, T** = j + m}`.
pub fn second_hitting_joint_model(j: u64, m: u64, p: &TheoryParams) -> f64 {
    limit_geometric_pmf(j, p) * limit_geometric_pmf(m, p)
}

/// `(1 - (1 - rho)^theta) (1 - rho)^(theta (j - 2) + 1)` evaluated for every
/// `j`, including `j = 1` where it does not equal `P{X_1 > u} = rho`.
pub fn armax_pmf_uncorrected(j: u64, p: &TheoryParams) -> f64 {
    p.eta() * p.q_pow(p.theta * (j as f64 - 2.0) + 1.0)
}

/// Normalized first-hitting pmf of the ARMAX and moving-maxima processes:
/// `rho` at `j = 1`, the product form above for `j >= 2`.
pub fn armax_pmf_exact(j: u64, p: &TheoryParams) -> f64 {
    debug_assert!(j >= 1);
    if j == 1 {
        p.rho
    } else {
        armax_pmf_uncorrected(j, p)
    }
}

/// `P{T* > j}` under [`armax_pmf_exact`]: `(1 - rho) s^(j - 1)` for `j >= 1`.
pub fn armax_exact_tail(j: u64, p: &TheoryParams) -> f64 {
    if j == 0 {
        1.0
    } else {
        (1.0 - p.rho) * p.s_pow((j - 1) as f64)
    }
}

/// `(1 - rho)^(1 - theta) / (1 - (1 - rho)^theta)`.
pub fn armax_mean_uncorrected(p: &TheoryParams) -> f64 {
    p.q_pow(1.0 - p.theta) / p.eta()
}

/// `(1 - rho)^(1 - theta) (1 + (1 - rho)^theta) / (1 - (1 - rho)^theta)^2`.
pub fn armax_second_moment_uncorrected(p: &TheoryParams) -> f64 {
    let eta = p.eta();
    p.q_pow(1.0 - p.theta) * (2.0 - eta) / (eta * eta)
}

/// Mean of [`armax_pmf_exact`]: `rho + (1 - rho)(2 - s)/(1 - s)`.
pub fn armax_mean_exact(p: &TheoryParams) -> f64 {
    let eta = p.eta();
    p.rho + (1.0 - p.rho) * (1.0 + eta) / eta
}

/// Truncation index `j0 = floor(ln n / (2 ln r))` of the AR(1) pmf.
pub fn ar1_j0(n: u64, r: u32) -> Result<u64> {
    check_ar1_r(r)?;
    if n < 1 {
        return Err(Error::domain("n must be >= 1"));
    }
    Ok(((n as f64).ln() / (2.0 * f64::from(r).ln())).floor() as u64)
}

/// `m - 1`, the integer with `x - 1 < m - 1 <= x` for `x = -ln(1 - u) / ln r`.
pub fn ar1_m_minus_one(u: f64, r: u32) -> Result<u64> {
    check_ar1_r(r)?;
    check_open_unit("u", u)?;
    Ok((-(1.0 - u).ln() / f64::from(r).ln()).floor() as u64)
}

fn check_ar1_r(r: u32) -> Result<()> {
    if r < 2 {
        Err(Error::domain(format!("AR(1) lattice size r must be >= 2, got {r}")))
    } else {
        Ok(())
    }
}

fn check_ar1_range(j: u64, u: f64, r: u32) -> Result<()> {
    let m1 = ar1_m_minus_one(u, r)?;
    if j < 1 || j > m1 {
        return Err(Error::domain(format!(
            "j = {j} outside [1, m-1] = [1, {m1}], where -ln(1-u)/ln(r) - 1 < m-1 <= -ln(1-u)/ln(r)"
        )));
    }
    Ok(())
}

/// `P{M_j <= u} = 1 - ((j+1) r - j)/r (1 - u)`, written as `u - j theta (1 - u)`
/// with `theta = 1 - 1/r`. Valid for `(r - 1)(1 - u) n < n`, i.e. `u` close to one.
pub fn ar1_max_cdf(j: u64, u: f64, r: u32) -> Result<f64> {
    check_ar1_range(j, u, r)?;
    let theta = 1.0 - 1.0 / f64::from(r);
    Ok(u - j as f64 * theta * (1.0 - u))
}

/// Piecewise AR(1) first-hitting pmf:
///
/// ```text
/// 1 - theta                                  j = 1
/// (1 - theta)^j      (u - j theta (1 - u))   2 <= j <= j0
/// (1 - theta)^(j0+2) (u - j theta (1 - u))   j0 < j <= m - 1
/// ```
pub fn ar1_pmf(j: u64, u: f64, r: u32, n: u64) -> Result<f64> {
    check_ar1_range(j, u, r)?;
    let j0 = ar1_j0(n, r)?;
    let base = 1.0 / f64::from(r);
    if j == 1 {
        return Ok(base);
    }
    let bracket = ar1_max_cdf(j, u, r)?;
    if bracket <= 0.0 {
        return Err(Error::domain(format!(
            "u - j theta (1 - u) = {bracket} is not positive at j = {j}; take u closer to one"
        )));
    }
    let exponent = if j <= j0 { j } else { j0 + 2 };
    Ok(base.powi(exponent as i32) * bracket)
}

/// The same pmf with the index shifted by one, `P{T* = j} <- ar1_pmf(j - 1)`,
/// matching the `P{T* = j + 1}` alignment of the product form. Defined for
/// `2 <= j <= m`.
pub fn ar1_pmf_shifted(j: u64, u: f64, r: u32, n: u64) -> Result<f64> {
    if j < 2 {
        return Err(Error::domain("the shifted AR(1) alignment starts at j = 2"));
    }
    ar1_pmf(j - 1, u, r, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(theta: f64, rho: f64) -> TheoryParams {
        TheoryParams::new(theta, rho).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn parameter_validation() {
        assert!(TheoryParams::new(0.0, 0.1).is_err());
        assert!(TheoryParams::new(1.1, 0.1).is_err());
        assert!(TheoryParams::new(0.5, 0.0).is_err());
        assert!(TheoryParams::new(0.5, 1.0).is_err());
        assert!(params(0.5, 0.1).with_horizon(0.0, 10.0).is_err());
        assert!(params(0.5, 0.1).with_horizon(1.0, -1.0).is_err());
        assert_eq!(params(0.5, 0.01).with_n(1000).tau(), Some(10.0));
        assert_eq!(params(0.5, 0.01).tau(), None);
    }

    #[test]
    fn reparam_values() {
        let r = reparam(&params(1.0, 0.3));
        assert!((r.eta - 0.3).abs() < 1e-15);
        assert!((r.c - 1.0).abs() < 1e-14);
        // 50-digit references.
        let r = reparam(&params(0.1, 0.05));
        assert!(rel(r.eta, 5.116_196_891_823_701_1e-3) < 1e-13);
        assert!(rel(r.c, 10.232_393_783_647_402) < 1e-13);
        let r = reparam(&params(0.3, 1e-9));
        assert!(rel(r.eta / (0.3 * 1e-9), 1.0) < 1e-8);
    }

    #[test]
    fn inter_cluster_values() {
        assert!((inter_cluster_pmf(1, &params(1.0, 0.2)) - 0.2).abs() < 1e-15);
        assert!(rel(inter_cluster_pmf(20, &params(0.1, 0.05)), 4.535_705_562_702_124e-4) < 1e-13);
        let p = params(0.37, 0.12);
        let s = 0.88f64.powf(0.37);
        for j in 1..50 {
            assert!(rel(inter_cluster_pmf(j + 1, &p) / inter_cluster_pmf(j, &p), s) < 1e-13);
        }
    }

    #[test]
    fn psi_values() {
        let p = params(1.0, 0.3);
        for j in 1..40u64 {
            assert!(rel(psi_pmf(j, &p), 0.3 * 0.7f64.powi(j as i32 - 1)) < 1e-13);
        }
        assert!(rel(psi_pmf(5, &params(0.1, 0.05)), 4.787_206_937_988_915e-3) < 1e-13);
        // Not normalized below theta = 1.
        let p = params(0.5, 0.2);
        let eta = 1.0 - 0.8f64.sqrt();
        assert!(rel(psi_total_mass(&p), (0.1 / eta).powi(2)) < 1e-13);
        assert!(psi_total_mass(&p) < 1.0);
        let partial: f64 = (1..=2000).map(|j| psi_pmf(j, &p)).sum();
        assert!(rel(partial, psi_total_mass(&p)) < 1e-12);
    }

    #[test]
    fn psi_over_inter_cluster_is_constant() {
        let p = params(0.23, 0.07);
        let expected = 0.07 / (1.0 - 0.93f64.powf(0.23));
        for j in 1..100 {
            assert!(rel(psi_pmf(j, &p) / inter_cluster_pmf(j, &p), expected) < 1e-12);
        }
    }

    #[test]
    fn limit_geometric_values() {
        let p = params(0.1, 0.05);
        for j in [1u64, 2, 10, 300] {
            assert!(rel(limit_geometric_pmf(j, &p), 0.005 * 0.995f64.powi(j as i32 - 1)) < 1e-12);
        }
        // psi approaches the limit geometric law at fixed j rho as rho -> 0.
        let gap = |rho: f64| {
            let p = params(0.4, rho);
            let j = (0.5 / rho) as u64;
            (psi_pmf(j, &p) / limit_geometric_pmf(j, &p) - 1.0).abs()
        };
        assert!(gap(1e-4) < gap(1e-2));
        assert!(gap(1e-4) < 1e-3);
    }

    #[test]
    fn lambda_values() {
        let p = params(1.0, 0.04);
        assert!(rel(truncated_mean_model(&p), 25.0) < 1e-12);
        // 50-digit references at rho = 0.05.
        let cases = [
            (0.22, 0, 85.640_628_473_945_94),
            (0.22, 5, 85.483_658_795_701_99),
            (0.22, 20, 83.674_819_842_622_38),
            (0.15, 0, 124.932_648_045_373_47),
            (0.15, 100, 102.242_312_660_278_29),
        ];
        for (theta, j0, want) in cases {
            let p = params(theta, 0.05).with_j0(j0);
            assert!(rel(truncated_mean_model(&p), want) < 1e-12, "{theta} {j0}");
        }
    }

    #[test]
    fn lambda_matches_direct_series() {
        let p = params(0.3, 0.02).with_j0(7);
        let series: f64 = (8..200_000u64).map(|j| j as f64 * psi_pmf(j, &p)).sum();
        assert!(rel(truncated_mean_model(&p), series) < 1e-10);
    }

    #[test]
    fn lambda_rho_times_theta_rho_tends_to_one() {
        let f = |rho: f64| {
            let p = params(0.35, rho).with_j0(3);
            truncated_mean_model(&p) * 0.35 * rho
        };
        assert!((f(1e-6) - 1.0).abs() < 1e-5);
        assert!((f(1e-6) - 1.0).abs() < (f(1e-3) - 1.0).abs());
    }

    #[test]
    fn timed_model() {
        let p = params(0.5, 0.1);
        let inf = p.with_horizon(1.0, f64::INFINITY).unwrap();
        assert_eq!(timed_pmf_model(10, &inf).unwrap(), psi_pmf(11, &p));
        let t = p.with_horizon(1.0, 100.0).unwrap();
        assert!(rel(timed_pmf_model(10, &t).unwrap(), 0.9 * psi_pmf(11, &p)) < 1e-14);
        assert_eq!(timed_pmf_model(100, &t).unwrap(), 0.0);
        assert!(timed_pmf_model(101, &t).is_err());
        let t2 = p.with_horizon(2.0, 10.0).unwrap();
        assert_eq!(timed_pmf_model(100, &t2).unwrap(), 0.0);
        // T must exceed j0^(1/alpha).
        let bad = p.with_j0(400).with_horizon(2.0, 20.0).unwrap();
        let err = timed_pmf_model(1, &bad).unwrap_err().to_string();
        assert!(err.contains("T>j₀^{1/α}"), "{err}");
    }

    #[test]
    fn joint_model() {
        let p = params(0.5, 0.1);
        assert!((second_hitting_joint_model(1, 1, &p) - 2.5e-3).abs() < 1e-16);
        assert_eq!(second_hitting_joint_model(3, 8, &p), second_hitting_joint_model(8, 3, &p));
        let q = params(1.0, 0.2);
        assert!(rel(second_hitting_joint_model(2, 3, &q), 0.2 * 0.8 * 0.2 * 0.64) < 1e-14);
    }

    #[test]
    fn armax_pmfs() {
        let p = params(1.0, 0.3);
        for j in 1..30u64 {
            let geo = 0.3 * 0.7f64.powi(j as i32 - 1);
            assert!(rel(armax_pmf_uncorrected(j, &p), geo) < 1e-13);
            assert!(rel(armax_pmf_exact(j, &p), geo) < 1e-13);
        }
        let p = params(0.5, 0.5);
        assert!(rel(armax_pmf_exact(2, &p), 0.146_446_609_406_726_24) < 1e-14);
        assert!(rel(armax_pmf_uncorrected(1, &p), 0.207_106_781_186_547_52) < 1e-14);
        assert_eq!(armax_pmf_exact(1, &p), 0.5);
    }

    #[test]
    fn armax_exact_normalization_by_summation() {
        for (theta, rho) in [(0.5, 0.5), (0.1, 0.05), (0.9, 0.001), (0.02, 0.3)] {
            let p = params(theta, rho);
            let n = 200_000u64;
            let partial: f64 = (1..=n).map(|j| armax_pmf_exact(j, &p)).sum();
            assert!((partial + armax_exact_tail(n, &p) - 1.0).abs() < 1e-9, "{theta} {rho}");
            // The unnormalized variant has total mass (1 - rho)^(1 - theta).
            let uncorrected: f64 = (1..=n).map(|j| armax_pmf_uncorrected(j, &p)).sum();
            let tail = armax_exact_tail(n, &p);
            assert!((uncorrected + tail - (1.0 - rho).powf(1.0 - theta)).abs() < 1e-9);
        }
    }

    #[test]
    fn armax_moments() {
        let p = params(1.0, 0.25);
        assert!(rel(armax_mean_uncorrected(&p), 4.0) < 1e-13);
        assert!(rel(armax_mean_exact(&p), 4.0) < 1e-13);
        assert!(rel(armax_second_moment_uncorrected(&p), 1.75 / 0.0625) < 1e-13);
        let p = params(0.5, 0.5);
        assert!(rel(armax_mean_uncorrected(&p), 2.414_213_562_373_095) < 1e-14);
        assert!(rel(armax_mean_exact(&p), 2.707_106_781_186_547_5) < 1e-14);
        // Mean of the exact pmf by direct summation.
        let p = params(0.3, 0.1);
        let sum: f64 = (1..100_000u64).map(|j| j as f64 * armax_pmf_exact(j, &p)).sum();
        assert!(rel(armax_mean_exact(&p), sum) < 1e-12);
        let m2: f64 = (1..100_000u64).map(|j| (j * j) as f64 * armax_pmf_uncorrected(j, &p)).sum();
        assert!(rel(armax_second_moment_uncorrected(&p), m2) < 1e-11);
        let m1: f64 = (1..100_000u64).map(|j| j as f64 * armax_pmf_uncorrected(j, &p)).sum();
        assert!(rel(armax_mean_uncorrected(&p), m1) < 1e-11);
    }

    #[test]
    fn ar1_values() {
        assert!((ar1_max_cdf(1, 0.999, 2).unwrap() - 0.9985).abs() < 1e-12);
        assert_eq!(ar1_m_minus_one(0.999, 2).unwrap(), 9);
        assert!(ar1_max_cdf(10, 0.999, 2).is_err());
        assert!(ar1_max_cdf(0, 0.999, 2).is_err());
        assert!(ar1_max_cdf(9, 0.999, 2).is_ok());
        let near_one = 1.0 - 1e-12;
        assert!((ar1_max_cdf(3, near_one, 3).unwrap() - 1.0).abs() < 1e-10);
        assert_eq!(ar1_j0(10_000, 2).unwrap(), 6);
        let u = 1.0 - 1e-4;
        assert_eq!(ar1_pmf(1, u, 2, 10_000).unwrap(), 0.5);
        assert!(rel(ar1_pmf(3, u, 2, 10_000).unwrap(), 0.124_968_75) < 1e-12);
        let tail = ar1_pmf(10, u, 2, 10_000).unwrap();
        assert!(rel(tail, 0.5f64.powi(8) * (u - 10.0 * 0.5 * 1e-4)) < 1e-12);
        assert!(ar1_pmf(14, u, 2, 10_000).is_err());
        assert_eq!(ar1_pmf_shifted(4, u, 2, 10_000).unwrap(), ar1_pmf(3, u, 2, 10_000).unwrap());
        assert!(ar1_pmf_shifted(1, u, 2, 10_000).is_err());
        assert_eq!(ar1_m_minus_one(0.5, 2).unwrap(), 1);
        assert!(ar1_pmf(2, 0.5, 2, 100).is_err());
        assert!(ar1_pmf(1, 0.5, 1, 100).is_err());
    }

    #[test]
    fn stable_at_tiny_rho() {
        let p = params(0.01, 1e-12).with_j0(5).with_horizon(1.0, 1e6).unwrap();
        let values = [
            reparam(&p).eta,
            reparam(&p).c,
            inter_cluster_pmf(10, &p),
            psi_pmf(10, &p),
            psi_total_mass(&p),
            limit_geometric_pmf(10, &p),
            lambda_n(&p),
            truncated_mean_model(&p),
            timed_pmf_model(10, &p).unwrap(),
            second_hitting_joint_model(10, 10, &p),
            armax_pmf_uncorrected(10, &p),
            armax_pmf_exact(10, &p),
            armax_mean_uncorrected(&p),
            armax_second_moment_uncorrected(&p),
            armax_mean_exact(&p),
        ];
        for v in values {
            assert!(v.is_finite() && v >= 0.0, "{v}");
        }
        // eta ~ theta rho without cancellation.
        assert!(rel(reparam(&p).eta, 1e-14) < 1e-10);
        assert!(rel(truncated_mean_model(&p.with_j0(0)) * 1e-14, 1.0) < 1e-9);
    }
}
