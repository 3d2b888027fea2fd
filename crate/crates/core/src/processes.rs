//! Stationary process models and the inter-arrival model.
//!
//! Four models are supported, each started in its stationary law so that no
//! burn-in is needed:
//!
//! * ARMAX: `X_t = max(a X_{t-1}, (1 - a) Z_t)` with `X_0 = Z_0`.
//! * Moving maxima: `X_t = max_i w_i Z_{t-i}` over a window of `m + 1` draws.
//! * AR(1) with uniform lattice noise: `X_j = X_{j-1} / r + e_j`, `e_j` uniform
//!   on `{0, 1/r, ..., (r-1)/r}`, `X_0 ~ U(0, 1)`.
//! * iid standard Fréchet.
//!
//! `Z` is standard Fréchet, `P{Z <= x} = exp(-1/x)`. Paths are produced lazily
//! by [`PathGenerator`], so a Monte Carlo run can stop at the first exceedance
//! while seeing exactly the values [`simulate`] would return.

use std::collections::VecDeque;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{Channel, RngStream};

const WEIGHT_SUM_TOLERANCE: f64 = 1e-12;

/// Largest double strictly below one.
const BELOW_ONE: f64 = 1.0 - f64::EPSILON / 2.0;

/// A stationary process model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum ProcessSpec {
    Armax { alpha: f64 },
    MovingMax { weights: Vec<f64> },
    Ar1Uniform { r: u32 },
    IidFrechet,
}

/// Marginal law of the process values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Marginal {
    StandardFrechet,
    Uniform,
}

impl Marginal {
    pub fn cdf(self, x: f64) -> f64 {
        match self {
            Marginal::StandardFrechet if x <= 0.0 => 0.0,
            Marginal::StandardFrechet => (-1.0 / x).exp(),
            Marginal::Uniform => x.clamp(0.0, 1.0),
        }
    }

    /// The `(1 - rho)`-quantile.
    pub fn upper_quantile(self, rho: f64) -> Result<f64> {
        match self {
            Marginal::StandardFrechet => frechet_quantile(rho),
            Marginal::Uniform => {
                check_open_unit("rho", rho)?;
                Ok(1.0 - rho)
            }
        }
    }
}

impl ProcessSpec {
    pub fn armax(alpha: f64) -> Result<Self> {
        let spec = ProcessSpec::Armax { alpha };
        spec.validate()?;
        Ok(spec)
    }

    pub fn moving_max(weights: Vec<f64>) -> Result<Self> {
        let spec = ProcessSpec::MovingMax { weights };
        spec.validate()?;
        Ok(spec)
    }

    pub fn ar1_uniform(r: u32) -> Result<Self> {
        let spec = ProcessSpec::Ar1Uniform { r };
        spec.validate()?;
        Ok(spec)
    }

    /// Check the parameter invariants. Specs built through the constructors
    /// are always valid; deserialized ones should be checked.
    pub fn validate(&self) -> Result<()> {
        match self {
            ProcessSpec::Armax { alpha } => {
                if !(0.0..1.0).contains(alpha) {
                    return Err(Error::domain(format!("ARMAX alpha must lie in [0, 1), got {alpha}")));
                }
            }
            ProcessSpec::MovingMax { weights } => {
                if weights.is_empty() {
                    return Err(Error::domain("moving-maxima weights must be nonempty"));
                }
                if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
                    return Err(Error::domain("moving-maxima weights must be finite and nonnegative"));
                }
                let sum: f64 = weights.iter().sum();
                if (sum - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
                    return Err(Error::domain(format!("moving-maxima weights must sum to 1, got {sum}")));
                }
                if weights.windows(2).any(|w| w[0] < w[1]) {
                    return Err(Error::domain("moving-maxima weights must be sorted non-increasing"));
                }
            }
            ProcessSpec::Ar1Uniform { r } => {
                if *r < 2 {
                    return Err(Error::domain(format!("AR(1) lattice size r must be >= 2, got {r}")));
                }
            }
            ProcessSpec::IidFrechet => {}
        }
        Ok(())
    }

    /// Extremal index of the model.
    pub fn theta(&self) -> f64 {
        match self {
            ProcessSpec::Armax { alpha } => 1.0 - alpha,
            ProcessSpec::MovingMax { weights } => weights[0],
            ProcessSpec::Ar1Uniform { r } => 1.0 - 1.0 / f64::from(*r),
            ProcessSpec::IidFrechet => 1.0,
        }
    }

    pub fn marginal(&self) -> Marginal {
        match self {
            ProcessSpec::Ar1Uniform { .. } => Marginal::Uniform,
            _ => Marginal::StandardFrechet,
        }
    }

    /// Short human-readable label, e.g. `armax(alpha=0.5)`.
    pub fn label(&self) -> String {
        match self {
            ProcessSpec::Armax { alpha } => format!("armax(alpha={alpha})"),
            ProcessSpec::MovingMax { weights } => format!("moving_max(weights={weights:?})"),
            ProcessSpec::Ar1Uniform { r } => format!("ar1_uniform(r={r})"),
            ProcessSpec::IidFrechet => "iid_frechet".to_string(),
        }
    }

    /// Lazy path generator for one stream, after discarding `burn_in` values.
    pub fn generator(&self, stream: RngStream, burn_in: usize) -> PathGenerator<'_> {
        let mut rng = stream.rng(Channel::Process);
        let state = match self {
            ProcessSpec::Armax { alpha } => GenState::Armax {
                alpha: *alpha,
                scale: 1.0 - alpha,
                prev: frechet_sample(&mut rng),
            },
            ProcessSpec::MovingMax { weights } => {
                // Pre-window Z_{1-m}, ..., Z_0, oldest first.
                let mut window = VecDeque::with_capacity(weights.len());
                for _ in 1..weights.len() {
                    window.push_back(frechet_sample(&mut rng));
                }
                GenState::MovingMax { weights, window }
            }
            ProcessSpec::Ar1Uniform { r } => GenState::Ar1 {
                r: *r,
                prev: rng.random::<f64>(),
            },
            ProcessSpec::IidFrechet => GenState::Iid,
        };
        let mut generator = PathGenerator { rng, state };
        for _ in 0..burn_in {
            generator.next_value();
        }
        generator
    }
}

enum GenState<'a> {
    Iid,
    Armax { alpha: f64, scale: f64, prev: f64 },
    MovingMax { weights: &'a [f64], window: VecDeque<f64> },
    Ar1 { r: u32, prev: f64 },
}

/// Infinite iterator over `X_1, X_2, ...` of one path.
pub struct PathGenerator<'a> {
    rng: ChaCha8Rng,
    state: GenState<'a>,
}

impl PathGenerator<'_> {
    #[inline]
    pub fn next_value(&mut self) -> f64 {
        let rng = &mut self.rng;
        match &mut self.state {
            GenState::Iid => frechet_sample(rng),
            GenState::Armax { alpha, scale, prev } => {
                let x = (*alpha * *prev).max(*scale * frechet_sample(rng));
                *prev = x;
                x
            }
            GenState::MovingMax { weights, window } => {
                if window.len() == weights.len() {
                    window.pop_front();
                }
                window.push_back(frechet_sample(rng));
                // window[m - i] holds Z_{t-i}.
                let m = weights.len() - 1;
                let mut x = 0.0f64;
                for (i, w) in weights.iter().enumerate() {
                    x = x.max(w * window[m - i]);
                }
                x
            }
            GenState::Ar1 { r, prev } => {
                let k = rng.random_range(0..*r);
                let rf = f64::from(*r);
                let mut x = *prev / rf + f64::from(k) / rf;
                if x >= 1.0 {
                    // Rounding can reach 1 although the exact value is below it.
                    x = BELOW_ONE;
                }
                *prev = x;
                x
            }
        }
    }
}

impl Iterator for PathGenerator<'_> {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        Some(self.next_value())
    }
}

/// Pareto inter-arrival law, `P{Y > t} = (t / scale)^(-alpha_tail)` for `t >= scale`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterArrivalSpec {
    pub alpha_tail: f64,
    pub scale: f64,
}

impl InterArrivalSpec {
    pub fn new(alpha_tail: f64, scale: f64) -> Result<Self> {
        let spec = Self { alpha_tail, scale };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        // alpha_tail = 0 would be a slowly varying tail; it is not modelled.
        if !(self.alpha_tail > 0.0 && self.alpha_tail.is_finite()) {
            return Err(Error::domain(format!("alpha_tail must be positive and finite, got {}", self.alpha_tail)));
        }
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return Err(Error::domain(format!("inter-arrival scale must be positive, got {}", self.scale)));
        }
        Ok(())
    }

    pub fn survival(&self, t: f64) -> f64 {
        if t < self.scale {
            1.0
        } else {
            (t / self.scale).powf(-self.alpha_tail)
        }
    }

    /// Inverse-CDF map from `u` in `(0, 1]`.
    #[inline]
    pub fn from_uniform(&self, u: f64) -> f64 {
        self.scale * u.powf(-1.0 / self.alpha_tail)
    }

    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.from_uniform(1.0 - rng.random::<f64>())
    }
}

/// Inverse-CDF map of the standard Fréchet law, `u` in `(0, 1)`.
#[inline]
pub fn frechet_from_uniform(u: f64) -> f64 {
    -1.0 / u.ln()
}

/// One standard Fréchet draw.
#[inline]
pub fn frechet_sample<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let u: f64 = rng.random();
        if u > 0.0 {
            return frechet_from_uniform(u);
        }
    }
}

/// `x_rho = -1 / ln(1 - rho)`, the `(1 - rho)`-quantile of the standard Fréchet law.
pub fn frechet_quantile(rho: f64) -> Result<f64> {
    check_open_unit("rho", rho)?;
    Ok(-1.0 / (-rho).ln_1p())
}

pub(crate) fn check_open_unit(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must lie in (0, 1), got {v}")))
    }
}

/// A realized trajectory `X_1, ..., X_n` with optional inter-arrival times
/// `Y_1, ..., Y_{n-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplePath {
    pub values: Vec<f64>,
    pub interarrivals: Option<Vec<f64>>,
    /// Address of the randomness that produced the path.
    pub stream: RngStream,
}

impl SamplePath {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Arrival times `S_j = Y_1 + ... + Y_{j-1}`, so `S_1 = 0`.
    pub fn arrival_times(&self) -> Option<Vec<f64>> {
        let ys = self.interarrivals.as_ref()?;
        let mut out = Vec::with_capacity(ys.len() + 1);
        let mut acc = 0.0;
        out.push(acc);
        for y in ys {
            acc += y;
            out.push(acc);
        }
        Some(out)
    }
}

/// Generate `n` values of the process on the given stream.
pub fn simulate(spec: &ProcessSpec, n: usize, stream: RngStream, burn_in: usize) -> Result<SamplePath> {
    if n == 0 {
        return Err(Error::domain("path length n must be >= 1"));
    }
    spec.validate()?;
    let values = spec.generator(stream, burn_in).take(n).collect();
    Ok(SamplePath {
        values,
        interarrivals: None,
        stream,
    })
}

/// Like [`simulate`], with `n - 1` Pareto inter-arrival times from the
/// stream's independent inter-arrival channel.
pub fn simulate_timed(
    spec: &ProcessSpec,
    n: usize,
    stream: RngStream,
    burn_in: usize,
    interarrival: &InterArrivalSpec,
) -> Result<SamplePath> {
    let mut path = simulate(spec, n, stream, burn_in)?;
    path.interarrivals = Some(pareto_interarrivals(interarrival, n - 1, stream)?);
    Ok(path)
}

/// `count` iid Pareto inter-arrival times.
pub fn pareto_interarrivals(spec: &InterArrivalSpec, count: usize, stream: RngStream) -> Result<Vec<f64>> {
    spec.validate()?;
    let mut rng = stream.rng(Channel::InterArrival);
    Ok((0..count).map(|_| spec.sample(&mut rng)).collect())
}
