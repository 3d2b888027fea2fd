//! Hitting times of threshold exceedances in stationary sequences.
//!
//! The crate simulates the ARMAX, moving-maxima, AR(1)-uniform and iid
//! Fréchet processes, extracts first, second and timed hitting times, builds
//! Monte Carlo pmfs, evaluates the closed-form hitting-time models, and
//! estimates the extremal index and the heavy-tail autocorrelation from data.
//!
//! ```
//! use exceedance::{mc_pmf, theory, McConfig, ProcessSpec, Statistic, ThresholdSpec, TheoryParams};
//!
//! let config = McConfig {
//!     process: ProcessSpec::armax(0.5).unwrap(),
//!     threshold: ThresholdSpec::Quantile { rho: 0.5 },
//!     paths: 20_000,
//!     path_len: 200,
//!     master_seed: 1,
//!     burn_in: 0,
//! };
//! let pmf = mc_pmf(&config, &Statistic::First).unwrap().into_pmf().unwrap();
//! let p = TheoryParams::new(0.5, 0.5).unwrap();
//! assert!((pmf.prob(2) - theory::armax_pmf_exact(2, &p)).abs() < 5.0 * pmf.stderr(2));
//! ```

pub mod error;
pub mod estimators;
pub mod hitting;
pub mod ingest;
pub mod processes;
pub mod rng;
pub mod theory;

pub use error::{Error, Result};
pub use estimators::{empirical_quantile, estimate_theta, heavy_acf, intervals_estimator, AcfResult, ThetaEstimate};
pub use hitting::{
    hitting_times, inter_exceedance_gaps, mc_pmf, timed_first_hitting, EmpiricalPmf, HittingRecord, JointPmf,
    McConfig, McOutput, Statistic, ThresholdSpec,
};
pub use ingest::{parse_edge_list, read_edge_list, read_table, write_table, DegreeSequence, ExperimentTable};
pub use processes::{
    frechet_quantile, frechet_sample, pareto_interarrivals, simulate, InterArrivalSpec, ProcessSpec, SamplePath,
};
pub use rng::RngStream;
pub use theory::{ReparamQuantities, TheoryParams};
