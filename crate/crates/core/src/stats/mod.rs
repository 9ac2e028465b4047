//! Descriptive statistics, distribution functions, two-sample tests and
//! kernel density estimates.
//!
//! Everything here is implemented directly on `f64`: log-gamma by the Lanczos
//! approximation, the regularized incomplete beta by a Lentz continued
//! fraction, and the Student t and Fisher F distributions on top of it.

mod dist;
mod hypothesis;
mod kde;
mod sample;
mod special;

pub use dist::{f_cdf, f_pdf, f_quantile, f_sf, t_cdf, t_pdf, t_quantile, t_sf};
pub use hypothesis::{
    f_test, student_t_test, variance_gated_mean_test, welch_t_test, Alternative, GatedComparison,
    TestName, TestReport,
};
pub use kde::{kde, silverman_bandwidth, DensityCurve, KDE_GRID_POINTS};
pub use sample::{mean, variance, SampleSet};
pub use special::{inc_beta, ln_gamma};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatsError {
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("sample {index} is not finite ({value})")]
    NonFinite { index: usize, value: f64 },
    #[error("{name} = {value} is outside the domain of {routine}")]
    Domain {
        routine: &'static str,
        name: &'static str,
        value: f64,
    },
    #[error("{routine} did not converge for {inputs}")]
    NoConvergence {
        routine: &'static str,
        inputs: String,
    },
    #[error("{0}")]
    Degenerate(&'static str),
}
