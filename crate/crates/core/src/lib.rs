//! Lower confidence bounds for the proportion of false null hypotheses.
//!
//! Given `n` independent p-values with empirical distribution `F_n`, the bound
//!
//! ```text
//! λ̂ = sup_{t ∈ (a,b)} (F_n(t) - t - β_{n,α} δ(t)) / (1 - t)
//! ```
//!
//! satisfies `P(λ̂ <= λ) >= 1 - α`, where `λ` is the proportion of false
//! nulls, `δ` a bounding function and `β_{n,α}` a matching bounding sequence.
//!
//! - [`bounding`]: bounding functions and closed-form sequences.
//! - [`calibration`]: Monte Carlo sequences on restricted intervals, cached.
//! - [`estimator`]: `λ̂`, the FWER estimate and the higher-criticism test.
//! - [`simlab`]: shift-model simulations, power curves and regime maps.

pub mod bounding;
pub mod calibration;
pub mod error;
pub mod estimator;
pub mod rng;
pub mod sample;
pub mod simlab;
pub mod special;

pub use bounding::{
    analytic_beta, daniels_beta, dkw_beta, gumbel_beta, n_beta_monotone_check, BoundingFunction,
    BoundingSequenceSpec, MonteCarloSettings, SequenceMethod,
};
pub use calibration::{
    calibrate_beta, weighted_sup_stat, Calibration, CalibrationEntry, CalibrationRequest,
    CalibrationTable,
};
pub use error::{Error, Result};
pub use estimator::{
    estimate_lambda, fwer_lambda, hc_reject, EstimateConfig, EstimateReport, Estimator,
    IntervalChoice,
};
pub use sample::{Interval, PValueSample};

/// Crate version embedded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
