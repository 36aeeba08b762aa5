//! Lower confidence bound for the proportion of false null hypotheses.
//!
//! ```text
//! λ̂ = sup_{t ∈ (a,b)} (F_n(t) - t - β δ(t)) / (1 - t)
//! ```
//!
//! With `β` a bounding sequence at level `α`, `P(λ̂ <= λ) >= 1 - α`. The
//! estimand is `λ` itself only when the density of alternative p-values has
//! infimum zero; if it is bounded below by `g > 0`, the bound covers
//! `(1 - g) λ`. That case cannot be detected from the sample.

use serde::{Deserialize, Serialize};

use crate::bounding::{analytic_beta, BoundingFunction, BoundingSequenceSpec, SequenceMethod};
use crate::calibration::{calibrate_beta, CalibrationRequest, CalibrationTable};
use crate::error::{check_alpha, Error, Result};
use crate::sample::{count_le, jump_points, Interval, PValueSample};

/// Interval over which the supremum is taken.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum IntervalChoice {
    /// `(1/n, 1 - 1/n)`; falls back to `(0, 1)` for `n < 3`.
    #[default]
    Truncated,
    /// `(0, 1)`.
    Full,
    Custom {
        lo: f64,
        hi: f64,
    },
}

impl IntervalChoice {
    pub fn resolve(self, n: usize) -> Result<Interval> {
        match self {
            IntervalChoice::Truncated if n >= 3 => Interval::truncated(n),
            IntervalChoice::Truncated | IntervalChoice::Full => Ok(Interval::UNIT),
            IntervalChoice::Custom { lo, hi } => Interval::new(lo, hi),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateConfig {
    pub delta: BoundingFunction,
    pub sequence: BoundingSequenceSpec,
    #[serde(default)]
    pub interval: IntervalChoice,
    /// Extra evaluation points per gap between consecutive candidates.
    #[serde(default)]
    pub refine_grid: usize,
    #[serde(default = "default_clamp")]
    pub clamp: bool,
}

fn default_clamp() -> bool {
    true
}

impl EstimateConfig {
    /// The given bounding function with its closed-form sequence on the
    /// truncated interval.
    pub fn analytic(delta: BoundingFunction, alpha: f64) -> Self {
        EstimateConfig {
            delta,
            sequence: BoundingSequenceSpec::analytic(delta.analytic_sequence(), alpha),
            interval: IntervalChoice::Truncated,
            refine_grid: 0,
            clamp: true,
        }
    }

    pub fn with_interval(self, interval: IntervalChoice) -> Self {
        EstimateConfig { interval, ..self }
    }
}

/// Outcome of the supremum over candidate points.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupResult {
    pub value: f64,
    pub argmax_t: f64,
    /// Value of `n F_n(argmax_t)`.
    pub count: usize,
    /// True when no order statistic falls inside the interval.
    pub empty_interval: bool,
}

/// `(count/n - t - β δ(t)) / (1 - t)`.
#[inline]
pub fn lambda_objective(delta: BoundingFunction, beta: f64, count: usize, n: usize, t: f64) -> f64 {
    (count as f64 / n as f64 - t - beta * delta.eval_unchecked(t)) / (1.0 - t)
}

/// Maximizes [`lambda_objective`] over the jump points of `sorted` inside
/// `interval` (plus the left endpoint), optionally adding `refine_grid`
/// equispaced points inside every gap between candidates.
///
/// The objective is nonincreasing between jumps, so the jump points already
/// attain the supremum over `[a, b)`; refinement points can never raise it.
pub fn lambda_sup(
    sorted: &[f64],
    delta: BoundingFunction,
    beta: f64,
    interval: Interval,
    refine_grid: usize,
) -> SupResult {
    let n = sorted.len();
    let mut best = SupResult {
        value: f64::NEG_INFINITY,
        argmax_t: interval.lo,
        count: 0,
        empty_interval: true,
    };
    let mut consider = |t: f64, count: usize| {
        let v = lambda_objective(delta, beta, count, n, t);
        if v > best.value {
            best.value = v;
            best.argmax_t = t;
            best.count = count;
        }
    };
    let mut points = jump_points(sorted, interval).peekable();
    let mut inside = 0usize;
    while let Some((t, count)) = points.next() {
        consider(t, count);
        inside += 1;
        if refine_grid > 0 {
            let end = points.peek().map_or(interval.hi, |&(next, _)| next);
            let step = (end - t) / (refine_grid + 1) as f64;
            for k in 1..=refine_grid {
                consider(t + step * k as f64, count);
            }
        }
    }
    best.empty_interval = inside <= 1;
    best
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    /// Unclamped supremum; negative values are kept for diagnostics.
    pub lambda_hat_raw: f64,
    pub lambda_hat: f64,
    pub argmax_t: f64,
    pub n: usize,
    pub beta_used: f64,
    pub alpha: f64,
    pub interval: Interval,
    pub config: EstimateConfig,
    /// `λ̂_raw > 0`: rejection of the global null at level `α`. For the stddev
    /// bounding function this is the higher-criticism test.
    pub hc_reject: bool,
    pub fwer_lambda: f64,
    /// Logarithm base used by the Gumbel constants.
    pub log_convention: String,
    pub warnings: Vec<String>,
}

/// An estimator with its bounding sequence resolved for one sample size.
#[derive(Clone, Debug)]
pub struct Estimator {
    config: EstimateConfig,
    n: usize,
    interval: Interval,
    beta: f64,
}

impl Estimator {
    /// Resolves `β` for samples of size `n`. Monte Carlo sequences are
    /// calibrated on the estimator's own interval, through `cache` when given.
    pub fn prepare(
        config: EstimateConfig,
        n: usize,
        cache: Option<&mut CalibrationTable>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::SampleSize {
                n,
                reason: "need at least one p-value",
            });
        }
        config.sequence.validate(config.delta)?;
        let interval = config.interval.resolve(n)?;
        let beta = match (config.sequence.method, config.sequence.monte_carlo) {
            (SequenceMethod::MonteCarlo, Some(mc)) => {
                let req = CalibrationRequest {
                    n,
                    delta: config.delta,
                    interval,
                    alpha: config.sequence.alpha,
                    replicates: mc.replicates,
                    seed: mc.seed,
                };
                match cache {
                    Some(table) => table.get_or_calibrate(&req)?.beta,
                    None => calibrate_beta(&req)?.beta,
                }
            }
            (method, _) => analytic_beta(method, n as u64, config.sequence.alpha)?,
        };
        Ok(Estimator {
            config,
            n,
            interval,
            beta,
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    /// Supremum only, for sorted values of the prepared size.
    pub fn sup(&self, sorted: &[f64]) -> SupResult {
        debug_assert_eq!(sorted.len(), self.n);
        lambda_sup(
            sorted,
            self.config.delta,
            self.beta,
            self.interval,
            self.config.refine_grid,
        )
    }

    pub fn estimate(&self, sample: &PValueSample) -> Result<EstimateReport> {
        if sample.n() != self.n {
            return Err(Error::SampleSize {
                n: sample.n(),
                reason: "sample size differs from the prepared estimator",
            });
        }
        let sup = self.sup(sample.values());
        let raw = sup.value;
        let lambda_hat = if self.config.clamp {
            raw.clamp(0.0, 1.0)
        } else {
            raw
        };
        let mut warnings = Vec::new();
        if sup.empty_interval {
            warnings.push("no p-value inside the interval; left-endpoint value used".into());
        }
        if self.config.sequence.method == SequenceMethod::Gumbel && self.interval.lo == 0.0 {
            warnings.push(
                "Gumbel sequence on an interval starting at 0: the asymptotic level \
                 is a poor approximation at moderate n"
                    .into(),
            );
        }
        let alpha = self.config.sequence.alpha;
        Ok(EstimateReport {
            lambda_hat_raw: raw,
            lambda_hat,
            argmax_t: sup.argmax_t,
            n: self.n,
            beta_used: self.beta,
            alpha,
            interval: self.interval,
            config: self.config,
            hc_reject: raw > 0.0,
            fwer_lambda: fwer_lambda(sample, alpha)?,
            log_convention: "natural".into(),
            warnings,
        })
    }
}

/// Estimates `λ` for one sample.
pub fn estimate_lambda(sample: &PValueSample, config: &EstimateConfig) -> Result<EstimateReport> {
    Estimator::prepare(*config, sample.n(), None)?.estimate(sample)
}

/// Familywise-error-rate estimate `F_n(α/n)`.
pub fn fwer_lambda(sample: &PValueSample, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let n = sample.n();
    Ok(count_le(sample.values(), alpha / n as f64) as f64 / n as f64)
}

/// Higher-criticism test of the global null: `λ̂ > 0` under the stddev
/// bounding function on the truncated interval.
pub fn hc_reject(sample: &PValueSample, sequence: BoundingSequenceSpec) -> Result<bool> {
    let config = EstimateConfig {
        delta: BoundingFunction::Stddev,
        sequence,
        interval: IntervalChoice::Truncated,
        refine_grid: 0,
        clamp: true,
    };
    Ok(estimate_lambda(sample, &config)?.lambda_hat_raw > 0.0)
}
