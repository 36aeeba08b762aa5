//! Bounding functions `δ(t)` and closed-form bounding sequences `β_{n,α}`.
//!
//! A bounding sequence controls the weighted excursion of the uniform
//! empirical process: `P(sup_t (U_n(t) - t) / δ(t) > β_{n,α}) <= α`, with
//! `n β_{n,α}` nondecreasing in `n`. Three pairings are available in closed
//! form:
//!
//! | bounding function      | `ν`  | sequence                                   |
//! |------------------------|------|--------------------------------------------|
//! | linear `t`             | 1    | Daniels: `1/α - 1`, exact                   |
//! | constant `1`           | 0    | DKW: `sqrt(log(2/α) / 2n)`, exact bound     |
//! | stddev `sqrt(t(1-t))`  | 1/2  | Gumbel limit: `(E⁻¹(1-α) + b_n) / a_n`      |
//!
//! The Gumbel sequence is only asymptotically valid. All logarithms are
//! natural.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{check_alpha, Error, Result};

/// Smallest `n` for which the Gumbel sequence is offered.
pub const GUMBEL_MIN_N: u64 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundingFunction {
    /// `δ(t) = t`.
    Linear,
    /// `δ(t) = 1`.
    Constant,
    /// `δ(t) = sqrt(t(1 - t))`.
    Stddev,
}

impl BoundingFunction {
    pub const ALL: [BoundingFunction; 3] = [
        BoundingFunction::Linear,
        BoundingFunction::Constant,
        BoundingFunction::Stddev,
    ];

    /// Index of regular variation at the origin: `δ(bt)/δ(t) -> b^ν`.
    pub fn nu(self) -> f64 {
        match self {
            BoundingFunction::Linear => 1.0,
            BoundingFunction::Constant => 0.0,
            BoundingFunction::Stddev => 0.5,
        }
    }

    /// Evaluates `δ(t)` for `t ∈ [0, 1]`.
    pub fn eval(self, t: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::domain("t", t, "[0, 1]"));
        }
        Ok(self.eval_unchecked(t))
    }

    #[inline]
    pub(crate) fn eval_unchecked(self, t: f64) -> f64 {
        match self {
            BoundingFunction::Linear => t,
            BoundingFunction::Constant => 1.0,
            BoundingFunction::Stddev => (t * (1.0 - t)).sqrt(),
        }
    }

    /// The analytic sequence that pairs with this bounding function.
    pub fn analytic_sequence(self) -> SequenceMethod {
        match self {
            BoundingFunction::Linear => SequenceMethod::Daniels,
            BoundingFunction::Constant => SequenceMethod::Dkw,
            BoundingFunction::Stddev => SequenceMethod::Gumbel,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            BoundingFunction::Linear => "linear",
            BoundingFunction::Constant => "constant",
            BoundingFunction::Stddev => "stddev",
        }
    }
}

impl fmt::Display for BoundingFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BoundingFunction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "linear" => Ok(BoundingFunction::Linear),
            "constant" => Ok(BoundingFunction::Constant),
            "stddev" => Ok(BoundingFunction::Stddev),
            other => Err(format!(
                "unknown bounding function `{other}` (expected linear, constant or stddev)"
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SequenceMethod {
    Daniels,
    Dkw,
    Gumbel,
    MonteCarlo,
}

impl SequenceMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            SequenceMethod::Daniels => "daniels",
            SequenceMethod::Dkw => "dkw",
            SequenceMethod::Gumbel => "gumbel",
            SequenceMethod::MonteCarlo => "monte-carlo",
        }
    }

    /// Whether this sequence is a bounding sequence for `delta`.
    pub fn supports(self, delta: BoundingFunction) -> bool {
        self == SequenceMethod::MonteCarlo || delta.analytic_sequence() == self
    }
}

impl fmt::Display for SequenceMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SequenceMethod {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "daniels" => Ok(SequenceMethod::Daniels),
            "dkw" => Ok(SequenceMethod::Dkw),
            "gumbel" => Ok(SequenceMethod::Gumbel),
            "monte-carlo" | "monte_carlo" | "mc" => Ok(SequenceMethod::MonteCarlo),
            other => Err(format!(
                "unknown bounding sequence `{other}` (expected daniels, dkw, gumbel or monte-carlo)"
            )),
        }
    }
}

/// Monte Carlo calibration settings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonteCarloSettings {
    pub replicates: usize,
    pub seed: u64,
}

/// How `β_{n,α}` is obtained.
///
/// The interval over which a Monte Carlo sequence is calibrated is always the
/// interval the estimator uses, so it is not stored here.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundingSequenceSpec {
    pub method: SequenceMethod,
    pub alpha: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monte_carlo: Option<MonteCarloSettings>,
}

impl BoundingSequenceSpec {
    pub fn analytic(method: SequenceMethod, alpha: f64) -> Self {
        BoundingSequenceSpec {
            method,
            alpha,
            monte_carlo: None,
        }
    }

    pub fn monte_carlo(alpha: f64, replicates: usize, seed: u64) -> Self {
        BoundingSequenceSpec {
            method: SequenceMethod::MonteCarlo,
            alpha,
            monte_carlo: Some(MonteCarloSettings { replicates, seed }),
        }
    }

    pub fn validate(&self, delta: BoundingFunction) -> Result<()> {
        check_alpha(self.alpha)?;
        if !self.method.supports(delta) {
            return Err(Error::Incompatible {
                method: self.method,
                delta,
            });
        }
        if self.method == SequenceMethod::MonteCarlo && self.monte_carlo.is_none() {
            return Err(Error::MissingCalibration);
        }
        Ok(())
    }
}

/// Daniels' sequence for the linear bounding function, `1/α - 1`.
pub fn daniels_beta(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(1.0 / alpha - 1.0)
}

/// DKW sequence for the constant bounding function, `sqrt(log(2/α) / 2n)`.
pub fn dkw_beta(n: u64, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if n == 0 {
        return Err(Error::SampleSize {
            n: 0,
            reason: "need at least one observation",
        });
    }
    Ok(((2.0 / alpha).ln() / (2.0 * n as f64)).sqrt())
}

/// Normalizing constants `(a_n, b_n)` of the Gumbel limit for the
/// standardized uniform empirical process.
pub fn gumbel_constants(n: u64) -> Result<(f64, f64)> {
    if n < GUMBEL_MIN_N {
        return Err(Error::SampleSize {
            n: n as usize,
            reason: "the Gumbel bounding sequence needs n >= 16",
        });
    }
    let nf = n as f64;
    let ll = nf.ln().ln();
    let a = (2.0 * nf * ll).sqrt();
    let b = 2.0 * ll + 0.5 * ll.ln() - 0.5 * (4.0 * std::f64::consts::PI).ln();
    Ok((a, b))
}

/// Quantile of the Gumbel law `E(x) = exp(-exp(-x))`.
pub fn gumbel_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain("p", p, "(0, 1)"));
    }
    Ok(-(-p.ln()).ln())
}

/// Asymptotic sequence for the stddev bounding function,
/// `(E⁻¹(1 - α) + b_n) / a_n`.
pub fn gumbel_beta(n: u64, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let (a, b) = gumbel_constants(n)?;
    Ok((gumbel_quantile(1.0 - alpha)? + b) / a)
}

/// Evaluates one of the closed-form sequences.
pub fn analytic_beta(method: SequenceMethod, n: u64, alpha: f64) -> Result<f64> {
    match method {
        SequenceMethod::Daniels => daniels_beta(alpha),
        SequenceMethod::Dkw => dkw_beta(n, alpha),
        SequenceMethod::Gumbel => gumbel_beta(n, alpha),
        SequenceMethod::MonteCarlo => Err(Error::MissingCalibration),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MonotoneCheck {
    pub monotone: bool,
    /// First consecutive pair `(n_prev, n)` where `n β_n` decreased.
    pub first_violation: Option<(u64, u64)>,
}

/// Checks that `n β_{n,α}` is nondecreasing along `n_grid`.
pub fn n_beta_monotone_check(
    method: SequenceMethod,
    alpha: f64,
    n_grid: &[u64],
) -> Result<MonotoneCheck> {
    let mut prev: Option<(u64, f64)> = None;
    for &n in n_grid {
        let scaled = n as f64 * analytic_beta(method, n, alpha)?;
        if let Some((pn, ps)) = prev {
            if scaled < ps {
                return Ok(MonotoneCheck {
                    monotone: false,
                    first_violation: Some((pn, n)),
                });
            }
        }
        prev = Some((n, scaled));
    }
    Ok(MonotoneCheck {
        monotone: true,
        first_violation: None,
    })
}
