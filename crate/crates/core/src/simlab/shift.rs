//! Shift-location model: null statistics follow the standardized Subbotin
//! law, alternatives the same law shifted by `μ > 0`. P-values are one-sided,
//! `P = SF(Z)`.

use rand_distr::Distribution;
use serde::{Deserialize, Serialize};

use super::subbotin::{sf_unchecked, subbotin_isf, Subbotin};
use crate::error::{Error, Result};
use crate::rng::replicate_rng;
use crate::sample::PValueSample;

/// How the alternative shift is set.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Shift {
    /// `μ_n = (κ r log n)^{1/κ}`, so the alternative p-value quantiles scale
    /// like `n^{-r}`.
    Scaled { r: f64 },
    /// A fixed shift.
    Fixed { mu: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShiftModel {
    pub kappa: f64,
    pub shift: Shift,
    pub n: usize,
    /// Nominal proportion of false nulls; `ceil(λ n)` statistics are shifted.
    pub lambda_true: f64,
    pub seed: u64,
}

impl ShiftModel {
    pub fn scaled(kappa: f64, r: f64, n: usize, lambda_true: f64, seed: u64) -> Result<Self> {
        ShiftModel {
            kappa,
            shift: Shift::Scaled { r },
            n,
            lambda_true,
            seed,
        }
        .validated()
    }

    pub fn fixed(kappa: f64, mu: f64, n: usize, lambda_true: f64, seed: u64) -> Result<Self> {
        ShiftModel {
            kappa,
            shift: Shift::Fixed { mu },
            n,
            lambda_true,
            seed,
        }
        .validated()
    }

    pub fn validated(self) -> Result<Self> {
        if !(self.kappa > 0.0 && self.kappa.is_finite()) {
            return Err(Error::domain("kappa", self.kappa, "(0, inf)"));
        }
        if self.n == 0 {
            return Err(Error::SampleSize {
                n: 0,
                reason: "need at least one test",
            });
        }
        if !(0.0..=1.0).contains(&self.lambda_true) {
            return Err(Error::domain("lambda_true", self.lambda_true, "[0, 1]"));
        }
        if self.lambda_true > 0.0 && self.lambda_true * (self.n as f64) < 1.0 - 1e-9 {
            return Err(Error::domain(
                "lambda_true * n",
                self.lambda_true * self.n as f64,
                ">= 1",
            ));
        }
        match self.shift {
            Shift::Scaled { r } if !(r > 0.0 && r < 1.0) => Err(Error::domain("r", r, "(0, 1)")),
            Shift::Fixed { mu } if !(mu >= 0.0 && mu.is_finite()) => {
                Err(Error::domain("mu", mu, "[0, inf)"))
            }
            _ => Ok(self),
        }
    }

    pub fn mu(&self) -> f64 {
        match self.shift {
            Shift::Scaled { r } => scaled_mu(self.kappa, r, self.n as f64),
            Shift::Fixed { mu } => mu,
        }
    }

    /// Number of shifted statistics, `ceil(λ n)`.
    pub fn alternatives(&self) -> usize {
        let m = (self.lambda_true * self.n as f64 - 1e-9).ceil().max(0.0) as usize;
        m.min(self.n)
    }

    /// Realized proportion of false nulls, `ceil(λ n) / n`.
    pub fn realized_lambda(&self) -> f64 {
        self.alternatives() as f64 / self.n as f64
    }

    /// Draws replicate `replicate`; replicate 0 is what [`sample_shift_model`]
    /// returns.
    pub fn sample_replicate(&self, replicate: u64) -> PValueSample {
        let dist = Subbotin::new(self.kappa).expect("validated kappa");
        let mut rng = replicate_rng(self.seed, replicate);
        let mu = self.mu();
        let m = self.alternatives();
        let mut p: Vec<f64> = (0..self.n)
            .map(|i| {
                let z = dist.sample(&mut rng) + if i < m { mu } else { 0.0 };
                sf_unchecked(self.kappa, z)
            })
            .collect();
        p.sort_by(f64::total_cmp);
        PValueSample::from_sorted_unchecked(
            p,
            format!("shift-model seed={} rep={replicate}", self.seed),
        )
    }
}

fn scaled_mu(kappa: f64, r: f64, n: f64) -> f64 {
    (kappa * r * n.ln()).powf(1.0 / kappa)
}

/// Draws one sample from `model`.
pub fn sample_shift_model(model: &ShiftModel) -> Result<PValueSample> {
    Ok(model.validated()?.sample_replicate(0))
}

/// `log G⁻¹(q) / log n` along `n_grid`, where `G` is the alternative p-value
/// law under the scaled shift. Tends to `-r`, slowly.
pub fn quantile_scaling_check(
    kappa: f64,
    r: f64,
    q: f64,
    n_grid: &[u64],
) -> Result<Vec<(u64, f64)>> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::domain("r", r, "(0, 1)"));
    }
    // P = SF(μ + X) <= p  iff  X >= ISF(p) - μ, so G⁻¹(q) = SF(μ + ISF(q)).
    let offset = subbotin_isf(kappa, q)?;
    n_grid
        .iter()
        .map(|&n| {
            if n < 2 {
                return Err(Error::SampleSize {
                    n: n as usize,
                    reason: "log n must be positive",
                });
            }
            let nf = n as f64;
            let p = sf_unchecked(kappa, scaled_mu(kappa, r, nf) + offset);
            Ok((n, p.ln() / nf.ln()))
        })
        .collect()
}
