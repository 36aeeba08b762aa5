//! Power curves: the fraction `λ̂/λ` of false nulls recovered, across shift
//! models and estimator configurations.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::shift::ShiftModel;
use crate::bounding::{BoundingFunction, SequenceMethod};
use crate::calibration::CalibrationTable;
use crate::error::{Error, Result};
use crate::estimator::{EstimateConfig, Estimator};

/// Linear-interpolation quantile of sorted data (`q ∈ [0, 1]`).
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty());
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerSummary {
    pub mean: f64,
    pub median: f64,
    pub p10: f64,
    pub p90: f64,
    /// Fraction of replicates with `λ̂ = 0`.
    pub zero_fraction: f64,
}

impl PowerSummary {
    pub fn from_ratios(mut ratios: Vec<f64>, zeros: usize) -> Self {
        ratios.sort_by(f64::total_cmp);
        let count = ratios.len() as f64;
        PowerSummary {
            mean: ratios.iter().sum::<f64>() / count,
            median: quantile_sorted(&ratios, 0.5),
            p10: quantile_sorted(&ratios, 0.1),
            p90: quantile_sorted(&ratios, 0.9),
            zero_fraction: zeros as f64 / count,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerRow {
    pub mu: f64,
    pub lambda_true: f64,
    pub n: usize,
    pub kappa: f64,
    pub delta_kind: BoundingFunction,
    pub sequence: SequenceMethod,
    pub beta: f64,
    pub replicates: usize,
    pub summary: PowerSummary,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerCurveResult {
    pub replicates: usize,
    pub models: Vec<ShiftModel>,
    pub configs: Vec<EstimateConfig>,
    /// One row per (model, config), models outermost.
    pub rows: Vec<PowerRow>,
}

/// Runs `replicates` simulations per model and evaluates every config on the
/// same simulated samples. Ratios are `λ̂ / (ceil(λ n) / n)`.
///
/// Replicate `r` of a model uses stream `r` under the model's seed, so results
/// do not depend on thread scheduling.
pub fn power_curve(
    models: &[ShiftModel],
    configs: &[EstimateConfig],
    replicates: usize,
) -> Result<PowerCurveResult> {
    if replicates == 0 {
        return Err(Error::SampleSize {
            n: 0,
            reason: "need at least one replicate",
        });
    }
    let mut cache = CalibrationTable::new();
    let mut rows = Vec::with_capacity(models.len() * configs.len());
    for model in models {
        let model = model.validated()?;
        if model.alternatives() == 0 {
            return Err(Error::domain("lambda_true", model.lambda_true, "(0, 1]"));
        }
        let lambda = model.realized_lambda();
        let estimators = configs
            .iter()
            .map(|c| Estimator::prepare(*c, model.n, Some(&mut cache)))
            .collect::<Result<Vec<_>>>()?;

        let per_rep: Vec<Vec<f64>> = (0..replicates as u64)
            .into_par_iter()
            .map(|r| {
                let sample = model.sample_replicate(r);
                estimators
                    .iter()
                    .map(|e| e.sup(sample.values()).value.clamp(0.0, 1.0))
                    .collect()
            })
            .collect();

        for (k, (config, est)) in configs.iter().zip(&estimators).enumerate() {
            let hats: Vec<f64> = per_rep.iter().map(|v| v[k]).collect();
            let zeros = hats.iter().filter(|&&h| h == 0.0).count();
            let ratios = hats.iter().map(|h| h / lambda).collect();
            rows.push(PowerRow {
                mu: model.mu(),
                lambda_true: model.lambda_true,
                n: model.n,
                kappa: model.kappa,
                delta_kind: config.delta,
                sequence: config.sequence.method,
                beta: est.beta(),
                replicates,
                summary: PowerSummary::from_ratios(ratios, zeros),
            });
        }
    }
    Ok(PowerCurveResult {
        replicates,
        models: models.to_vec(),
        configs: configs.to_vec(),
        rows,
    })
}
