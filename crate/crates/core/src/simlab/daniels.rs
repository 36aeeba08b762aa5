use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{replicate_rng, sorted_uniforms};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DanielsResult {
    pub n: usize,
    pub lambda: f64,
    pub replicates: usize,
    pub probability: f64,
    pub std_error: f64,
    /// `1/λ`, the exact value.
    pub expected: f64,
}

/// Monte Carlo estimate of `P(sup_t U_n(t)/t >= λ)`, which equals `1/λ` for
/// every `n`. The supremum is attained at order statistics, where
/// `U_n(u_(i)) = i/n`.
pub fn daniels_check(n: usize, lambda: f64, replicates: usize, seed: u64) -> Result<DanielsResult> {
    if lambda.is_nan() || lambda <= 1.0 {
        return Err(Error::domain("lambda", lambda, "(1, inf)"));
    }
    if n == 0 || replicates == 0 {
        return Err(Error::SampleSize {
            n: n.min(replicates),
            reason: "need a positive sample size and replicate count",
        });
    }
    let hits = (0..replicates as u64)
        .into_par_iter()
        .map_init(Vec::new, |buf, r| {
            let mut rng = replicate_rng(seed, r);
            sorted_uniforms(&mut rng, n, buf);
            buf.iter()
                .enumerate()
                .any(|(i, &u)| (i + 1) as f64 / n as f64 >= lambda * u)
        })
        .filter(|&hit| hit)
        .count();
    let p = hits as f64 / replicates as f64;
    Ok(DanielsResult {
        n,
        lambda,
        replicates,
        probability: p,
        std_error: (p * (1.0 - p) / replicates as f64).sqrt(),
        expected: 1.0 / lambda,
    })
}
