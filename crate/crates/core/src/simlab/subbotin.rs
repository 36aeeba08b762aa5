//! Generalized Gaussian (Subbotin) law with density `∝ exp(-|x|^κ / κ)`.
//! `κ = 2` is the standard normal, `κ = 1` the standard Laplace.

use rand::Rng;
use rand_distr::{Distribution, Gamma};

use crate::error::{Error, Result};
use crate::special::gamma_q;

fn check_kappa(kappa: f64) -> Result<()> {
    if kappa > 0.0 && kappa.is_finite() {
        Ok(())
    } else {
        Err(Error::domain("kappa", kappa, "(0, inf)"))
    }
}

/// Survival function `P(X > x)` of the standardized Subbotin law.
///
/// For `x >= 0` this is `Q(1/κ, x^κ/κ) / 2`.
pub fn subbotin_sf(kappa: f64, x: f64) -> Result<f64> {
    check_kappa(kappa)?;
    Ok(sf_unchecked(kappa, x))
}

#[inline]
pub(crate) fn sf_unchecked(kappa: f64, x: f64) -> f64 {
    let upper = 0.5 * gamma_q(1.0 / kappa, x.abs().powf(kappa) / kappa);
    if x >= 0.0 {
        upper
    } else {
        1.0 - upper
    }
}

/// Inverse survival function: the `x` with `P(X > x) = p`.
pub fn subbotin_isf(kappa: f64, p: f64) -> Result<f64> {
    check_kappa(kappa)?;
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain("p", p, "(0, 1)"));
    }
    if p == 0.5 {
        return Ok(0.0);
    }
    if p > 0.5 {
        return Ok(-subbotin_isf(kappa, 1.0 - p)?);
    }
    let mut hi = 1.0;
    while sf_unchecked(kappa, hi) > p {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sf_unchecked(kappa, mid) > p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Exact sampler: `|X| = (κ G)^{1/κ}` with `G ~ Gamma(1/κ, 1)` and a fair
/// random sign.
#[derive(Clone, Debug)]
pub struct Subbotin {
    kappa: f64,
    gamma: Gamma<f64>,
}

impl Subbotin {
    pub fn new(kappa: f64) -> Result<Self> {
        check_kappa(kappa)?;
        let gamma = Gamma::new(1.0 / kappa, 1.0).expect("shape 1/kappa is positive");
        Ok(Subbotin { kappa, gamma })
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }
}

impl Distribution<f64> for Subbotin {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let g = self.gamma.sample(rng);
        let magnitude = (self.kappa * g).powf(1.0 / self.kappa);
        if rng.random::<bool>() {
            magnitude
        } else {
            -magnitude
        }
    }
}
