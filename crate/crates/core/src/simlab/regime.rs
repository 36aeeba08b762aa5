//! Asymptotic detection regimes in the `(γ, r)` plane.
//!
//! `γ` is the sparsity exponent (`λ ~ n^{-γ}`), `r` the signal exponent (the
//! alternative p-value quantiles scale like `n^{-r}`), `ν` the regular
//! variation index of the bounding function at the origin.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `λ̂/λ -> 1` in probability.
    FullDetection,
    /// `λ̂/λ -> 0` in probability.
    NoDetection,
    /// On the critical line; the asymptotics say nothing.
    Boundary,
    /// No result available for this combination.
    NotCovered,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::FullDetection => "full_detection",
            Regime::NoDetection => "no_detection",
            Regime::Boundary => "boundary",
            Regime::NotCovered => "not_covered",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegimeQuery {
    pub nu: f64,
    pub gamma: f64,
    pub r: f64,
}

fn compare(r: f64, threshold: f64) -> Regime {
    if r > threshold {
        Regime::FullDetection
    } else if r < threshold {
        Regime::NoDetection
    } else {
        Regime::Boundary
    }
}

pub fn regime_classify(q: RegimeQuery) -> Result<Regime> {
    let RegimeQuery { nu, gamma, r } = q;
    if !(0.0..=1.0).contains(&nu) {
        return Err(Error::domain("nu", nu, "[0, 1]"));
    }
    if !(0.0..1.0).contains(&gamma) {
        return Err(Error::domain("gamma", gamma, "[0, 1)"));
    }
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::domain("r", r, "(0, 1)"));
    }
    let regime = if nu <= 0.5 {
        if gamma < 0.5 {
            Regime::FullDetection
        } else if nu == 0.0 {
            Regime::NoDetection
        } else {
            compare(r, (gamma - 0.5) / nu)
        }
    } else if gamma > 1.0 - nu && gamma < 0.5 {
        Regime::NoDetection
    } else if nu == 1.0 && gamma >= 0.5 {
        compare(r, gamma)
    } else {
        Regime::NotCovered
    };
    Ok(regime)
}

/// FWER-based estimation recovers the full proportion only for `r > 1`.
pub fn fwer_full_detection(r: f64) -> bool {
    r > 1.0
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegimeCell {
    pub nu: f64,
    pub gamma: f64,
    pub r: f64,
    pub regime: Regime,
    pub fwer_detects: bool,
}

/// Classifies a `points × points` grid for each `ν`, with
/// `γ_i = i / points` and `r_j = (j + 1/2) / points`.
pub fn regime_grid(nus: &[f64], points: usize) -> Result<Vec<RegimeCell>> {
    let mut cells = Vec::with_capacity(nus.len() * points * points);
    for &nu in nus {
        for i in 0..points {
            let gamma = i as f64 / points as f64;
            for j in 0..points {
                let r = (j as f64 + 0.5) / points as f64;
                cells.push(RegimeCell {
                    nu,
                    gamma,
                    r,
                    regime: regime_classify(RegimeQuery { nu, gamma, r })?,
                    fwer_detects: fwer_full_detection(r),
                });
            }
        }
    }
    Ok(cells)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn classify(nu: f64, gamma: f64, r: f64) -> Regime {
        regime_classify(RegimeQuery { nu, gamma, r }).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(classify(0.5, 0.7, 0.5), Regime::FullDetection);
        assert_eq!(classify(0.5, 0.7, 0.3), Regime::NoDetection);
        assert_eq!(classify(0.5, 0.75, 0.5), Regime::Boundary);
        assert_eq!(classify(1.0, 0.3, 0.01), Regime::NoDetection);
        assert_eq!(classify(1.0, 0.3, 0.99), Regime::NoDetection);
        assert!(fwer_full_detection(1.2) && !fwer_full_detection(0.9) && !fwer_full_detection(1.0));
    }

    #[test]
    fn dense_regime_and_edges() {
        assert_eq!(classify(0.0, 0.2, 0.1), Regime::FullDetection);
        assert_eq!(classify(0.0, 0.6, 0.9), Regime::NoDetection);
        assert_eq!(classify(0.25, 0.6, 0.5), Regime::FullDetection);
        assert_eq!(classify(0.25, 0.6, 0.3), Regime::NoDetection);
        assert_eq!(classify(1.0, 0.7, 0.8), Regime::FullDetection);
        assert_eq!(classify(1.0, 0.7, 0.6), Regime::NoDetection);
        assert_eq!(classify(1.0, 0.0, 0.5), Regime::NotCovered);
        assert_eq!(classify(0.75, 0.1, 0.5), Regime::NotCovered);
        assert_eq!(classify(0.75, 0.3, 0.5), Regime::NoDetection);
        assert_eq!(classify(0.75, 0.6, 0.5), Regime::NotCovered);
    }

    #[test]
    fn domain_errors() {
        assert!(regime_classify(RegimeQuery {
            nu: 1.5,
            gamma: 0.5,
            r: 0.5
        })
        .is_err());
        assert!(regime_classify(RegimeQuery {
            nu: 0.5,
            gamma: 1.0,
            r: 0.5
        })
        .is_err());
        assert!(regime_classify(RegimeQuery {
            nu: 0.5,
            gamma: 0.5,
            r: 0.0
        })
        .is_err());
    }

    #[test]
    fn grid_layout() {
        let cells = regime_grid(&[0.0, 0.5], 10).unwrap();
        assert_eq!(cells.len(), 200);
        assert_eq!(cells[0].gamma, 0.0);
        assert_eq!(cells[0].r, 0.05);
        assert_eq!(cells[199].nu, 0.5);
    }
}
