use std::path::PathBuf;

use crate::bounding::{BoundingFunction, SequenceMethod};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{name} = {value} is outside its domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("sample size n = {n} is too small: {reason}")]
    SampleSize { n: usize, reason: &'static str },

    #[error("interval ({lo}, {hi}) is not a nondegenerate subinterval of [0, 1]")]
    Interval { lo: f64, hi: f64 },

    #[error("{method} bounding sequence cannot be used with the {delta} bounding function")]
    Incompatible {
        method: SequenceMethod,
        delta: BoundingFunction,
    },

    #[error(
        "{replicates} replicates cannot resolve the {alpha} upper quantile; \
         use at least {needed} replicates"
    )]
    TooFewReplicates {
        replicates: usize,
        alpha: f64,
        needed: usize,
    },

    #[error("monte carlo bounding sequence requires replicate count and seed")]
    MissingCalibration,

    #[error("invalid p-value sample: {0}")]
    InvalidSample(String),

    #[error("calibration cache {} is unreadable: {reason}", path.display())]
    CorruptCache { path: PathBuf, reason: String },

    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, domain: &'static str) -> Self {
        Error::Domain {
            name,
            value,
            domain,
        }
    }
}

/// Checks that `alpha` is a probability strictly inside (0, 1).
pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::domain("alpha", alpha, "(0, 1)"))
    }
}
