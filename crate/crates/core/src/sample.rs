//! P-value samples, intervals, and the empirical distribution function.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A sorted collection of p-values in [0, 1].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PValueSample {
    values: Vec<f64>,
    source: String,
}

impl PValueSample {
    /// Validates and sorts `values`. Values exactly 0 or 1 are accepted.
    pub fn new(mut values: Vec<f64>, source: impl Into<String>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidSample("sample is empty".into()));
        }
        if let Some((i, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(0.0..=1.0).contains(*v))
        {
            return Err(Error::InvalidSample(format!(
                "value {v} at position {i} is not in [0, 1]"
            )));
        }
        values.sort_by(f64::total_cmp);
        Ok(PValueSample {
            values,
            source: source.into(),
        })
    }

    /// Wraps values that are already known to be sorted and inside [0, 1].
    pub(crate) fn from_sorted_unchecked(values: Vec<f64>, source: impl Into<String>) -> Self {
        debug_assert!(values.windows(2).all(|w| w[0] <= w[1]));
        PValueSample {
            values,
            source: source.into(),
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    /// Right-continuous empirical distribution function `F_n(t)`.
    pub fn ecdf(&self, t: f64) -> f64 {
        count_le(&self.values, t) as f64 / self.n() as f64
    }
}

/// An interval `(lo, hi)` with `0 <= lo < hi <= 1` over which suprema are taken.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const UNIT: Interval = Interval { lo: 0.0, hi: 1.0 };

    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_finite() && hi.is_finite() && 0.0 <= lo && lo < hi && hi <= 1.0 {
            Ok(Interval { lo, hi })
        } else {
            Err(Error::Interval { lo, hi })
        }
    }

    /// `(1/n, 1 - 1/n)`, which is only nondegenerate for `n >= 3`.
    pub fn truncated(n: usize) -> Result<Self> {
        let inv = 1.0 / n as f64;
        Interval::new(inv, 1.0 - inv)
    }

    pub fn contains_open(&self, t: f64) -> bool {
        self.lo < t && t < self.hi
    }
}

/// Number of entries of sorted `values` that are `<= t`.
pub(crate) fn count_le(values: &[f64], t: f64) -> usize {
    values.partition_point(|&v| v <= t)
}

/// Candidate points of a supremum of `F_n(t) - t` style functionals over an
/// interval, as `(t, count)` with `count = n F_n(t)`.
///
/// The first candidate is the left endpoint, carrying the step value
/// `F_n(lo)`; it stands for the limit `t -> lo+`. Then each distinct order
/// statistic strictly inside the interval, with the post-jump count (a k-fold
/// tie jumps by k). Every functional used in this crate is nonincreasing
/// between jumps, so the supremum over `[lo, hi)` is attained at one of these
/// points.
pub(crate) fn jump_points(sorted: &[f64], interval: Interval) -> JumpPoints<'_> {
    let start = count_le(sorted, interval.lo);
    JumpPoints {
        sorted,
        hi: interval.hi,
        lo: Some((interval.lo, start)),
        next: start,
    }
}

pub(crate) struct JumpPoints<'a> {
    sorted: &'a [f64],
    hi: f64,
    lo: Option<(f64, usize)>,
    next: usize,
}

impl Iterator for JumpPoints<'_> {
    type Item = (f64, usize);

    fn next(&mut self) -> Option<Self::Item> {
        if let Some(first) = self.lo.take() {
            return Some(first);
        }
        let t = *self.sorted.get(self.next)?;
        if t >= self.hi {
            return None;
        }
        let mut end = self.next + 1;
        while end < self.sorted.len() && self.sorted[end] == t {
            end += 1;
        }
        self.next = end;
        Some((t, end))
    }
}
