//! Monte Carlo bounding sequences over restricted intervals.
//!
//! `β` is the smallest value whose empirical exceedance probability by
//! `V = sup_{t ∈ (a,b)} (U_n(t) - t) / δ(t)` is at most `α`, estimated from
//! seeded replicates of the uniform empirical process.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounding::BoundingFunction;
use crate::error::{check_alpha, Error, Result};
use crate::rng::{replicate_rng, sorted_uniforms, GENERATOR_TAG};
use crate::sample::{jump_points, Interval};

/// Minimum replicate count accepted by [`calibrate_beta`].
pub const MIN_REPLICATES: usize = 100;

/// Version of the cache file layout.
pub const CACHE_SCHEMA_VERSION: u32 = 1;

/// `(count/n - t) / δ(t)`, with the `t -> 0+` limit where `δ(0) = 0`.
#[inline]
fn excursion(delta: BoundingFunction, count: usize, n: usize, t: f64) -> f64 {
    let d = delta.eval_unchecked(t);
    let step = count as f64 / n as f64;
    if d > 0.0 {
        (step - t) / d
    } else if step > t {
        f64::INFINITY
    } else {
        // -t/δ(t) as t -> 0+: -1 for the linear function, 0 for stddev.
        match delta {
            BoundingFunction::Linear => -1.0,
            _ => 0.0,
        }
    }
}

/// Supremum of `(U_n(t) - t) / δ(t)` over `t ∈ (a, b)` for a sorted sample.
///
/// Evaluated at the left endpoint (as `t -> a+`, with step value `U_n(a)`)
/// and at every order statistic inside the interval. The weighted process
/// decreases between jumps for all three bounding functions, so this is the
/// exact supremum. With no order statistic inside, only the left endpoint
/// remains.
pub fn weighted_sup_stat(sorted: &[f64], delta: BoundingFunction, interval: Interval) -> f64 {
    let n = sorted.len();
    jump_points(sorted, interval)
        .map(|(t, count)| excursion(delta, count, n, t))
        .fold(f64::NEG_INFINITY, f64::max)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CalibrationRequest {
    pub n: usize,
    pub delta: BoundingFunction,
    pub interval: Interval,
    pub alpha: f64,
    pub replicates: usize,
    pub seed: u64,
}

impl CalibrationRequest {
    pub fn validate(&self) -> Result<()> {
        check_alpha(self.alpha)?;
        Interval::new(self.interval.lo, self.interval.hi)?;
        if self.n == 0 {
            return Err(Error::SampleSize {
                n: 0,
                reason: "need at least one observation",
            });
        }
        if exceedance_budget(self.alpha, self.replicates) == 0 || self.replicates < MIN_REPLICATES {
            return Err(Error::TooFewReplicates {
                replicates: self.replicates,
                alpha: self.alpha,
                needed: MIN_REPLICATES.max((1.0 / self.alpha).ceil() as usize),
            });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub beta: f64,
    /// Fraction of replicates whose statistic strictly exceeds `beta`.
    pub achieved_level: f64,
    pub replicates: usize,
}

/// `floor(α R)`: how many replicates may exceed the calibrated value.
fn exceedance_budget(alpha: f64, replicates: usize) -> usize {
    (alpha * replicates as f64 + 1e-9).floor() as usize
}

/// Simulates the sup statistic for replicates `0..replicates` of `req`,
/// returned in replicate order.
///
/// Replicate `r` always uses stream `r` under `req.seed`, so requests that
/// differ only in interval, `α` or bounding function share one realization of
/// the uniform samples.
pub fn simulate_sup_stats(req: &CalibrationRequest) -> Vec<f64> {
    (0..req.replicates as u64)
        .into_par_iter()
        .map_init(Vec::new, |buf, r| {
            let mut rng = replicate_rng(req.seed, r);
            sorted_uniforms(&mut rng, req.n, buf);
            weighted_sup_stat(buf, req.delta, req.interval)
        })
        .collect()
}

/// Picks the conservative upper quantile from simulated statistics: the
/// `(R - floor(α R))`-th order statistic.
pub fn beta_from_stats(mut stats: Vec<f64>, alpha: f64) -> Result<Calibration> {
    check_alpha(alpha)?;
    let r = stats.len();
    let budget = exceedance_budget(alpha, r);
    if budget == 0 {
        return Err(Error::TooFewReplicates {
            replicates: r,
            alpha,
            needed: (1.0 / alpha).ceil() as usize,
        });
    }
    stats.sort_by(f64::total_cmp);
    let beta = stats[r - budget - 1];
    let exceed = stats.iter().filter(|&&s| s > beta).count();
    Ok(Calibration {
        beta,
        achieved_level: exceed as f64 / r as f64,
        replicates: r,
    })
}

/// Calibrates `β` for `req`. Deterministic given the seed, independent of the
/// number of worker threads.
pub fn calibrate_beta(req: &CalibrationRequest) -> Result<Calibration> {
    req.validate()?;
    beta_from_stats(simulate_sup_stats(req), req.alpha)
}

/// A stored calibration result.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CalibrationEntry {
    pub n: usize,
    pub delta_kind: BoundingFunction,
    pub a: f64,
    pub b: f64,
    pub alpha: f64,
    pub replicates: usize,
    pub seed: u64,
    pub beta: f64,
    pub achieved_level: f64,
}

impl CalibrationEntry {
    pub fn new(req: &CalibrationRequest, cal: &Calibration) -> Self {
        CalibrationEntry {
            n: req.n,
            delta_kind: req.delta,
            a: req.interval.lo,
            b: req.interval.hi,
            alpha: req.alpha,
            replicates: cal.replicates,
            seed: req.seed,
            beta: cal.beta,
            achieved_level: cal.achieved_level,
        }
    }

    fn key(&self) -> CacheKey {
        CacheKey::new(self.n, self.delta_kind, self.a, self.b, self.alpha)
    }
}

/// Exact-match key. Reals compare by their 12-significant-digit decimal form.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct CacheKey {
    n: usize,
    delta: BoundingFunction,
    a: String,
    b: String,
    alpha: String,
}

fn sig12(x: f64) -> String {
    format!("{x:.11e}")
}

impl CacheKey {
    fn new(n: usize, delta: BoundingFunction, a: f64, b: f64, alpha: f64) -> Self {
        CacheKey {
            n,
            delta,
            a: sig12(a),
            b: sig12(b),
            alpha: sig12(alpha),
        }
    }

    fn of_request(req: &CalibrationRequest) -> Self {
        CacheKey::new(
            req.n,
            req.delta,
            req.interval.lo,
            req.interval.hi,
            req.alpha,
        )
    }
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    schema_version: u32,
    generator: String,
    entries: Vec<CalibrationEntry>,
}

/// Calibrated sequences keyed by `(n, δ, a, b, α)`.
///
/// At most one entry is kept per key: the one with the most replicates.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CalibrationTable {
    entries: BTreeMap<CacheKey, CalibrationEntry>,
}

impl CalibrationTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = &CalibrationEntry> {
        self.entries.values()
    }

    pub fn get(&self, req: &CalibrationRequest) -> Option<&CalibrationEntry> {
        self.entries.get(&CacheKey::of_request(req))
    }

    /// Stores `entry` unless an entry with at least as many replicates is
    /// already present. Returns whether the table changed.
    pub fn put(&mut self, entry: CalibrationEntry) -> bool {
        let key = entry.key();
        match self.entries.get(&key) {
            Some(old) if old.replicates >= entry.replicates => false,
            _ => {
                self.entries.insert(key, entry);
                true
            }
        }
    }

    /// Returns a stored entry with at least `req.replicates` replicates, or
    /// calibrates and stores a new one.
    pub fn get_or_calibrate(&mut self, req: &CalibrationRequest) -> Result<CalibrationEntry> {
        req.validate()?;
        if let Some(hit) = self.get(req).filter(|e| e.replicates >= req.replicates) {
            return Ok(hit.clone());
        }
        let entry = CalibrationEntry::new(req, &calibrate_beta(req)?);
        self.put(entry.clone());
        Ok(entry)
    }

    pub fn to_json(&self) -> String {
        let file = CacheFile {
            schema_version: CACHE_SCHEMA_VERSION,
            generator: GENERATOR_TAG.to_string(),
            entries: self.entries.values().cloned().collect(),
        };
        serde_json::to_string_pretty(&file).expect("cache serialization cannot fail")
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, String> {
        let file: CacheFile = serde_json::from_str(text).map_err(|e| e.to_string())?;
        if file.schema_version != CACHE_SCHEMA_VERSION {
            return Err(format!(
                "unsupported schema version {}",
                file.schema_version
            ));
        }
        if file.generator != GENERATOR_TAG {
            return Err(format!(
                "entries were produced by generator `{}`, expected `{GENERATOR_TAG}`",
                file.generator
            ));
        }
        let mut table = CalibrationTable::new();
        for entry in file.entries {
            table.put(entry);
        }
        Ok(table)
    }

    /// Loads a cache file. A missing file yields an empty table; a file that
    /// does not parse is refused.
    pub fn load(path: &Path) -> Result<Self> {
        let text = match fs::read_to_string(path) {
            Ok(text) => text,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Self::new()),
            Err(source) => {
                return Err(Error::Io {
                    path: path.to_path_buf(),
                    source,
                })
            }
        };
        Self::from_json(&text).map_err(|reason| Error::CorruptCache {
            path: path.to_path_buf(),
            reason,
        })
    }

    /// Writes the table by atomically replacing `path`.
    pub fn save(&self, path: &Path) -> Result<()> {
        let io_err = |source| Error::Io {
            path: path.to_path_buf(),
            source,
        };
        let dir = match path.parent() {
            Some(p) if !p.as_os_str().is_empty() => p,
            _ => Path::new("."),
        };
        let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
        tmp.write_all(self.to_json().as_bytes()).map_err(io_err)?;
        tmp.write_all(b"\n").map_err(io_err)?;
        tmp.persist(path).map_err(|e| io_err(e.error))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use BoundingFunction::*;

    #[test]
    fn sup_stat_hand_enumerations() {
        // max(1/2 - 0.2, 1 - 0.4)
        assert!((weighted_sup_stat(&[0.2, 0.4], Constant, Interval::UNIT) - 0.6).abs() < 1e-15);
        assert_eq!(weighted_sup_stat(&[0.5], Constant, Interval::UNIT), 0.5);
        // Both jumps give 0.25 / sqrt(0.1875) = 1/sqrt(3).
        let v = weighted_sup_stat(&[0.25, 0.75], Stddev, Interval::UNIT);
        assert!((v - 0.577_350_269_189_625_8).abs() < 1e-15);
    }

    #[test]
    fn sup_stat_empty_interval_uses_left_endpoint() {
        let iv = Interval::new(0.3, 0.6).unwrap();
        // One point below 0.3: step value 1/2 at t = 0.3+.
        let v = weighted_sup_stat(&[0.1, 0.9], Constant, iv);
        assert!((v - 0.2).abs() < 1e-15);
        let v = weighted_sup_stat(&[0.7, 0.9], Linear, iv);
        assert!((v + 1.0).abs() < 1e-15);
    }

    #[test]
    fn sup_stat_limits_at_zero() {
        assert_eq!(
            weighted_sup_stat(&[0.9], Stddev, Interval::new(0.0, 0.5).unwrap()),
            0.0
        );
        assert_eq!(
            weighted_sup_stat(&[0.9], Linear, Interval::new(0.0, 0.5).unwrap()),
            -1.0
        );
        assert_eq!(
            weighted_sup_stat(&[0.0, 0.9], Stddev, Interval::new(0.0, 0.5).unwrap()),
            f64::INFINITY
        );
    }

    fn request(interval: Interval, alpha: f64, replicates: usize, seed: u64) -> CalibrationRequest {
        CalibrationRequest {
            n: 200,
            delta: Stddev,
            interval,
            alpha,
            replicates,
            seed,
        }
    }

    #[test]
    fn calibration_is_deterministic_and_conservative() {
        let req = request(Interval::truncated(200).unwrap(), 0.05, 1000, 7);
        let a = calibrate_beta(&req).unwrap();
        let b = calibrate_beta(&req).unwrap();
        assert_eq!(a.beta.to_bits(), b.beta.to_bits());
        assert!(a.achieved_level <= 0.05);
        assert_eq!(a.replicates, 1000);
    }

    #[test]
    fn calibration_independent_of_thread_count() {
        let req = request(Interval::truncated(200).unwrap(), 0.05, 400, 99);
        let serial = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let wide = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap();
        let a = serial.install(|| calibrate_beta(&req).unwrap());
        let b = wide.install(|| calibrate_beta(&req).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn too_few_replicates_is_an_error() {
        let req = request(Interval::UNIT, 0.05, 10, 1);
        assert!(matches!(
            calibrate_beta(&req),
            Err(Error::TooFewReplicates { .. })
        ));
        let req = request(Interval::UNIT, 0.001, 500, 1);
        assert!(matches!(
            calibrate_beta(&req),
            Err(Error::TooFewReplicates { .. })
        ));
        assert!(beta_from_stats(vec![1.0; 10], 0.05).is_err());
    }

    #[test]
    fn quantile_convention() {
        // 100 stats 1..=100, alpha 0.05: the 95th order statistic.
        let stats: Vec<f64> = (1..=100).rev().map(|i| i as f64).collect();
        let c = beta_from_stats(stats, 0.05).unwrap();
        assert_eq!(c.beta, 95.0);
        assert_eq!(c.achieved_level, 0.05);
    }

    fn entry(replicates: usize, beta: f64) -> CalibrationEntry {
        CalibrationEntry {
            n: 200,
            delta_kind: Stddev,
            a: 1.0 / 200.0,
            b: 1.0 - 1.0 / 200.0,
            alpha: 0.05,
            replicates,
            seed: 1,
            beta,
            achieved_level: 0.05,
        }
    }

    #[test]
    fn cache_policy() {
        let mut table = CalibrationTable::new();
        let req = request(Interval::truncated(200).unwrap(), 0.05, 1000, 3);
        assert!(table.get(&req).is_none());
        assert!(table.put(entry(1000, 0.2)));
        assert_eq!(table.get(&req).unwrap().beta, 0.2);
        assert!(!table.put(entry(500, 0.3)));
        assert!(!table.put(entry(1000, 0.3)));
        assert_eq!(table.get(&req).unwrap().beta, 0.2);
        assert!(table.put(entry(2000, 0.25)));
        assert_eq!(table.get(&req).unwrap().beta, 0.25);
        assert_eq!(table.len(), 1);
    }

    #[test]
    fn cache_keys_round_to_twelve_digits() {
        let mut table = CalibrationTable::new();
        table.put(entry(1000, 0.2));
        let mut req = request(Interval::truncated(200).unwrap(), 0.05, 1000, 3);
        req.interval.lo += 1e-16;
        assert!(table.get(&req).is_some());
        req.interval.lo += 1e-9;
        assert!(table.get(&req).is_none());
    }

    #[test]
    fn cache_file_round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.json");
        assert!(CalibrationTable::load(&path).unwrap().is_empty());
        let mut table = CalibrationTable::new();
        table.put(entry(1000, 0.2));
        table.save(&path).unwrap();
        assert_eq!(CalibrationTable::load(&path).unwrap(), table);

        let awkward = 0.22270975817241914;
        table.put(entry(3000, awkward));
        let back = CalibrationTable::from_json(&table.to_json()).unwrap();
        assert_eq!(
            back.entries().next().unwrap().beta.to_bits(),
            awkward.to_bits()
        );

        fs::write(&path, "{ not json").unwrap();
        match CalibrationTable::load(&path) {
            Err(Error::CorruptCache { path: p, .. }) => assert_eq!(p, path),
            other => panic!("expected corrupt cache error, got {other:?}"),
        }
        let foreign = table.to_json().replace(GENERATOR_TAG, "pcg64");
        fs::write(&path, foreign).unwrap();
        assert!(matches!(
            CalibrationTable::load(&path),
            Err(Error::CorruptCache { .. })
        ));
    }

    #[test]
    fn get_or_calibrate_reuses_entries() {
        let mut table = CalibrationTable::new();
        let req = request(Interval::truncated(200).unwrap(), 0.05, 200, 5);
        let first = table.get_or_calibrate(&req).unwrap();
        let again = table
            .get_or_calibrate(&CalibrationRequest { seed: 6, ..req })
            .unwrap();
        assert_eq!(first, again);
        let more = table
            .get_or_calibrate(&CalibrationRequest {
                replicates: 400,
                ..req
            })
            .unwrap();
        assert_eq!(more.replicates, 400);
        assert_eq!(table.len(), 1);
    }
}
