//! Seeded random streams.
//!
//! Every Monte Carlo replicate draws from its own ChaCha20 stream, selected by
//! the replicate index under a common seed. Results therefore do not depend on
//! how replicates are scheduled across worker threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::Exp1;

/// Identifies the generator and the derivation of per-replicate streams.
/// Stored in calibration caches so entries can be checked for reproducibility.
pub const GENERATOR_TAG: &str = "chacha20/seed_from_u64/stream=replicate/exp-spacings/v1";

/// The generator for replicate `stream` under `seed`.
pub fn replicate_rng(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Fills `out` with `n` sorted i.i.d. uniform(0, 1) variates.
///
/// Uses normalized exponential spacings: with partial sums `S_i` of i.i.d.
/// Exp(1) variables, `(S_1, ..., S_n) / S_{n+1}` has the joint law of the
/// uniform order statistics. No sort is needed.
pub fn sorted_uniforms<R: Rng + ?Sized>(rng: &mut R, n: usize, out: &mut Vec<f64>) {
    out.clear();
    out.reserve(n);
    let mut sum = 0.0;
    for _ in 0..n {
        let e: f64 = rng.sample(Exp1);
        sum += e;
        out.push(sum);
    }
    let e: f64 = rng.sample(Exp1);
    let total = sum + e;
    for u in out.iter_mut() {
        *u /= total;
    }
}
