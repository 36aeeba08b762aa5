//! Fixtures shared by the benchmarks in `benches/`.

use nullprop_core::rng::{replicate_rng, sorted_uniforms};
use nullprop_core::PValueSample;

/// Sorted null p-values with the first `signal` entries pushed towards 0.
pub fn fixture(n: usize, signal: usize, seed: u64) -> PValueSample {
    let mut values = Vec::with_capacity(n);
    sorted_uniforms(&mut replicate_rng(seed, 0), n, &mut values);
    for v in values.iter_mut().take(signal) {
        *v *= 1e-3;
    }
    PValueSample::new(values, "bench").expect("uniforms lie in [0, 1]")
}
