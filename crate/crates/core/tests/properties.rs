use nullprop_core::calibration::{beta_from_stats, simulate_sup_stats};
use nullprop_core::estimator::{lambda_objective, lambda_sup};
use nullprop_core::rng::{replicate_rng, sorted_uniforms};
use nullprop_core::{
    estimate_lambda, weighted_sup_stat, BoundingFunction, BoundingSequenceSpec, CalibrationRequest,
    EstimateConfig, Estimator, Interval, IntervalChoice, PValueSample,
};
use proptest::prelude::*;

fn delta_strategy() -> impl Strategy<Value = BoundingFunction> {
    prop_oneof![
        Just(BoundingFunction::Linear),
        Just(BoundingFunction::Constant),
        Just(BoundingFunction::Stddev),
    ]
}

/// P-values mixing uniform noise with values near zero.
fn pvalues(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(
        prop_oneof![3 => 0.0..=1.0f64, 1 => 0.0..1e-3f64, 1 => Just(0.5f64)],
        1..max_len,
    )
}

fn interval_strategy() -> impl Strategy<Value = Interval> {
    (0.0..0.9f64, 0.01..1.0f64).prop_map(|(lo, w)| Interval::new(lo, (lo + w).min(1.0)).unwrap())
}

fn brute_sup_stat(sorted: &[f64], delta: BoundingFunction, iv: Interval, points: usize) -> f64 {
    let n = sorted.len() as f64;
    (1..points)
        .map(|k| iv.lo + (iv.hi - iv.lo) * k as f64 / points as f64)
        .map(|t| {
            let f = sorted.partition_point(|&v| v <= t) as f64 / n;
            (f - t) / delta.eval(t).unwrap()
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn sup_stat_dominates_any_grid(
        mut v in pvalues(40),
        delta in delta_strategy(),
        iv in interval_strategy(),
    ) {
        v.sort_by(f64::total_cmp);
        let exact = weighted_sup_stat(&v, delta, iv);
        let grid = brute_sup_stat(&v, delta, iv, 2000);
        prop_assert!(grid <= exact + 1e-12, "grid {grid} > exact {exact}");
    }

    #[test]
    fn estimate_is_clamped_and_replays(
        v in pvalues(60),
        delta in delta_strategy(),
        alpha in 0.01..0.5f64,
        refine in 0usize..4,
    ) {
        let sample = PValueSample::new(v, "prop").unwrap();
        let mut cfg = EstimateConfig::analytic(delta, alpha);
        cfg.refine_grid = refine;
        if delta == BoundingFunction::Stddev {
            // Gumbel needs n >= 16; use a calibrated sequence for small samples.
            cfg.sequence = BoundingSequenceSpec::monte_carlo(alpha, 400, 1);
        }
        let r = estimate_lambda(&sample, &cfg).unwrap();
        prop_assert!((0.0..=1.0).contains(&r.lambda_hat));
        prop_assert_eq!(r.lambda_hat, r.lambda_hat_raw.clamp(0.0, 1.0));
        prop_assert!(r.argmax_t >= r.interval.lo && r.argmax_t < r.interval.hi);
        if refine == 0 {
            let replay = lambda_objective(
                delta, r.beta_used, (sample.ecdf(r.argmax_t) * sample.n() as f64).round() as usize,
                sample.n(), r.argmax_t,
            );
            prop_assert_eq!(replay, r.lambda_hat_raw);
        }
    }

    #[test]
    fn decreasing_a_pvalue_never_lowers_the_bound(
        v in pvalues(80),
        delta in delta_strategy(),
        beta in 0.01..2.0f64,
        pick in any::<prop::sample::Index>(),
        shrink in 0.0..1.0f64,
        iv in interval_strategy(),
    ) {
        let mut w = v.clone();
        let i = pick.index(w.len());
        w[i] *= shrink;
        let a = PValueSample::new(v, "a").unwrap();
        let b = PValueSample::new(w, "b").unwrap();
        let before = lambda_sup(a.values(), delta, beta, iv, 0).value;
        let after = lambda_sup(b.values(), delta, beta, iv, 0).value;
        prop_assert!(after >= before - 1e-12, "{before} -> {after}");
    }

    #[test]
    fn calibrated_beta_monotone_in_interval_and_alpha(
        lo in 0.0..0.3f64,
        hi in 0.6..1.0f64,
        shrink_lo in 0.0..0.1f64,
        shrink_hi in 0.0..0.15f64,
        delta in delta_strategy(),
        seed in any::<u64>(),
    ) {
        let outer = Interval::new(lo, hi).unwrap();
        let inner = Interval::new(lo + shrink_lo, hi - shrink_hi).unwrap();
        let req = CalibrationRequest { n: 60, delta, interval: outer, alpha: 0.05, replicates: 200, seed };
        let outer_stats = simulate_sup_stats(&req);
        let inner_stats = simulate_sup_stats(&CalibrationRequest { interval: inner, ..req });
        // Same realization replicate by replicate.
        for (i, o) in inner_stats.iter().zip(&outer_stats) {
            prop_assert!(i <= o);
        }
        let b_outer = beta_from_stats(outer_stats.clone(), 0.05).unwrap().beta;
        let b_inner = beta_from_stats(inner_stats, 0.05).unwrap().beta;
        prop_assert!(b_inner <= b_outer);
        let b_loose = beta_from_stats(outer_stats, 0.2).unwrap().beta;
        prop_assert!(b_loose <= b_outer);
    }
}

#[test]
fn coverage_holds_with_and_without_refinement() {
    // 1000 null samples at n = 200 with a calibrated stddev sequence.
    let n = 200;
    let runs = 1000u64;
    let base = EstimateConfig {
        sequence: BoundingSequenceSpec::monte_carlo(0.05, 2000, 101),
        ..EstimateConfig::analytic(BoundingFunction::Stddev, 0.05)
    };
    let coarse = Estimator::prepare(base, n, None).unwrap();
    let fine = Estimator::prepare(
        EstimateConfig {
            refine_grid: 64,
            ..base
        },
        n,
        None,
    )
    .unwrap();
    let mut buf = Vec::new();
    let (mut hits_coarse, mut hits_fine) = (0, 0);
    for r in 0..runs {
        sorted_uniforms(&mut replicate_rng(202, r), n, &mut buf);
        hits_coarse += (coarse.sup(&buf).value > 0.0) as usize;
        hits_fine += (fine.sup(&buf).value > 0.0) as usize;
    }
    let bound = 0.05 + 2.0 * (0.05f64 * 0.95 / runs as f64).sqrt();
    assert!((hits_coarse as f64 / runs as f64) <= bound, "{hits_coarse}");
    assert!((hits_fine as f64 / runs as f64) <= bound, "{hits_fine}");
}

#[test]
fn fwer_matches_bound_under_extreme_separation() {
    let n = 1000;
    let strong = 50;
    let mut buf = Vec::new();
    sorted_uniforms(&mut replicate_rng(5, 0), n - strong, &mut buf);
    // Keep the null p-values above α/n so the FWER count is exactly λ n.
    let mut v: Vec<f64> = buf.iter().map(|&u| u.max(1e-3)).collect();
    v.extend(std::iter::repeat(1e-14).take(strong));
    let sample = PValueSample::new(v, "separated").unwrap();
    let cfg = EstimateConfig::analytic(BoundingFunction::Stddev, 0.05)
        .with_interval(IntervalChoice::Full);
    let r = estimate_lambda(&sample, &cfg).unwrap();
    assert_eq!(r.fwer_lambda, 0.05);
    assert!(
        (r.lambda_hat - r.fwer_lambda).abs() <= 1.0 / n as f64,
        "{r:?}"
    );
}
