use cuspavg_core::coeffgen::sato_tate_source;
use cuspavg_core::satake::LocalParameters;
use cuspavg_core::summation::compensated_sum;
use cuspavg_core::sums::{
    default_checkpoints, degree4_aggregate, fit_loglog, holder_check, log_checkpoints, prime_sum, threshold_chains,
    PrimeWeight,
};
use cuspavg_core::{Error, LocalData, SamplerConfig};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::OnceLock;

const X: u64 = 200_000;

fn tempered() -> &'static LocalData {
    static D: OnceLock<LocalData> = OnceLock::new();
    D.get_or_init(|| sato_tate_source(&SamplerConfig { seed: 11, ..Default::default() }, X).unwrap())
}

fn mixed() -> &'static LocalData {
    static D: OnceLock<LocalData> = OnceLock::new();
    D.get_or_init(|| {
        sato_tate_source(&SamplerConfig { seed: 12, nontempered_fraction: 0.3, ..Default::default() }, X).unwrap()
    })
}

fn checkpoints() -> Vec<u64> {
    log_checkpoints(2.0, 5.0, 0.25).into_iter().filter(|&x| x <= X).collect()
}

#[test]
fn mertens_constant_is_recovered() {
    let s = prime_sum(tempered(), PrimeWeight::AbsPow(0.0), &checkpoints()).unwrap();
    for (&x, &v) in s.checkpoints.iter().zip(&s.values) {
        let m = v - (x as f64).ln().ln();
        assert!((m - 0.261_497_212_847_642_8).abs() < (x as f64).ln().powi(-2), "X = {x}: {m}");
    }
}

#[test]
fn sato_tate_moments_grow_like_catalan_numbers() {
    let cps = checkpoints();
    for (e, catalan) in [(2.0, 1.0), (4.0, 2.0), (6.0, 5.0)] {
        let fit = fit_loglog(&prime_sum(tempered(), PrimeWeight::AbsPow(e), &cps).unwrap()).unwrap();
        assert!((fit.slope - catalan).abs() < 0.15 * catalan, "e = {e}: slope {}", fit.slope);
    }
}

#[test]
fn nonnegative_series_are_monotone() {
    let cps = checkpoints();
    for w in [PrimeWeight::AbsPow(1.0), PrimeWeight::AbsPow(8.0), PrimeWeight::Above(1.5), PrimeWeight::AdjointSq] {
        let s = prime_sum(mixed(), w, &cps).unwrap();
        assert!(s.values.windows(2).all(|v| v[0] <= v[1]), "{}", s.descriptor);
    }
}

#[test]
fn degree4_identity_holds_on_aggregate() {
    let agg = degree4_aggregate(mixed(), &checkpoints()).unwrap();
    assert!(agg.max_relative_residual < 1e-10, "{}", agg.max_relative_residual);
}

#[test]
fn holder_holds_for_independent_samples() {
    let c = holder_check(tempered(), mixed(), &checkpoints()).unwrap();
    assert!(c.holds(), "slack {}", c.min_slack);
}

#[test]
fn checkpoint_past_data_is_rejected() {
    let err = prime_sum(tempered(), PrimeWeight::AbsPow(1.0), &[1000, X + 1]).unwrap_err();
    assert!(matches!(err, Error::CheckpointBeyondData { .. }));
    assert!(prime_sum(tempered(), PrimeWeight::AbsPow(1.0), &[1000, 1000]).is_err());
    assert!(default_checkpoints().windows(2).all(|w| w[0] < w[1]));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn threshold_chains_hold_for_any_r(r in 2.0f64..12.0) {
        for c in threshold_chains(mixed(), r, &checkpoints()).unwrap() {
            prop_assert!(c.holds(), "{}: slack {}", c.name, c.min_slack);
        }
    }

    #[test]
    fn prime_sums_are_order_independent(seed in any::<u64>(), e in 0.0f64..8.0) {
        let terms: Vec<f64> = mixed()
            .unramified_upto(X)
            .map(|c| c.power_sum(1).norm().powf(e) / c.prime() as f64)
            .collect();
        let mut shuffled = terms.clone();
        shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let a = compensated_sum(terms.iter().copied());
        let b = compensated_sum(shuffled);
        prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0));
        let s = prime_sum(mixed(), PrimeWeight::AbsPow(e), &[X]).unwrap();
        prop_assert!((s.last() - a).abs() <= 1e-9 * a.abs().max(1.0));
    }
}
