use cuspavg_core::coeffgen::{assemble, ingest_reader, sato_tate_source, LocalData, Representation, SamplerConfig};
use cuspavg_core::primes::primes_up_to;
use cuspavg_core::satake::{sym_power, LocalParameters};
use cuspavg_core::UnramifiedClass;
use proptest::prelude::*;

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn assembled_tables_are_multiplicative(seed in 0u64..1000, frac in 0.0f64..0.5) {
        let cfg = SamplerConfig { seed, nontempered_fraction: frac, ..Default::default() };
        let local = sato_tate_source(&cfg, 3000).unwrap();
        let t = assemble(&local, 3000).unwrap();
        for m in 2..60usize {
            for n in 2..50usize {
                if gcd(m, n) == 1 {
                    let d = t.get(m * n) - t.get(m) * t.get(n);
                    prop_assert!(d.norm() <= 1e-9 * (1.0 + t.get(m * n).norm()), "m = {m}, n = {n}");
                }
            }
        }
    }

    #[test]
    fn sampler_is_deterministic_and_thread_stable(seed in 0u64..10_000) {
        let cfg = SamplerConfig { seed, nontempered_fraction: 0.25, ..Default::default() };
        let a = sato_tate_source(&cfg, 5000).unwrap();
        let b = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap().install(|| sato_tate_source(&cfg, 5000).unwrap());
        prop_assert_eq!(a, b);
    }

    #[test]
    fn sampled_classes_respect_the_exponent_cap(seed in 0u64..10_000) {
        let cfg = SamplerConfig { seed, nontempered_fraction: 1.0, ..Default::default() };
        let local = sato_tate_source(&cfg, 2000).unwrap();
        for c in local.unramified_upto(2000) {
            prop_assert!(c.shape().within_bound_at(c.prime()));
        }
    }
}

#[test]
fn sym2_lift_table_matches_direct_power_sums() {
    let local = sato_tate_source(&SamplerConfig::default(), 5000).unwrap();
    let lifted = local.lifted(Representation::SymPower(2)).unwrap();
    let t = assemble(&lifted, 5000).unwrap();
    for p in primes_up_to(5000) {
        let class = local.factor(p).unwrap().class().unwrap();
        let s = sym_power(class, 2).unwrap();
        assert!((t.get(p as usize) - s.power_sum(1)).norm() < 1e-12);
    }
}

#[test]
fn ingested_file_rebuilds_coefficients() {
    let mut csv = String::from("# header comment\np,kind,param1,param2\n");
    let classes: Vec<UnramifiedClass> =
        primes_up_to(200).into_iter().map(|p| UnramifiedClass::tempered(0.1 * p as f64, p)).collect();
    for c in &classes {
        let a = c.power_sum(1).re;
        csv.push_str(&format!("{},ap,{a:.17e},\n", c.prime()));
    }
    let local = ingest_reader(csv.as_bytes(), "inline").unwrap();
    let direct = LocalData::from_classes(200, classes, "direct").unwrap();
    let (a, b) = (assemble(&local, 200).unwrap(), assemble(&direct, 200).unwrap());
    for n in 1..=200 {
        assert!((a.get(n) - b.get(n)).norm() < 1e-9, "n = {n}");
    }
    let bad = "p,kind,param1,param2\n2,ap,0.5,\n4,ap,0.1,\n";
    let err = ingest_reader(bad.as_bytes(), "bad").unwrap_err().to_string();
    assert!(err.contains("bad:3"), "{err}");
}
