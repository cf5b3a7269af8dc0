use cuspavg_core::coeffgen::{delta_source, ramanujan_tau, DELTA_LIMIT};
use cuspavg_core::primes::primes_up_to;
use num_bigint::BigInt;

/// `q·Π_{m≥1}(1 − q^m)^24` expanded literally with big integers.
fn eta_product(n: usize) -> Vec<BigInt> {
    let mut c = vec![BigInt::from(0); n];
    c[0] = BigInt::from(1);
    for m in 1..n {
        for _ in 0..24 {
            for k in (m..n).rev() {
                let prev = c[k - m].clone();
                c[k] -= prev;
            }
        }
    }
    let mut tau = vec![BigInt::from(0); n + 1];
    tau[1..].clone_from_slice(&c);
    tau
}

#[test]
fn recurrence_matches_literal_product() {
    let n = 400;
    let oracle = eta_product(n);
    let tau = ramanujan_tau(n as u64).unwrap();
    for k in 1..=n {
        assert_eq!(BigInt::from(tau[k]), oracle[k], "tau({k})");
    }
}

#[test]
fn hecke_relations_at_primes() {
    let tau = ramanujan_tau(1_000_000).unwrap();
    for p in primes_up_to(1000) {
        let p = p as usize;
        let p11 = (p as i128).pow(11);
        assert_eq!(tau[p * p], tau[p] * tau[p] - p11, "tau({p}^2)");
        if p * p * p <= 1_000_000 {
            assert_eq!(tau[p * p * p], tau[p] * tau[p * p] - p11 * tau[p], "tau({p}^3)");
        }
    }
    for (m, n) in [(999_983, 1), (2, 499_979), (997, 1003), (1000, 999)] {
        assert_eq!(tau[m * n], tau[m] * tau[n], "tau({m}·{n})");
    }
}

#[test]
fn deligne_bound_and_normalization() {
    let table = delta_source(100_000).unwrap();
    for p in primes_up_to(100_000) {
        assert!(table.get(p as usize).norm() <= 2.0, "p = {p}");
    }
    assert!((table.get(2).re + 24.0 / 2f64.powf(5.5)).abs() < 1e-15);
    assert!(ramanujan_tau(DELTA_LIMIT + 1).is_err());
}
