use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use cuspavg_core::bnb::{certify_min, BnbConfig};
use cuspavg_core::coeffgen::{assemble, ramanujan_tau, sato_tate_source};
use cuspavg_core::sums::{default_checkpoints, dirichlet_sum, prime_sum, PrimeWeight};
use cuspavg_core::weights::{suite, HFunction, HKind, SuiteConfig, Variant};
use cuspavg_core::SamplerConfig;

const X: u64 = 100_000;

fn coefficients(c: &mut Criterion) {
    let mut g = c.benchmark_group("coeffgen");
    g.sample_size(10);
    g.bench_function("ramanujan_tau_1e5", |b| b.iter(|| ramanujan_tau(black_box(X)).unwrap()));
    g.bench_function("sato_tate_source_1e5", |b| {
        b.iter(|| sato_tate_source(&SamplerConfig { seed: 7, nontempered_fraction: 0.1, ..Default::default() }, black_box(X)).unwrap())
    });
    let local = sato_tate_source(&SamplerConfig::default(), X).unwrap();
    g.bench_function("assemble_1e5", |b| b.iter(|| assemble(&local, black_box(X)).unwrap()));
    g.finish();
}

fn certification(c: &mut Criterion) {
    let mut g = c.benchmark_group("certify");
    g.sample_size(10);
    let cfg = BnbConfig::with_tol(1e-9);
    for kind in [HKind::H11, HKind::H31] {
        let f = HFunction::new(kind, Variant::Reconciled);
        g.bench_function(format!("{kind:?}"), |b| b.iter(|| certify_min(&f, 0.0, 1.0, &cfg).unwrap()));
    }
    g.bench_function("suite", |b| b.iter(|| suite(&SuiteConfig::default()).unwrap()));
    g.finish();
}

fn sums(c: &mut Criterion) {
    let mut g = c.benchmark_group("sums");
    g.sample_size(20);
    let local = sato_tate_source(&SamplerConfig::default(), X).unwrap();
    let table = assemble(&local, X).unwrap();
    let cps: Vec<u64> = default_checkpoints().into_iter().filter(|&x| x <= X).collect();
    g.bench_function("prime_sum_eighth_1e5", |b| b.iter(|| prime_sum(&local, PrimeWeight::AbsPow(8.0), &cps).unwrap()));
    g.bench_function("dirichlet_sum_1e5", |b| b.iter(|| dirichlet_sum(&table, 0.5, &cps).unwrap()));
    g.finish();
}

criterion_group!(benches, coefficients, certification, sums);
criterion_main!(benches);
