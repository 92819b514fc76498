use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use zsweight::constructions::{interval_weight_set, quartic_weight_set, QuarticParams};
use zsweight::davenport::{check_dav_at_most, check_dav_at_most_with, davenport};
use zsweight::engine::{ratio_criterion, reachable_sums};
use zsweight::{GSequence, LastLevel, SearchConfig, WeightSet};
use zsweight_bench::prime_fixture;

fn reachable(c: &mut Criterion) {
    let (g, w) = prime_fixture(499, &[1, 2, 3, 496, 497, 498]);
    let x = GSequence::cyclic(&g, &[1, 7, 50, 123]).unwrap();
    c.bench_function("reachable_sums/499/len4", |b| {
        b.iter(|| reachable_sums(&g, &w, black_box(&x)).unwrap())
    });
}

fn bounded_checks(c: &mut Criterion) {
    let mut group = c.benchmark_group("check_dav_at_most");
    group.sample_size(10);
    for level in [LastLevel::Scan, LastLevel::LogDomain, LastLevel::Full] {
        let (g, w) = prime_fixture(101, &[1, 2, 5, 10, 20, 50]);
        let cfg = SearchConfig {
            last_level: level,
            ..SearchConfig::default()
        };
        group.bench_with_input(BenchmarkId::new(format!("{level:?}"), "101/k3"), &cfg, |b, cfg| {
            b.iter(|| check_dav_at_most_with(&g, &w, 3, cfg).unwrap())
        });
    }
    let (g, w) = prime_fixture(64, &[1, 63]);
    group.bench_function("davenport/64/pm1", |b| b.iter(|| davenport(&g, &w, None).unwrap()));
    group.finish();
}

fn ratio(c: &mut Criterion) {
    let w = WeightSet::symmetric(1999, 44).unwrap();
    c.bench_function("ratio_criterion/1999", |b| b.iter(|| ratio_criterion(black_box(&w)).unwrap()));
    c.bench_function("interval_weight_set/1999", |b| b.iter(|| interval_weight_set(1999).unwrap()));
}

fn quartic(c: &mut Criterion) {
    let mut group = c.benchmark_group("quartic");
    group.sample_size(10);
    group.bench_function("211/seed1", |b| {
        b.iter(|| quartic_weight_set(211, &QuarticParams::default()).unwrap())
    });
    let (g, _) = prime_fixture(211, &[1]);
    let r = quartic_weight_set(211, &QuarticParams::default()).unwrap();
    group.bench_function("verify/211/k4", |b| b.iter(|| check_dav_at_most(&g, &r.weight_set, 4).unwrap()));
    group.finish();
}

criterion_group!(benches, reachable, bounded_checks, ratio, quartic);
criterion_main!(benches);
