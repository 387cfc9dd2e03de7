use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qbet_bench::{betting_game, channel, pmf, povm};
use qbet_core::{
    alpha_measure, numeric_optimal_ice, renyi_capacity, renyi_entropy, robustness_informativeness, Order,
    RiskParam,
};

fn entropy(c: &mut Criterion) {
    let mut g = c.benchmark_group("renyi_entropy");
    for n in [4, 16, 64] {
        let p = pmf(n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &p, |b, p| {
            b.iter(|| renyi_entropy(black_box(p), Order::new(2.0).unwrap()))
        });
    }
    g.finish();
}

fn capacity(c: &mut Criterion) {
    let mut g = c.benchmark_group("renyi_capacity");
    let ch = channel(4, 4);
    for a in [-2.0, 0.5, 2.0] {
        let alpha = Order::new(a).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(a), &alpha, |b, &alpha| {
            b.iter(|| renyi_capacity(black_box(&ch), alpha))
        });
    }
    g.finish();
}

fn numeric_ice(c: &mut Criterion) {
    let mut g = c.benchmark_group("numeric_optimal_ice");
    let (odds, dist) = betting_game(4, 3);
    for r in [-1.0, 0.5, 1.0, 2.0] {
        let risk = RiskParam::new(r).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(r), &risk, |b, &risk| {
            b.iter(|| numeric_optimal_ice(black_box(&odds), black_box(&dist), risk))
        });
    }
    g.finish();
}

fn resource(c: &mut Criterion) {
    let m = povm(2, 3);
    c.bench_function("robustness/qubit", |b| b.iter(|| robustness_informativeness(black_box(&m))));
    let mut g = c.benchmark_group("alpha_measure");
    g.sample_size(10);
    for a in [0.5, 2.0] {
        let alpha = Order::new(a).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(a), &alpha, |b, &alpha| {
            b.iter(|| alpha_measure(black_box(&m), alpha))
        });
    }
    g.finish();
}

criterion_group!(benches, entropy, capacity, numeric_ice, resource);
criterion_main!(benches);
