use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use ratio_shapley::game::weighted_sqrt_game;
use ratio_shapley::rewards::check_stability_with;
use ratio_shapley::valuation::{shapley_exact, shapley_exact_with, shapley_monte_carlo_with};
use ratio_shapley::{Execution, Game, Scheme};

const STRATEGIES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn game(n: usize) -> Game {
    let weights: Vec<f64> = (1..=n).map(|k| k as f64).collect();
    weighted_sqrt_game(&weights)
}

fn exact(c: &mut Criterion) {
    let mut group = c.benchmark_group("shapley_exact");
    group.sample_size(10);
    for n in [10, 12, 14, 16] {
        let g = game(n);
        group.throughput(Throughput::Elements(1 << n));
        for (name, exec) in STRATEGIES {
            group.bench_with_input(BenchmarkId::new(name, n), &g, |b, g| {
                b.iter(|| shapley_exact_with(black_box(g), Scheme::Ratio, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn monte_carlo(c: &mut Criterion) {
    let mut group = c.benchmark_group("shapley_monte_carlo");
    group.sample_size(10);
    let g = game(12);
    for samples in [10_000, 100_000] {
        group.throughput(Throughput::Elements(samples as u64));
        for (name, exec) in STRATEGIES {
            group.bench_with_input(BenchmarkId::new(name, samples), &samples, |b, &s| {
                b.iter(|| shapley_monte_carlo_with(&g, Scheme::Ratio, s, 7, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn stability(c: &mut Criterion) {
    let mut group = c.benchmark_group("stability_scan");
    group.sample_size(10);
    for n in [12, 16] {
        let g = game(n);
        let phi = shapley_exact(&g, Scheme::Ratio).unwrap();
        group.throughput(Throughput::Elements(1 << n));
        for (name, exec) in STRATEGIES {
            group.bench_with_input(BenchmarkId::new(name, n), &n, |b, _| {
                b.iter(|| check_stability_with(&g, &phi, 0.5, exec).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, exact, monte_carlo, stability);
criterion_main!(benches);
