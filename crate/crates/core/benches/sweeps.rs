//! Sequential vs parallel sweeps over the randomized suites.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use grassblow::grassmann::Params;
use grassblow::par::Strategy;
use grassblow::suites::{check_diagram, check_round_trip, check_strata, SampleConfig};

const STRATEGIES: [(&str, Strategy); 2] = [("sequential", Strategy::Sequential), ("parallel", Strategy::Parallel)];

fn cfg(samples: usize, strategy: Strategy) -> SampleConfig {
    SampleConfig { samples, seed: 17, strategy }
}

fn round_trip(c: &mut Criterion) {
    let par = Params::new(3, 2, 5).unwrap();
    let mut g = c.benchmark_group("round_trip_3_2_5");
    g.sample_size(10);
    for (name, s) in STRATEGIES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &s, |b, &s| {
            b.iter(|| black_box(check_round_trip(&par, &cfg(40, s))))
        });
    }
    g.finish();
}

fn diagram(c: &mut Criterion) {
    let mut g = c.benchmark_group("diagram_2_4");
    g.sample_size(10);
    for (name, s) in STRATEGIES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &s, |b, &s| {
            b.iter(|| black_box(check_diagram(2, 4, &cfg(100, s))))
        });
    }
    g.finish();
}

fn strata(c: &mut Criterion) {
    let par = Params::new(4, 3, 6).unwrap();
    let mut g = c.benchmark_group("strata_4_3_6");
    g.sample_size(10);
    for (name, s) in STRATEGIES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &s, |b, &s| {
            b.iter(|| black_box(check_strata(&par, &cfg(100, s))))
        });
    }
    g.finish();
}

criterion_group!(benches, round_trip, diagram, strata);
criterion_main!(benches);
