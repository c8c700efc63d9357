//! Sequential against rayon-parallel execution on the checking workloads.
//! Without the `parallel` feature both variants run sequentially.

use std::hint::black_box;
use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use degbound::exec::Execution;
use degbound::model::{GenericInstance, ProblemInstance};
use degbound::oracle::sweep::{
    bipartite_sandwich_sweep, generic_claim_sweep, generic_sandwich_sweep, ClaimConfig,
    SandwichConfig,
};
use degbound::oracle::{count_class, DEFAULT_NODE_BUDGET};
use degbound::DegreeSequence;

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn sandwich(c: &mut Criterion) {
    let mut group = c.benchmark_group("sandwich");
    group
        .sample_size(10)
        .measurement_time(Duration::from_secs(20));
    for (name, exec) in MODES {
        let cfg = SandwichConfig {
            max_vertices: 6,
            max_total: 10,
            exec,
            ..SandwichConfig::generic_default()
        };
        group.bench_with_input(
            BenchmarkId::new("generic n≤6 sum≤10", name),
            &cfg,
            |b, cfg| b.iter(|| black_box(generic_sandwich_sweep(cfg))),
        );
        let cfg = SandwichConfig {
            exec,
            ..SandwichConfig::bipartite_default()
        };
        group.bench_with_input(
            BenchmarkId::new("bipartite default", name),
            &cfg,
            |b, cfg| b.iter(|| black_box(bipartite_sandwich_sweep(cfg))),
        );
    }
    group.finish();
}

fn claims(c: &mut Criterion) {
    let mut group = c.benchmark_group("claims");
    group.sample_size(10);
    for (name, exec) in MODES {
        let cfg = ClaimConfig {
            exec,
            ..ClaimConfig::generic_default()
        };
        group.bench_with_input(BenchmarkId::new("generic default", name), &cfg, |b, cfg| {
            b.iter(|| black_box(generic_claim_sweep(cfg)))
        });
    }
    group.finish();
}

fn enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("count_class");
    group.sample_size(10);
    let inst =
        ProblemInstance::Generic(GenericInstance::free(DegreeSequence::generic(vec![3; 10])));
    for (name, exec) in MODES {
        group.bench_with_input(
            BenchmarkId::new("3-regular n=10", name),
            &exec,
            |b, &exec| b.iter(|| black_box(count_class(&inst, DEFAULT_NODE_BUDGET, exec).unwrap())),
        );
    }
    group.finish();
}

criterion_group!(benches, sandwich, claims, enumeration);
criterion_main!(benches);
