use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use hyperjump::designs::{self, InternalOptions, SubsetPolicy};
use hyperjump::{cone, Exec, LagrangianOptions};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn restarts(c: &mut Criterion) {
    let sts = designs::build_sts(9, designs::Construction::Bose, None).unwrap();
    let g = cone::build_cone(&sts.triples).graph;
    let mut group = c.benchmark_group("maximize_lagrangian_cone_sts9");
    group.sample_size(10);
    for (name, exec) in MODES {
        let opts = LagrangianOptions { restarts: 32, tol: 1e-10, seed: 1, exec };
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| hyperjump::maximize_lagrangian(&g, &opts).unwrap())
        });
    }
    group.finish();
}

fn local_subsets(c: &mut Criterion) {
    let internal = designs::build_internal_system(13, 4, &InternalOptions { exec: Exec::Sequential, ..InternalOptions::default() })
        .unwrap();
    let mut group = c.benchmark_group("check_local_subsets_t13_m4");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| designs::check_local_subsets(&internal.graph, 4, &SubsetPolicy::Exhaustive, exec))
        });
    }
    group.finish();
}

fn threshold(c: &mut Criterion) {
    let mut group = c.benchmark_group("check_tau_threshold");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| cone::check_tau_threshold(500, 3, 1000, exec)));
    }
    group.finish();
}

criterion_group!(benches, restarts, local_subsets, threshold);
criterion_main!(benches);
