use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use plumbing_core::corpus;
use plumbing_core::opt::{min_chi_box, min_chi_positive};
use plumbing_core::{Cycle, ExecMode, SearchOptions, Strategy};

const MODES: [(&str, ExecMode); 2] = [("sequential", ExecMode::Sequential), ("parallel", ExecMode::Parallel)];

fn exhaustive_box(c: &mut Criterion) {
    let lat = corpus::lattice("e8").unwrap();
    let base = lat.class_from_estar(&[1, -2, 0, 1, 0, -1, 2, 0]).unwrap();
    let bound = Cycle::new(vec![5; 8]);
    let mut group = c.benchmark_group("exhaustive_e8");
    group.sample_size(10);
    for (name, mode) in MODES {
        let opts = SearchOptions::sequential().with_mode(mode).with_strategy(Strategy::Exhaustive);
        group.bench_with_input(BenchmarkId::from_parameter(name), &opts, |b, opts| {
            b.iter(|| min_chi_box(&lat, &base, &bound, opts).unwrap())
        });
    }
    group.finish();
}

fn branch_and_bound(c: &mut Criterion) {
    let lat = corpus::lattice("star237").unwrap();
    let mut group = c.benchmark_group("positive_star237");
    for (name, mode) in MODES {
        let opts = SearchOptions::sequential().with_mode(mode).with_strategy(Strategy::BranchAndBound);
        group.bench_with_input(BenchmarkId::from_parameter(name), &opts, |b, opts| {
            b.iter(|| min_chi_positive(&lat, opts).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, exhaustive_box, branch_and_bound);
criterion_main!(benches);
