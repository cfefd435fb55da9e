use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use wilf_core::counter::Counter;
use wilf_core::oracle::{count_avoiders_with, PrefixCensus};
use wilf_core::scheme::search;
use wilf_core::{Execution, PatternSet};

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn oracle_counts(c: &mut Criterion) {
    let patterns: PatternSet = "1234,1324,1243".parse().unwrap();
    let mut group = c.benchmark_group("oracle_count_n9");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| count_avoiders_with(black_box(9), &patterns, exec))
        });
    }
    group.finish();
}

fn prefix_census(c: &mut Criterion) {
    let patterns: PatternSet = "123,3412".parse().unwrap();
    let mut group = c.benchmark_group("prefix_census_h9");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| PrefixCensus::new_with(&patterns, black_box(9), 3, exec))
        });
    }
    group.finish();
}

fn scheme_sequence(c: &mut Criterion) {
    let patterns: PatternSet = "1234,1324,1243".parse().unwrap();
    let scheme = search(&patterns, 4).unwrap().scheme().unwrap();
    let counter = Counter::new(&scheme).unwrap();
    let mut group = c.benchmark_group("scheme_sequence_30");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| counter.sequence_with(black_box(30), exec))
        });
    }
    group.finish();
}

criterion_group!(benches, oracle_counts, prefix_census, scheme_sequence);
criterion_main!(benches);
