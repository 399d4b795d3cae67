use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};

use bpden_bench::{sample_ns, sieve_for};
use bpden_core::census::{run_census, CensusOptions};
use bpden_core::{bernoulli, denom, PrimeSieve};

fn bench_sieve_build(c: &mut Criterion) {
    let mut group = c.benchmark_group("sieve_build");
    for limit in [1_000_000u64, 10_000_000] {
        group.throughput(Throughput::Elements(limit));
        group.bench_with_input(BenchmarkId::from_parameter(limit), &limit, |b, &limit| {
            b.iter(|| PrimeSieve::new(black_box(limit)).unwrap());
        });
    }
    group.finish();
}

fn bench_denominator_paths(c: &mut Criterion) {
    let sieve = sieve_for(1_000_000);
    let ns = sample_ns(999_000, 50);
    let mut group = c.benchmark_group("denominator");
    group.throughput(Throughput::Elements(ns.len() as u64));
    group.bench_function("plus_part_interval_enumeration", |b| {
        b.iter(|| {
            for &n in &ns {
                black_box(denom::omega_plus_fast(&sieve, black_box(n)).unwrap());
            }
        });
    });
    group.bench_function("reference_digit_scan", |b| {
        b.iter(|| {
            for &n in &ns {
                black_box(denom::record(&sieve, black_box(n)).unwrap());
            }
        });
    });
    group.bench_function("transition_classifier", |b| {
        b.iter(|| {
            for &n in &ns {
                black_box(denom::classify_transition(&sieve, black_box(n)).unwrap());
            }
        });
    });
    group.finish();
}

fn bench_census_block(c: &mut Criterion) {
    let sieve = sieve_for(200_000);
    let mut group = c.benchmark_group("census");
    group.throughput(Throughput::Elements(10_000));
    group.sample_size(10);
    group.bench_function("block_of_1e4_rows", |b| {
        b.iter(|| {
            let opts = CensusOptions {
                threads: 1,
                ..Default::default()
            };
            black_box(run_census(&sieve, 100_000, 109_999, &opts, |_| Ok(())).unwrap());
        });
    });
    group.finish();
}

fn bench_bernoulli_oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("bernoulli");
    group.sample_size(10);
    group.bench_function("table_to_200", |b| {
        b.iter(|| bernoulli::BernoulliTable::new(black_box(200)).unwrap());
    });
    let table = bernoulli::BernoulliTable::new(300).unwrap();
    group.bench_function("poly_denominator_300", |b| {
        b.iter(|| black_box(table.btilde(300).unwrap().denominator()));
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_sieve_build,
    bench_denominator_paths,
    bench_census_block,
    bench_bernoulli_oracle
);
criterion_main!(benches);
