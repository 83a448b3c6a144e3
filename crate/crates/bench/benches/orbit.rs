use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;
use zaremba_bench::ORBIT_CASES;
use zaremba_core::{continuant_bitset_with, orbit_count_with, ExecOptions};

fn bench_orbit_count(c: &mut Criterion) {
    let mut group = c.benchmark_group("orbit_count");
    for &(a_max, limit) in ORBIT_CASES {
        group.bench_function(format!("a{a_max}_n{limit}"), |b| {
            b.iter(|| {
                orbit_count_with(black_box(a_max), black_box(limit), &ExecOptions::serial())
                    .unwrap()
            })
        });
    }
    group.finish();
}

fn bench_bitset(c: &mut Criterion) {
    let mut group = c.benchmark_group("continuant_bitset");
    group.bench_function("a3_n100k_serial", |b| {
        b.iter(|| continuant_bitset_with(3, 100_000, &ExecOptions::serial()).unwrap())
    });
    group.bench_function("a3_n100k_parallel", |b| {
        b.iter(|| continuant_bitset_with(3, 100_000, &ExecOptions::default()).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_orbit_count, bench_bitset);
criterion_main!(benches);
