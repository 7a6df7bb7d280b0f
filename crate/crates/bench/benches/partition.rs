use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use richlines_core::harness::generate::{gen_generic, gen_random_lines};
use richlines_core::partition::{build_partition, cell_visit_stats};
use richlines_core::{Point, Rational};

fn partition(c: &mut Criterion) {
    let points: Vec<Point<Rational>> = gen_generic(256, 3, 1).unwrap();
    let delta = Rational::new(1, 20);
    let mut group = c.benchmark_group("partition");
    group.sample_size(10);
    group.bench_function("build_256_r3_rounds4", |b| {
        b.iter(|| build_partition(black_box(&points), 4, &delta, 0).unwrap())
    });
    let part = build_partition(&points, 4, &delta, 0).unwrap();
    let lines = gen_random_lines::<Rational>(20, 3, 2).unwrap();
    group.bench_function("visits_20_lines", |b| {
        b.iter(|| cell_visit_stats(black_box(&lines), &part).unwrap())
    });
    group.finish();
}

criterion_group!(benches, partition);
criterion_main!(benches);
