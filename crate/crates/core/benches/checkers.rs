//! Sequential against data-parallel runs of the heavier checkers. Without the
//! `parallel` feature both variants run sequentially.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use courant_vpa::courant::{check_everything, examples, to_1tca_unchecked};
use courant_vpa::par::with_threads;
use courant_vpa::quotient::{check_shape, SbAlgebra};
use courant_vpa::vlie::{check_vertex_lie, VertexLie};
use courant_vpa::vpa::{check_vpa, ScAlgebra, VpaCheckConfig};

fn thread_counts() -> Vec<(&'static str, usize)> {
    let n = std::thread::available_parallelism().map_or(1, |n| n.get());
    vec![("sequential", 1), ("parallel", n)]
}

fn bench_courant(c: &mut Criterion) {
    let x = examples::exact(4).unwrap();
    let mut g = c.benchmark_group("courant_exact4");
    for (label, n) in thread_counts() {
        g.bench_function(BenchmarkId::from_parameter(label), |b| {
            b.iter(|| with_threads(n, || black_box(check_everything(&x))))
        });
    }
    g.finish();
}

fn bench_vertex_lie(c: &mut Criterion) {
    let x = examples::exact(3).unwrap();
    let vl = VertexLie::new(to_1tca_unchecked(&x), 4);
    let mut g = c.benchmark_group("vertex_lie_exact3_cutoff4");
    g.sample_size(10);
    for (label, n) in thread_counts() {
        g.bench_function(BenchmarkId::from_parameter(label), |b| {
            b.iter(|| with_threads(n, || black_box(check_vertex_lie(&vl))))
        });
    }
    g.finish();
}

fn bench_vpa(c: &mut Criterion) {
    let x = examples::exact(2).unwrap();
    let sc = ScAlgebra::new(VertexLie::new(to_1tca_unchecked(&x), 3));
    let mut g = c.benchmark_group("vpa_exact2_cutoff3");
    g.sample_size(10);
    for (label, n) in thread_counts() {
        g.bench_function(BenchmarkId::from_parameter(label), |b| {
            b.iter(|| with_threads(n, || black_box(check_vpa(&sc, VpaCheckConfig::default()))))
        });
    }
    g.finish();
}

fn bench_quotient(c: &mut Criterion) {
    let x = examples::exact(3).unwrap();
    let q = SbAlgebra::new(&x, 3).unwrap();
    let mut g = c.benchmark_group("quotient_shape_exact3");
    g.sample_size(10);
    for (label, n) in thread_counts() {
        g.bench_function(BenchmarkId::from_parameter(label), |b| {
            b.iter(|| with_threads(n, || black_box(check_shape(&q, 500, 1))))
        });
    }
    g.finish();
}

criterion_group!(benches, bench_courant, bench_vertex_lie, bench_vpa, bench_quotient);
criterion_main!(benches);
