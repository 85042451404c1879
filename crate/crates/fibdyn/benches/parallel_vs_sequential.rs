//! Compares the rayon-backed execution mode against forced sequential
//! execution on the two parallel hot paths: the functional-graph build
//! that seeds a decomposition, and full decompositions where the
//! independent cycle subtrees fan out.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fibdyn::engine::{decompose, functional_graph, FibMap};
use fibdyn::exec::{set_parallelism, Parallelism};

fn bench_functional_graph(c: &mut Criterion) {
    let mut group = c.benchmark_group("functional_graph");
    for level in [14u32, 16] {
        for (mode, name) in [
            (Parallelism::Sequential, "sequential"),
            (Parallelism::Rayon, "rayon"),
        ] {
            group.bench_with_input(
                BenchmarkId::new(name, level),
                &level,
                |bench, &level| {
                    set_parallelism(mode);
                    let f = FibMap { m: 28 };
                    bench.iter(|| functional_graph(&f, level));
                },
            );
        }
    }
    group.finish();
    set_parallelism(Parallelism::Rayon);
}

fn bench_decompose(c: &mut Criterion) {
    let mut group = c.benchmark_group("decompose");
    group.sample_size(10);
    for m in [28u64, 164] {
        for (mode, name) in [
            (Parallelism::Sequential, "sequential"),
            (Parallelism::Rayon, "rayon"),
        ] {
            group.bench_with_input(BenchmarkId::new(name, m), &m, |bench, &m| {
                set_parallelism(mode);
                let f = FibMap { m };
                bench.iter(|| decompose(&f, 12, 1).unwrap());
            });
        }
    }
    group.finish();
    set_parallelism(Parallelism::Rayon);
}

criterion_group!(benches, bench_functional_graph, bench_decompose);
criterion_main!(benches);
