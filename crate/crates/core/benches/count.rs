//! Parallel against sequential execution of the counting engine.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use tropicount::enumeration::{count_nodal_with, sample_points, CountOptions};
use tropicount::parallel::Execution;
use tropicount::LatticePolygon;

fn nodal(c: &mut Criterion) {
    let mut group = c.benchmark_group("count_nodal");
    group.sample_size(10);
    for (degree, nodes) in [(3, 1), (3, 2), (4, 1)] {
        let polygon = LatticePolygon::standard_triangle(degree);
        let points = sample_points(&polygon, nodes, 0).expect("enough lattice points");
        for (name, execution) in [("parallel", Execution::Parallel), ("sequential", Execution::Sequential)] {
            let options = CountOptions { execution };
            group.bench_with_input(BenchmarkId::new(name, format!("d{degree}n{nodes}")), &points, |b, points| {
                b.iter(|| count_nodal_with(black_box(&polygon), nodes, points, &options).expect("generic points"))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, nodal);
criterion_main!(benches);
