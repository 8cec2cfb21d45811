use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dpack_core::generators::{apollonian_gasket, disk_triangulation_pack, hex_disk_triangulation, hexagonal_packing, PackOptions};
use dpack_core::geometry::{supported_census, tangency_graph, validate_packing};
use dpack_core::SupportMode;
use std::hint::black_box;

fn tangency(c: &mut Criterion) {
    let mut group = c.benchmark_group("tangency_hex");
    for side in [30usize, 100] {
        let p = hexagonal_packing(side, side).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(side), &p, |b, p| b.iter(|| tangency_graph(black_box(p)).unwrap()));
    }
    group.finish();
    let p = hexagonal_packing(100, 100).unwrap();
    c.bench_function("validate_hex100", |b| b.iter(|| validate_packing(black_box(&p)).unwrap()));
}

fn census(c: &mut Criterion) {
    let mut group = c.benchmark_group("census_hex60");
    group.sample_size(10);
    let points = hexagonal_packing(60, 60).unwrap().centers();
    let s: Vec<usize> = (1..=7).map(|k| 1 << k).collect();
    for (name, mode) in [("candidate", SupportMode::Candidate), ("exact", SupportMode::Exact)] {
        group.bench_function(name, |b| b.iter(|| supported_census(black_box(&points), 0.5, &s, mode).unwrap()));
    }
    group.finish();
}

fn generators(c: &mut Criterion) {
    c.bench_function("apollonian_depth6", |b| b.iter(|| apollonian_gasket(black_box(6)).unwrap()));
    let t = hex_disk_triangulation(6).unwrap();
    c.bench_function("disk_pack_rings6", |b| {
        b.iter(|| disk_triangulation_pack(black_box(&t), &[1.0], &PackOptions::default()).unwrap())
    });
}

criterion_group!(benches, tangency, census, generators);
criterion_main!(benches);
