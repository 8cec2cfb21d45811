use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dpack_core::flow::WetnessProcess;
use dpack_core::generators::{grid_graph, random_connected_graph};
use dpack_core::graph::{ball, canonical_form};
use dpack_core::modulus::{modulus, modulus_oracle, Connector, ModulusOptions};
use std::hint::black_box;

fn boundary_connector(g: &dpack_core::Graph, o: usize, r: usize) -> Connector<'_> {
    let depth = g.bfs_distances(&[o]);
    let target = (0..g.len()).filter(|&v| depth[v] == Some(r)).collect();
    Connector::new(g, vec![o], target).unwrap()
}

fn modulus_on_boxes(c: &mut Criterion) {
    let mut group = c.benchmark_group("modulus_box");
    group.sample_size(10);
    for side in [9usize, 17] {
        let g = grid_graph(2, side).unwrap();
        let o = side * side / 2;
        for p in [2.0, 3.0] {
            let conn = boundary_connector(&g, o, side / 2);
            group.bench_with_input(BenchmarkId::new(format!("p{p}"), side), &conn, |b, conn| {
                b.iter(|| modulus(black_box(conn), &ModulusOptions::new(p)).unwrap())
            });
        }
    }
    group.finish();
}

fn solver_against_oracle(c: &mut Criterion) {
    let g = random_connected_graph(8, 0.5, 3).unwrap();
    let conn = Connector::new(&g, vec![0], vec![7]).unwrap();
    c.bench_function("modulus_random8", |b| b.iter(|| modulus(black_box(&conn), &ModulusOptions::new(2.0)).unwrap()));
    c.bench_function("oracle_random8", |b| b.iter(|| modulus_oracle(black_box(&conn), 2.0).unwrap()));
}

fn wetness_process(c: &mut Criterion) {
    let g = grid_graph(2, 41).unwrap();
    let o = 41 * 41 / 2;
    let m = modulus(&boundary_connector(&g, o, 20), &ModulusOptions::new(2.0)).unwrap().metric.floored(1e-9);
    c.bench_function("wetness_box41", |b| b.iter(|| WetnessProcess::new(black_box(&g), &m, o).unwrap()));
}

fn canonical_forms(c: &mut Criterion) {
    let g = grid_graph(2, 41).unwrap();
    let rg = ball(&g, 41 * 41 / 2, 8).unwrap();
    c.bench_function("canonical_form_ball8", |b| b.iter(|| canonical_form(black_box(&rg))));
}

criterion_group!(benches, modulus_on_boxes, solver_against_oracle, wetness_process, canonical_forms);
criterion_main!(benches);
