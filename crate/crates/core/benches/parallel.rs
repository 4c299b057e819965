//! Sequential against parallel candidate search.

use std::hint::black_box;
use std::sync::Arc;

use chipfire::gonality::dgon_with;
use chipfire::reduction::build_reduction;
use chipfire::{build_graph, Budget, Divisor, Exec, MultiGraph, SearchConfig};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn modes() -> [(&'static str, Exec); 2] {
    [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)]
}

fn cfg(exec: Exec) -> SearchConfig {
    SearchConfig::new(exec, Budget::unlimited())
}

fn grid(w: usize, h: usize) -> Arc<MultiGraph> {
    let name = |x: usize, y: usize| format!("{x}.{y}");
    let mut edges = Vec::new();
    for x in 0..w {
        for y in 0..h {
            if x + 1 < w {
                edges.push((name(x, y), name(x + 1, y), 1));
            }
            if y + 1 < h {
                edges.push((name(x, y), name(x, y + 1), 1));
            }
        }
    }
    Arc::new(build_graph(&edges).unwrap())
}

fn rank_at_least(c: &mut Criterion) {
    let mut group = c.benchmark_group("rank_at_least");
    let g = grid(4, 4);
    let d = Divisor::constant(&g, 1);
    for r in [2, 3] {
        for (label, exec) in modes() {
            group.bench_with_input(BenchmarkId::new(label, r), &r, |b, &r| {
                b.iter(|| black_box(d.rank_at_least_with(r, &cfg(exec)).unwrap()))
            });
        }
    }
    group.finish();
}

fn gonality(c: &mut Criterion) {
    let mut group = c.benchmark_group("dgon");
    group.sample_size(10);
    let k1 = Arc::new(MultiGraph::single_vertex("x"));
    let gadget = build_reduction(&k1, 2).unwrap().gadget;
    let k2 = Arc::new(build_graph(&[("a", "b", 1)]).unwrap());
    let k2_gadget = build_reduction(&k2, 1).unwrap().gadget;
    let cases = [("grid3x3_r2", grid(3, 3), 2), ("k1_gadget_r2", gadget, 2), ("k2_gadget_r1", k2_gadget, 1)];
    for (name, g, r) in &cases {
        for (label, exec) in modes() {
            group.bench_with_input(BenchmarkId::new(label, name), r, |b, &r| {
                b.iter(|| black_box(dgon_with(g, r, &cfg(exec)).unwrap().degree))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, rank_at_least, gonality);
criterion_main!(benches);
