#![allow(dead_code)]

use std::sync::Arc;

use chipfire::generate::{random_graph, EdgeModel};
use chipfire::{Divisor, MultiGraph};
use proptest::prelude::*;

/// Seeded connected graph, optionally with one edge group thickened.
pub fn graph(max_n: usize) -> impl Strategy<Value = Arc<MultiGraph>> {
    (1..=max_n, 0.3f64..0.9, any::<u64>(), 0i64..3).prop_map(|(n, p, seed, extra)| {
        let g = random_graph(n, EdgeModel::Probability(p), seed).unwrap();
        if extra == 0 || g.num_edges() == 0 {
            return Arc::new(g);
        }
        let mut edges: Vec<(String, String, i64)> = g
            .edge_groups()
            .iter()
            .map(|&(a, b, m)| (g.name(a).to_string(), g.name(b).to_string(), m as i64))
            .collect();
        let i = (seed as usize) % edges.len();
        edges[i].2 += extra;
        Arc::new(MultiGraph::new(g.names(), &edges).unwrap())
    })
}

/// Graph with a divisor whose coefficients lie in `lo..=hi`.
pub fn graph_and_divisor(max_n: usize, lo: i64, hi: i64) -> impl Strategy<Value = Divisor> {
    graph(max_n).prop_flat_map(move |g| {
        let n = g.n();
        proptest::collection::vec(lo..=hi, n).prop_map(move |c| Divisor::new(&g, c).unwrap())
    })
}

/// Effective divisor of degree at most `max_deg`.
pub fn effective(max_n: usize, max_deg: usize) -> impl Strategy<Value = Divisor> {
    graph(max_n).prop_flat_map(move |g| {
        let n = g.n();
        proptest::collection::vec(0..n, 0..=max_deg).prop_map(move |vs| {
            let mut c = vec![0; n];
            for v in vs {
                c[v] += 1;
            }
            Divisor::new(&g, c).unwrap()
        })
    })
}

pub fn cycle(n: usize) -> Arc<MultiGraph> {
    let e: Vec<_> = (0..n).map(|i| (i.to_string(), ((i + 1) % n).to_string(), 1)).collect();
    Arc::new(chipfire::build_graph(&e).unwrap())
}
