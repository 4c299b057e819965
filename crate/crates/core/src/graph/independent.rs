use fixedbitset::FixedBitSet;

use super::MultiGraph;

/// Branch and bound: vertices of degree <= 1 in the candidate set are taken
/// greedily, otherwise branch on a maximum-degree vertex.
pub(super) fn maximum_independent_set(g: &MultiGraph) -> Vec<usize> {
    let n = g.n();
    let adj: Vec<FixedBitSet> = (0..n)
        .map(|v| {
            let mut b = FixedBitSet::with_capacity(n);
            for &(w, _) in g.neighbors(v) {
                b.insert(w);
            }
            b
        })
        .collect();
    let mut cand = FixedBitSet::with_capacity(n);
    cand.insert_range(..);
    let mut best = Vec::new();
    let mut cur = Vec::new();
    search(&adj, cand, &mut cur, &mut best);
    best.sort_unstable();
    best
}

fn search(adj: &[FixedBitSet], cand: FixedBitSet, cur: &mut Vec<usize>, best: &mut Vec<usize>) {
    let remaining = cand.count_ones(..);
    if cur.len() + remaining <= best.len() {
        return;
    }
    if remaining == 0 {
        *best = cur.clone();
        return;
    }
    let degree = |v: usize| adj[v].intersection(&cand).count();
    let (min_v, min_d) = cand.ones().map(|v| (v, degree(v))).min_by_key(|&(_, d)| d).unwrap();
    if min_d <= 1 {
        take(adj, &cand, min_v, cur, best);
        return;
    }
    let max_v = cand.ones().max_by_key(|&v| degree(v)).unwrap();
    take(adj, &cand, max_v, cur, best);
    let mut without = cand;
    without.set(max_v, false);
    search(adj, without, cur, best);
}

fn take(adj: &[FixedBitSet], cand: &FixedBitSet, v: usize, cur: &mut Vec<usize>, best: &mut Vec<usize>) {
    let mut next = cand.clone();
    next.difference_with(&adj[v]);
    next.set(v, false);
    cur.push(v);
    search(adj, next, cur, best);
    cur.pop();
}
