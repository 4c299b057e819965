use std::collections::VecDeque;

use super::MultiGraph;

/// Edmonds–Karp on the undirected graph, capacities = multiplicities.
pub(super) fn max_flow(g: &MultiGraph, s: usize, t: usize) -> u64 {
    let n = g.n();
    let mut residual = vec![vec![0u64; n]; n];
    for &(a, b, m) in g.edge_groups() {
        residual[a][b] += m;
        residual[b][a] += m;
    }
    let mut total = 0u64;
    let mut parent = vec![usize::MAX; n];
    loop {
        parent.fill(usize::MAX);
        parent[s] = s;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            if u == t {
                break;
            }
            for &(w, _) in g.neighbors(u) {
                if parent[w] == usize::MAX && residual[u][w] > 0 {
                    parent[w] = u;
                    queue.push_back(w);
                }
            }
        }
        if parent[t] == usize::MAX {
            return total;
        }
        let mut push = u64::MAX;
        let mut v = t;
        while v != s {
            let u = parent[v];
            push = push.min(residual[u][v]);
            v = u;
        }
        let mut v = t;
        while v != s {
            let u = parent[v];
            residual[u][v] -= push;
            residual[v][u] += push;
            v = u;
        }
        total += push;
    }
}
