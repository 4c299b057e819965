//! Connected loopless multigraphs.
//!
//! Edge multiplicities are stored as counts and never expanded into parallel
//! edge objects; the reduction gadgets carry multiplicities that grow with
//! `r * |V| * |E|`. Vertex identifiers are strings whose order is fixed at
//! construction, and every vector indexed by vertices (divisors, scripts,
//! Laplacian rows) uses that order.

mod flow;
mod independent;

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

static NEXT_GRAPH_ID: AtomicU64 = AtomicU64::new(1);

#[derive(Debug, Clone)]
pub struct MultiGraph {
    id: u64,
    names: Vec<String>,
    index: HashMap<String, usize>,
    /// Sorted by neighbour index; one entry per adjacent vertex.
    adj: Vec<Vec<(usize, u64)>>,
    /// Edge groups `(a, b, mult)` with `a < b`, in first-appearance order.
    edges: Vec<(usize, usize, u64)>,
    labels: Vec<Option<String>>,
}

/// Structural equality: same vertex order, same edge groups, same labels.
impl PartialEq for MultiGraph {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.edges == other.edges && self.labels == other.labels
    }
}

impl Eq for MultiGraph {}

/// Builds a graph whose vertex order is the order of first appearance in `edges`.
pub fn build_graph<S: AsRef<str>>(edges: &[(S, S, i64)]) -> Result<MultiGraph> {
    MultiGraph::new::<&str, S>(&[], edges)
}

impl MultiGraph {
    /// `vertices` fixes the leading part of the vertex order; endpoints not
    /// listed there are appended in order of first appearance. Repeated
    /// pairs have their multiplicities summed.
    pub fn new<V: AsRef<str>, S: AsRef<str>>(vertices: &[V], edges: &[(S, S, i64)]) -> Result<Self> {
        let mut names: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        for v in vertices {
            let v = v.as_ref();
            if index.insert(v.to_string(), names.len()).is_some() {
                return Err(Error::DuplicateVertex(v.to_string()));
            }
            names.push(v.to_string());
        }
        let mut intern = |name: &str, names: &mut Vec<String>| -> usize {
            if let Some(&i) = index.get(name) {
                return i;
            }
            index.insert(name.to_string(), names.len());
            names.push(name.to_string());
            names.len() - 1
        };

        let mut groups: Vec<(usize, usize, u64)> = Vec::new();
        let mut group_of: HashMap<(usize, usize), usize> = HashMap::new();
        for (u, v, m) in edges {
            let (u, v, m) = (u.as_ref(), v.as_ref(), *m);
            if u == v {
                return Err(Error::SelfLoop(u.to_string()));
            }
            if m < 1 {
                return Err(Error::BadMultiplicity { u: u.into(), v: v.into(), mult: m });
            }
            let a = intern(u, &mut names);
            let b = intern(v, &mut names);
            let key = (a.min(b), a.max(b));
            match group_of.get(&key) {
                Some(&g) => groups[g].2 += m as u64,
                None => {
                    group_of.insert(key, groups.len());
                    groups.push((key.0, key.1, m as u64));
                }
            }
        }
        Self::from_indexed(names, groups)
    }

    pub(crate) fn from_indexed(names: Vec<String>, edges: Vec<(usize, usize, u64)>) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::Empty);
        }
        let n = names.len();
        let index: HashMap<String, usize> =
            names.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        if index.len() != n {
            let mut seen = BTreeSet::new();
            let dup = names.iter().find(|s| !seen.insert(*s)).cloned().unwrap_or_default();
            return Err(Error::DuplicateVertex(dup));
        }
        let mut adj = vec![Vec::new(); n];
        for &(a, b, m) in &edges {
            debug_assert!(a < b && m > 0);
            adj[a].push((b, m));
            adj[b].push((a, m));
        }
        for row in &mut adj {
            row.sort_unstable();
        }
        let g = MultiGraph {
            id: NEXT_GRAPH_ID.fetch_add(1, Ordering::Relaxed),
            names,
            index,
            adj,
            edges,
            labels: vec![None; n],
        };
        if !g.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(g)
    }

    pub fn single_vertex(name: &str) -> Self {
        Self::from_indexed(vec![name.to_string()], Vec::new()).expect("one vertex is connected")
    }

    pub fn with_labels(mut self, labels: Vec<Option<String>>) -> Self {
        assert_eq!(labels.len(), self.n());
        self.labels = labels;
        self
    }

    /// Identity of this graph object; shared by clones, fresh for every
    /// constructed graph. Divisors compare hosts by this value.
    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn label(&self, v: usize) -> Option<&str> {
        self.labels[v].as_deref()
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index.get(name).copied().ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, u64)] {
        &self.adj[v]
    }

    pub fn mult(&self, u: usize, v: usize) -> u64 {
        match self.adj[u].binary_search_by_key(&v, |&(w, _)| w) {
            Ok(i) => self.adj[u][i].1,
            Err(_) => 0,
        }
    }

    pub fn valence(&self, v: usize) -> u64 {
        self.adj[v].iter().map(|&(_, m)| m).sum()
    }

    pub fn edge_groups(&self) -> &[(usize, usize, u64)] {
        &self.edges
    }

    /// |E| counted with multiplicity.
    pub fn num_edges(&self) -> u64 {
        self.edges.iter().map(|e| e.2).sum()
    }

    pub fn genus(&self) -> i64 {
        self.num_edges() as i64 - self.n() as i64 + 1
    }

    fn is_connected(&self) -> bool {
        self.bfs_distances(0).iter().all(|d| d.is_some())
    }

    pub(crate) fn bfs_distances(&self, src: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n()];
        dist[src] = Some(0);
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap();
            for &(w, _) in &self.adj[u] {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// `L[i][i] = val(v_i)`, `L[i][j] = -|E(v_i, v_j)|`.
    pub fn laplacian(&self) -> Vec<Vec<i64>> {
        let n = self.n();
        let mut l = vec![vec![0i64; n]; n];
        for (v, row) in l.iter_mut().enumerate() {
            for &(w, m) in &self.adj[v] {
                row[w] = -(m as i64);
                row[v] += m as i64;
            }
        }
        l
    }

    /// Uniform subdivision: every edge (each parallel copy separately) becomes
    /// a path with `k` edges. Original vertices keep their names and lead the
    /// vertex order; interior vertices are named `u~w#copy.step`.
    pub fn subdivide_uniform(&self, k: i64) -> Result<MultiGraph> {
        if k < 1 {
            return Err(Error::BadK(k));
        }
        if k == 1 {
            return Ok(self.clone());
        }
        let k = k as usize;
        let mut names = self.names.clone();
        let mut edges = Vec::new();
        for &(a, b, m) in &self.edges {
            for copy in 0..m {
                let mut prev = a;
                for step in 1..k {
                    let id = names.len();
                    names.push(format!("{}~{}#{}.{}", self.names[a], self.names[b], copy, step));
                    edges.push((prev.min(id), prev.max(id), 1));
                    prev = id;
                }
                edges.push((prev.min(b), prev.max(b), 1));
            }
        }
        MultiGraph::from_indexed(names, edges)
    }

    pub fn induced_subgraph(&self, set: &VertexSet) -> Result<InducedSubgraph> {
        set.check_host(self)?;
        let edges: Vec<_> = self
            .edges
            .iter()
            .filter(|&&(a, b, _)| set.contains(a) && set.contains(b))
            .copied()
            .collect();
        let edge_count = edges.iter().map(|e| e.2).sum();
        Ok(InducedSubgraph { vertices: set.iter().collect(), edges, edge_count })
    }

    /// Two-colouring, if one exists. Side `false` contains vertex 0.
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        let mut side: Vec<Option<bool>> = vec![None; self.n()];
        side[0] = Some(false);
        let mut queue = VecDeque::from([0usize]);
        while let Some(u) = queue.pop_front() {
            let s = side[u].unwrap();
            for &(w, _) in &self.adj[u] {
                match side[w] {
                    None => {
                        side[w] = Some(!s);
                        queue.push_back(w);
                    }
                    Some(t) if t == s => return None,
                    Some(_) => {}
                }
            }
        }
        Some(side.into_iter().map(|s| s.unwrap()).collect())
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition().is_some()
    }

    /// Minimum number of edges (with multiplicity) separating `u` from `v`.
    pub fn min_edge_cut(&self, u: usize, v: usize) -> Result<u64> {
        if u >= self.n() {
            return Err(Error::UnknownVertex(u.to_string()));
        }
        if v >= self.n() {
            return Err(Error::UnknownVertex(v.to_string()));
        }
        if u == v {
            return Err(Error::SameVertex(self.names[u].clone()));
        }
        Ok(flow::max_flow(self, u, v))
    }

    /// Exact independence number with a maximum independent set.
    pub fn independence_number(&self) -> (usize, VertexSet) {
        let best = independent::maximum_independent_set(self);
        (best.len(), VertexSet::from_sorted(self, best))
    }

    pub fn is_independent(&self, set: &VertexSet) -> bool {
        let members: Vec<usize> = set.iter().collect();
        members
            .iter()
            .enumerate()
            .all(|(i, &a)| members[i + 1..].iter().all(|&b| self.mult(a, b) == 0))
    }

    /// Graphviz rendering; multiplicities above one become edge labels.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "graph \"{}\" {{", name.replace('"', "'"));
        for (i, v) in self.names.iter().enumerate() {
            match &self.labels[i] {
                Some(l) => {
                    let _ = writeln!(out, "  \"{v}\" [xlabel=\"{l}\"];");
                }
                None => {
                    let _ = writeln!(out, "  \"{v}\";");
                }
            }
        }
        for &(a, b, m) in &self.edges {
            let (a, b) = (&self.names[a], &self.names[b]);
            if m == 1 {
                let _ = writeln!(out, "  \"{a}\" -- \"{b}\";");
            } else {
                let _ = writeln!(out, "  \"{a}\" -- \"{b}\" [label=\"{m}\", penwidth=2];");
            }
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedSubgraph {
    pub vertices: Vec<usize>,
    pub edges: Vec<(usize, usize, u64)>,
    /// Total multiplicity of edges with both endpoints in the set.
    pub edge_count: u64,
}

/// A subset of the vertices of one host graph, by vertex index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexSet {
    host_n: usize,
    members: BTreeSet<usize>,
}

impl VertexSet {
    pub fn empty(g: &MultiGraph) -> Self {
        VertexSet { host_n: g.n(), members: BTreeSet::new() }
    }

    pub fn all(g: &MultiGraph) -> Self {
        VertexSet { host_n: g.n(), members: (0..g.n()).collect() }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(g: &MultiGraph, it: I) -> Result<Self> {
        let members: BTreeSet<usize> = it.into_iter().collect();
        if let Some(&bad) = members.iter().find(|&&v| v >= g.n()) {
            return Err(Error::UnknownVertex(bad.to_string()));
        }
        Ok(VertexSet { host_n: g.n(), members })
    }

    pub fn from_names<I, S>(g: &MultiGraph, it: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let members = it
            .into_iter()
            .map(|s| g.index_of(s.as_ref()))
            .collect::<Result<BTreeSet<_>>>()?;
        Ok(VertexSet { host_n: g.n(), members })
    }

    pub(crate) fn from_sorted(g: &MultiGraph, members: Vec<usize>) -> Self {
        VertexSet { host_n: g.n(), members: members.into_iter().collect() }
    }

    pub(crate) fn check_host(&self, g: &MultiGraph) -> Result<()> {
        match self.members.iter().next_back() {
            Some(&m) if m >= g.n() => Err(Error::UnknownVertex(m.to_string())),
            _ => Ok(()),
        }
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.contains(&v)
    }

    pub fn insert(&mut self, v: usize) {
        assert!(v < self.host_n, "vertex {v} outside host");
        self.members.insert(v);
    }

    pub fn remove(&mut self, v: usize) -> bool {
        self.members.remove(&v)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn complement(&self) -> VertexSet {
        VertexSet {
            host_n: self.host_n,
            members: (0..self.host_n).filter(|v| !self.members.contains(v)).collect(),
        }
    }

    pub fn indicator(&self) -> Vec<bool> {
        let mut out = vec![false; self.host_n];
        for &v in &self.members {
            out[v] = true;
        }
        out
    }

    pub fn names<'g>(&self, g: &'g MultiGraph) -> Vec<&'g str> {
        self.members.iter().map(|&v| g.name(v)).collect()
    }
}
