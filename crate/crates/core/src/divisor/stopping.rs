//! The relation `u ~_D v` and D-stopping edges and paths.
//!
//! For effective `D`, `u ~_D v` holds exactly when the `u`-reduced and the
//! `v`-reduced representatives of `D` coincide. From a `q`-reduced divisor
//! every debt-free script fires `q` a maximal number of times, so if both
//! reductions agree every effective `D'` is reached by a script with
//! `σ(u) = σ(v)`; if they differ, the script between them fires `v` most
//! and `u` least. This gives a polynomial decision, one reduction per
//! vertex. The literal definition (search of `|D|` for a debt-free firing
//! separating `u` from `v`) is kept as [`Divisor::vertices_equivalent_by_closure`].

use std::collections::{HashMap, HashSet, VecDeque};

use super::{Divisor, Reducer};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::graph::{MultiGraph, VertexSet};

/// Largest host the closure search will enumerate subsets of.
pub const CLOSURE_MAX_VERTICES: usize = 20;

/// `~_D` classes, computed from one reduction per vertex.
#[derive(Debug, Clone)]
pub struct EquivalenceClasses {
    class_of: Vec<usize>,
    count: usize,
}

impl EquivalenceClasses {
    pub fn new(d: &Divisor) -> Result<Self> {
        if !d.is_effective() {
            return Err(Error::NotEffective);
        }
        let g = d.host();
        let mut ids: HashMap<Vec<i64>, usize> = HashMap::new();
        let class_of = (0..g.n())
            .map(|q| {
                let reduced = Reducer::new(g, q).reduce(d.coeffs());
                let next = ids.len();
                *ids.entry(reduced).or_insert(next)
            })
            .collect();
        Ok(EquivalenceClasses { class_of, count: ids.len() })
    }

    pub fn equivalent(&self, u: usize, v: usize) -> bool {
        self.class_of[u] == self.class_of[v]
    }

    pub fn class_of(&self, v: usize) -> usize {
        self.class_of[v]
    }

    pub fn count(&self) -> usize {
        self.count
    }
}

/// A path whose interior vertices have exactly two neighbours, each joined
/// by a single edge, and whose ends are `~_D`-equivalent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StoppingPath {
    /// `ends.0, interior…, ends.1` in order.
    pub vertices: Vec<usize>,
}

impl StoppingPath {
    pub fn interior(&self) -> &[usize] {
        &self.vertices[1..self.vertices.len() - 1]
    }

    pub fn ends(&self) -> (usize, usize) {
        (self.vertices[0], *self.vertices.last().unwrap())
    }
}

fn check_vertex(g: &MultiGraph, v: usize) -> Result<()> {
    if v >= g.n() {
        Err(Error::UnknownVertex(v.to_string()))
    } else {
        Ok(())
    }
}

impl Divisor {
    /// `u ~_D v`, for effective `D`. Short-circuits when every `u`–`v` cut
    /// is larger than `deg(D)`.
    pub fn vertices_equivalent_under(&self, u: usize, v: usize) -> Result<bool> {
        let g = self.host();
        check_vertex(g, u)?;
        check_vertex(g, v)?;
        if !self.is_effective() {
            return Err(Error::NotEffective);
        }
        if u == v || g.min_edge_cut(u, v)? as i64 > self.degree() {
            return Ok(true);
        }
        let ru = Reducer::new(g, u).reduce(self.coeffs());
        let rv = Reducer::new(g, v).reduce(self.coeffs());
        Ok(ru == rv)
    }

    /// All effective divisors equivalent to `D`, found as the closure of
    /// `D` under debt-free subset firings. Exponential in `|V|`.
    pub fn enumerate_effective_class(&self, budget: &Budget) -> Result<Vec<Divisor>> {
        if !self.is_effective() {
            return Err(Error::NotEffective);
        }
        let g = self.host();
        let n = g.n();
        if n > CLOSURE_MAX_VERTICES {
            return Err(Error::BudgetExceeded(format!(
                "class closure limited to {CLOSURE_MAX_VERTICES} vertices, graph has {n}"
            )));
        }
        let mut seen: HashSet<Vec<i64>> = HashSet::from([self.coeffs().to_vec()]);
        let mut order = vec![self.coeffs().to_vec()];
        let mut queue = VecDeque::from([self.coeffs().to_vec()]);
        while let Some(cur) = queue.pop_front() {
            budget.charge(1 << n)?;
            for_each_legal_firing(g, &cur, |_, next| {
                if seen.insert(next.clone()) {
                    order.push(next.clone());
                    queue.push_back(next);
                }
            });
        }
        Ok(order.into_iter().map(|c| Divisor::from_raw(g, c)).collect())
    }

    /// `u ~_D v` straight from the definition: no effective `D' ~ D` admits
    /// a debt-free firing of a set containing exactly one of `u`, `v`.
    pub fn vertices_equivalent_by_closure(&self, u: usize, v: usize, budget: &Budget) -> Result<bool> {
        let g = self.host();
        check_vertex(g, u)?;
        check_vertex(g, v)?;
        let class = self.enumerate_effective_class(budget)?;
        let mut separated = false;
        for d in &class {
            for_each_legal_firing(g, d.coeffs(), |mask, _| {
                let has = |x: usize| mask >> x & 1 == 1;
                if has(u) != has(v) {
                    separated = true;
                }
            });
            if separated {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Edge groups `(a, b)` whose endpoints are `~_D`-equivalent.
    pub fn d_stopping_edges(&self) -> Result<Vec<(usize, usize)>> {
        let classes = EquivalenceClasses::new(self)?;
        Ok(self
            .host()
            .edge_groups()
            .iter()
            .filter(|&&(a, b, _)| classes.equivalent(a, b))
            .map(|&(a, b, _)| (a, b))
            .collect())
    }

    /// Components of the graph after deleting all D-stopping edges.
    pub fn stopping_components(&self) -> Result<Vec<VertexSet>> {
        let g = self.host();
        let classes = EquivalenceClasses::new(self)?;
        let mut comp = vec![usize::MAX; g.n()];
        let mut out = Vec::new();
        for s in 0..g.n() {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            comp[s] = id;
            let mut members = vec![s];
            let mut stack = vec![s];
            while let Some(x) = stack.pop() {
                for &(y, _) in g.neighbors(x) {
                    if comp[y] == usize::MAX && !classes.equivalent(x, y) {
                        comp[y] = id;
                        members.push(y);
                        stack.push(y);
                    }
                }
            }
            out.push(VertexSet::from_indices(g, members)?);
        }
        Ok(out)
    }

    pub fn d_stopping_paths(&self) -> Result<Vec<StoppingPath>> {
        let classes = EquivalenceClasses::new(self)?;
        Ok(chains(self.host())
            .into_iter()
            .filter(|p| {
                let (a, b) = p.ends();
                classes.equivalent(a, b)
            })
            .collect())
    }

    /// An equivalent effective divisor with at most one chip inside every
    /// D-stopping path. Interior chips are pushed outwards by firing the
    /// stretch between the outermost occupied interior vertices.
    pub fn clean_stopping_paths(&self) -> Result<Divisor> {
        let paths = self.d_stopping_paths()?;
        let mut chips = self.coeffs().to_vec();
        for p in &paths {
            let vs = &p.vertices;
            let m = vs.len() - 1;
            loop {
                let occupied: Vec<usize> = (1..m).filter(|&i| chips[vs[i]] > 0).collect();
                let total: i64 = (1..m).map(|i| chips[vs[i]]).sum();
                if total <= 1 {
                    break;
                }
                let (i, j) = (occupied[0], *occupied.last().unwrap());
                chips[vs[i]] -= 1;
                chips[vs[i - 1]] += 1;
                chips[vs[j]] -= 1;
                chips[vs[j + 1]] += 1;
            }
        }
        Ok(Divisor::from_raw(self.host(), chips))
    }
}

/// Calls `f(mask, next)` for every nonempty proper subset that can fire
/// from `chips` without creating debt.
fn for_each_legal_firing<F: FnMut(u64, Vec<i64>)>(g: &MultiGraph, chips: &[i64], mut f: F) {
    let n = g.n();
    let full = (1u64 << n) - 1;
    for mask in 1..full {
        let mut next = chips.to_vec();
        let mut ok = true;
        for v in 0..n {
            if mask >> v & 1 == 0 {
                continue;
            }
            for &(w, m) in g.neighbors(v) {
                if mask >> w & 1 == 0 {
                    next[v] -= m as i64;
                    next[w] += m as i64;
                }
            }
            if next[v] < 0 {
                ok = false;
                break;
            }
        }
        if ok {
            f(mask, next);
        }
    }
}

fn is_internal(g: &MultiGraph, v: usize) -> bool {
    let nb = g.neighbors(v);
    nb.len() == 2 && nb.iter().all(|&(_, m)| m == 1)
}

/// Maximal paths through internal (2-valent, simple) vertices, each listed
/// once, starting from the lower-ordered end.
fn chains(g: &MultiGraph) -> Vec<StoppingPath> {
    let mut used = vec![false; g.n()];
    let mut out = Vec::new();
    for start in 0..g.n() {
        if is_internal(g, start) {
            continue;
        }
        for &(first, _) in g.neighbors(start) {
            if !is_internal(g, first) || used[first] {
                continue;
            }
            let mut vertices = vec![start, first];
            used[first] = true;
            let (mut prev, mut cur) = (start, first);
            while is_internal(g, cur) {
                let next = g.neighbors(cur).iter().map(|&(w, _)| w).find(|&w| w != prev).unwrap();
                if is_internal(g, next) {
                    used[next] = true;
                }
                vertices.push(next);
                prev = cur;
                cur = next;
            }
            out.push(StoppingPath { vertices });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::graph::build_graph;

    fn host(edges: &[(&str, &str, i64)]) -> Arc<MultiGraph> {
        Arc::new(build_graph(edges).unwrap())
    }

    #[test]
    fn equivalence_examples() {
        let k2 = host(&[("a", "b", 1)]);
        let d = Divisor::from_pairs(&k2, &[("a", 1)]).unwrap();
        assert!(!d.vertices_equivalent_under(0, 1).unwrap());
        assert!(!d.vertices_equivalent_by_closure(0, 1, &Budget::default()).unwrap());

        let banana = host(&[("a", "b", 2)]);
        let d = Divisor::from_pairs(&banana, &[("a", 1)]).unwrap();
        assert!(d.vertices_equivalent_under(0, 1).unwrap());
        assert!(d.vertices_equivalent_by_closure(0, 1, &Budget::default()).unwrap());
    }

    #[test]
    fn cut_shortcut_applies() {
        let g = host(&[("a", "b", 7), ("b", "c", 1)]);
        let d = Divisor::from_pairs(&g, &[("a", 3), ("c", 3)]).unwrap();
        assert!(d.vertices_equivalent_under(0, 1).unwrap());
    }

    #[test]
    fn rejects_non_effective() {
        let k2 = host(&[("a", "b", 1)]);
        let d = Divisor::from_pairs(&k2, &[("a", -1)]).unwrap();
        assert_eq!(d.vertices_equivalent_under(0, 1), Err(Error::NotEffective));
        assert!(matches!(d.vertices_equivalent_under(0, 5), Err(Error::UnknownVertex(_))));
    }

    #[test]
    fn class_enumeration_examples() {
        let c3 = host(&[("a", "b", 1), ("b", "c", 1), ("c", "a", 1)]);
        let zero = Divisor::zero(&c3).enumerate_effective_class(&Budget::default()).unwrap();
        assert_eq!(zero, vec![Divisor::zero(&c3)]);

        let k2 = host(&[("a", "b", 1)]);
        let a = Divisor::from_pairs(&k2, &[("a", 1)]).unwrap();
        let class = a.enumerate_effective_class(&Budget::default()).unwrap();
        let mut got: Vec<Vec<i64>> = class.iter().map(|d| d.coeffs().to_vec()).collect();
        got.sort();
        assert_eq!(got, vec![vec![0, 1], vec![1, 0]]);

        // On C_3 the three single chips lie in different classes
        // (the Jacobian is Z/3), so the class of `a` is `{a}` alone.
        let a = Divisor::from_pairs(&c3, &[("a", 1)]).unwrap();
        let class = a.enumerate_effective_class(&Budget::default()).unwrap();
        let brute: Vec<Divisor> = (0..3)
            .map(|v| Divisor::zero(&c3).with_added(v, 1))
            .filter(|e| e.is_equivalent(&a).unwrap())
            .collect();
        assert_eq!(class, brute);
        assert_eq!(class, vec![a]);
    }

    #[test]
    fn class_enumeration_budget() {
        let c3 = host(&[("a", "b", 1), ("b", "c", 1), ("c", "a", 1)]);
        let d = Divisor::from_pairs(&c3, &[("a", 4)]).unwrap();
        assert!(matches!(d.enumerate_effective_class(&Budget::nodes(1)), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn stopping_edge_examples() {
        let banana = host(&[("a", "b", 2)]);
        let d = Divisor::from_pairs(&banana, &[("a", 1)]).unwrap();
        assert_eq!(d.d_stopping_edges().unwrap(), vec![(0, 1)]);

        let k2 = host(&[("a", "b", 1)]);
        let d = Divisor::from_pairs(&k2, &[("a", 1)]).unwrap();
        assert!(d.d_stopping_edges().unwrap().is_empty());

        let g = host(&[("a", "b", 4), ("b", "c", 5), ("c", "a", 4)]);
        let d = Divisor::from_pairs(&g, &[("a", 3), ("c", 4)]).unwrap();
        assert_eq!(d.d_stopping_edges().unwrap().len(), 3);
    }

    #[test]
    fn clean_paths_examples() {
        // A 2-path a–m–b next to five parallel a–b edges keeps a ~ b.
        let g = host(&[("a", "m", 1), ("m", "b", 1), ("a", "b", 5)]);
        let d = Divisor::from_pairs(&g, &[("m", 2)]).unwrap();
        let paths = d.d_stopping_paths().unwrap();
        assert_eq!(paths.len(), 1);
        assert_eq!(paths[0].interior(), &[1]);
        let clean = d.clean_stopping_paths().unwrap();
        assert!(clean.get(1) <= 1);
        assert!(clean.is_effective());
        assert!(clean.is_equivalent(&d).unwrap());

        let none = Divisor::from_pairs(&g, &[("a", 2)]).unwrap();
        assert_eq!(none.clean_stopping_paths().unwrap(), none);
        let one = Divisor::from_pairs(&g, &[("m", 1), ("b", 1)]).unwrap();
        assert_eq!(one.clean_stopping_paths().unwrap(), one);
    }

    #[test]
    fn clean_long_path() {
        let mut edges: Vec<(String, String, i64)> =
            (0..6).map(|i| (format!("p{i}"), format!("p{}", i + 1), 1)).collect();
        edges.push(("p0".into(), "p6".into(), 9));
        let g = Arc::new(build_graph(&edges).unwrap());
        let d = Divisor::new(&g, vec![0, 2, 0, 1, 3, 0, 0]).unwrap();
        let clean = d.clean_stopping_paths().unwrap();
        let interior: i64 = (1..6).map(|v| clean.get(v)).sum();
        assert!(interior <= 1);
        assert!(clean.is_effective());
        assert!(clean.is_equivalent(&d).unwrap());
    }
}
