//! The independent-set gadget `G'_r` and everything built on it.
//!
//! From a base graph `G = (V, E)` and `r >= 1` the gadget has a root `T`;
//! for every `v ∈ V` three vertices `v`, `v'`, `T_v`; and for every edge
//! `e = uv` two vertices `e_u`, `e_v`. With
//! `M = r(3|V| + 2|E| + 1) + 1` the edges are
//!
//! | pair          | multiplicity |
//! |---------------|--------------|
//! | `T – T_v`     | `M`          |
//! | `v – v'`      | `M`          |
//! | `v – e_v`     | `M`          |
//! | `v' – T_v`    | `r + 2`      |
//! | `e_u – e_v`   | `r`          |
//!
//! `M` exceeds `r·|V(G'_r)|`, the degree of the trivial rank-`r` divisor,
//! so every `M`-bundle is D-stopping for an optimal divisor and
//! `dgon_r(G'_r) = r + (3r+1)|V| + (2r-1)|E| - α(G)`.
//! Parallel base edges each get their own `e_u`, `e_v` pair.

mod extract;
mod witness;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::MultiGraph;

pub use extract::{apx_guarantee, extract_independent_set, Extraction};
pub use witness::{OrientedIndependentData, WitnessReport};

/// What a gadget vertex stands for; indices refer to the base graph and
/// to its expanded edge list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Role {
    #[serde(rename = "T")]
    Root,
    Base { vertex: usize },
    Prime { vertex: usize },
    Tv { vertex: usize },
    Ev { edge: usize, endpoint: usize },
}

impl Role {
    pub fn tag(&self) -> &'static str {
        match self {
            Role::Root => "T",
            Role::Base { .. } => "v",
            Role::Prime { .. } => "v'",
            Role::Tv { .. } => "T_v",
            Role::Ev { .. } => "e_v",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionInstance {
    pub base: Arc<MultiGraph>,
    pub r: usize,
    pub gadget: Arc<MultiGraph>,
    pub m: u64,
    pub roles: Vec<Role>,
    /// Base edges one per unit of multiplicity, `(a, b)` with `a < b`.
    pub edges: Vec<(usize, usize)>,
}

/// `r + (3r+1)|V| + (2r-1)|E| - α`, with `|E|` counted with multiplicity.
pub fn formula_gonality(g: &MultiGraph, r: usize, alpha: usize) -> i64 {
    let r = r as i64;
    r + (3 * r + 1) * g.n() as i64 + (2 * r - 1) * g.num_edges() as i64 - alpha as i64
}

pub fn build_reduction(base: &Arc<MultiGraph>, r: usize) -> Result<ReductionInstance> {
    if r == 0 {
        return Err(Error::BadRank(0));
    }
    let nv = base.n();
    let edges: Vec<(usize, usize)> = base
        .edge_groups()
        .iter()
        .flat_map(|&(a, b, m)| std::iter::repeat_n((a, b), m as usize))
        .collect();
    let ne = edges.len();
    let m = (r * (3 * nv + 2 * ne + 1) + 1) as u64;
    let r64 = r as u64;

    let mut names = vec!["T".to_string()];
    let mut roles = vec![Role::Root];
    for v in 0..nv {
        let x = base.name(v);
        names.extend([format!("v:{x}"), format!("p:{x}"), format!("tv:{x}")]);
        roles.extend([Role::Base { vertex: v }, Role::Prime { vertex: v }, Role::Tv { vertex: v }]);
    }
    for (e, &(a, b)) in edges.iter().enumerate() {
        names.push(format!("ev:{e}:{}", base.name(a)));
        names.push(format!("ev:{e}:{}", base.name(b)));
        roles.push(Role::Ev { edge: e, endpoint: a });
        roles.push(Role::Ev { edge: e, endpoint: b });
    }

    let vertex = |v: usize| 1 + 3 * v;
    let prime = |v: usize| 2 + 3 * v;
    let tv = |v: usize| 3 + 3 * v;
    let copy = |e: usize, side: usize| 1 + 3 * nv + 2 * e + side;

    let mut groups = Vec::new();
    for v in 0..nv {
        groups.push((0, tv(v), m));
        groups.push((vertex(v), prime(v), m));
        groups.push((prime(v), tv(v), r64 + 2));
    }
    for (e, &(a, b)) in edges.iter().enumerate() {
        groups.push((vertex(a), copy(e, 0), m));
        groups.push((vertex(b), copy(e, 1), m));
        groups.push((copy(e, 0), copy(e, 1), r64));
    }
    let labels = roles.iter().map(|r| Some(r.tag().to_string())).collect();
    let gadget = MultiGraph::from_indexed(names, groups)?.with_labels(labels);
    Ok(ReductionInstance { base: Arc::clone(base), r, gadget: Arc::new(gadget), m, roles, edges })
}

impl ReductionInstance {
    pub const ROOT: usize = 0;

    pub fn vertex(&self, v: usize) -> usize {
        1 + 3 * v
    }

    pub fn prime(&self, v: usize) -> usize {
        2 + 3 * v
    }

    pub fn tv(&self, v: usize) -> usize {
        3 + 3 * v
    }

    /// Gadget vertex `e_x` for edge `e` and endpoint `x` of it.
    pub fn edge_copy(&self, e: usize, endpoint: usize) -> usize {
        let (a, b) = self.edges[e];
        let base = 1 + 3 * self.base.n() + 2 * e;
        if endpoint == a {
            base
        } else {
            debug_assert_eq!(endpoint, b);
            base + 1
        }
    }

    pub fn formula(&self, alpha: usize) -> i64 {
        formula_gonality(&self.base, self.r, alpha)
    }

    /// Vertex count, multiplicities and the size of `M`.
    pub fn check_invariants(&self) -> Result<()> {
        let (nv, ne, r) = (self.base.n(), self.edges.len(), self.r as u64);
        let fail = |msg: String| Err(Error::InvariantViolated(msg));
        if self.m != r * (3 * nv + 2 * ne + 1) as u64 + 1 {
            return fail(format!("M = {} does not match the construction", self.m));
        }
        if self.gadget.n() != 1 + 3 * nv + 2 * ne {
            return fail(format!("gadget has {} vertices", self.gadget.n()));
        }
        if self.m <= r * self.gadget.n() as u64 {
            return fail("M must exceed r·|V(G'_r)|".into());
        }
        let g = &self.gadget;
        for v in 0..nv {
            let pairs = [
                (Self::ROOT, self.tv(v), self.m),
                (self.vertex(v), self.prime(v), self.m),
                (self.prime(v), self.tv(v), r + 2),
            ];
            for (a, b, want) in pairs {
                if g.mult(a, b) != want {
                    return fail(format!("{}–{} has multiplicity {}", g.name(a), g.name(b), g.mult(a, b)));
                }
            }
        }
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            let (ca, cb) = (self.edge_copy(e, a), self.edge_copy(e, b));
            let pairs = [(self.vertex(a), ca, self.m), (self.vertex(b), cb, self.m), (ca, cb, r)];
            for (x, y, want) in pairs {
                if g.mult(x, y) != want {
                    return fail(format!("{}–{} has multiplicity {}", g.name(x), g.name(y), g.mult(x, y)));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;

    fn k1() -> Arc<MultiGraph> {
        Arc::new(MultiGraph::single_vertex("x"))
    }

    #[test]
    fn k1_gadget() {
        for r in 1..4 {
            let inst = build_reduction(&k1(), r).unwrap();
            assert_eq!(inst.gadget.n(), 4);
            assert_eq!(inst.m, 4 * r as u64 + 1);
            assert_eq!(inst.gadget.names(), &["T", "v:x", "p:x", "tv:x"]);
            inst.check_invariants().unwrap();
        }
    }

    #[test]
    fn k2_gadget() {
        let k2 = Arc::new(build_graph(&[("a", "b", 1)]).unwrap());
        let inst = build_reduction(&k2, 1).unwrap();
        assert_eq!(inst.gadget.n(), 9);
        assert_eq!(inst.m, 10);
        assert_eq!(inst.gadget.index_of("ev:0:b").unwrap(), inst.edge_copy(0, 1));
        inst.check_invariants().unwrap();
    }

    #[test]
    fn parallel_base_edges_get_separate_copies() {
        let banana = Arc::new(build_graph(&[("a", "b", 2)]).unwrap());
        let inst = build_reduction(&banana, 2).unwrap();
        assert_eq!(inst.edges.len(), 2);
        assert_eq!(inst.gadget.n(), 1 + 6 + 4);
        inst.check_invariants().unwrap();
    }

    #[test]
    fn formula_examples() {
        for r in 1..5 {
            assert_eq!(formula_gonality(&k1(), r, 1), 4 * r as i64);
        }
        let k2 = build_graph(&[("a", "b", 1)]).unwrap();
        assert_eq!(formula_gonality(&k2, 1, 1), 9);
        // Four vertices, five edges, independence number two (K_4 minus an edge).
        let diamond =
            build_graph(&[("a", "b", 1), ("a", "c", 1), ("a", "d", 1), ("b", "c", 1), ("b", "d", 1)]).unwrap();
        assert_eq!(diamond.independence_number().0, 2);
        assert_eq!(formula_gonality(&diamond, 2, 2), 43);
    }

    #[test]
    fn rank_zero_rejected() {
        assert_eq!(build_reduction(&k1(), 0), Err(Error::BadRank(0)));
    }
}
