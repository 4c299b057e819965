//! Reading an independent set back off an effective divisor on the gadget.

use num_rational::Ratio;
use serde::Serialize;

use super::ReductionInstance;
use crate::divisor::{Divisor, Reducer};
use crate::error::{Error, Result};
use crate::graph::VertexSet;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Extraction {
    /// Base vertices `v` with `T ~_D v`.
    pub equivalent_to_root: VertexSet,
    /// Base edges (with multiplicity) inside `equivalent_to_root`.
    pub induced_edges: u64,
    pub independent: VertexSet,
}

impl ReductionInstance {
    /// Size of the result is at least `|U_0| - |E(G[U_0])|`.
    pub fn extract_independent_set(&self, d: &Divisor) -> Result<Extraction> {
        extract_independent_set(self, d)
    }
}

pub fn extract_independent_set(inst: &ReductionInstance, d: &Divisor) -> Result<Extraction> {
    if d.host().id() != inst.gadget.id() {
        return Err(Error::HostMismatch);
    }
    if !d.is_effective() {
        return Err(Error::NotEffective);
    }
    let g = &inst.gadget;
    let root_form = Reducer::new(g, ReductionInstance::ROOT).reduce(d.coeffs());
    let base = &inst.base;
    let mut u0 = VertexSet::empty(base);
    for v in 0..base.n() {
        let gv = inst.vertex(v);
        if Reducer::new(g, gv).reduce(d.coeffs()) == root_form {
            u0.insert(v);
        }
    }
    let induced_edges = base
        .edge_groups()
        .iter()
        .filter(|&&(a, b, _)| u0.contains(a) && u0.contains(b))
        .map(|&(_, _, m)| m)
        .sum();
    let mut independent = u0.clone();
    for &(a, b, _) in base.edge_groups() {
        if independent.contains(a) && independent.contains(b) {
            independent.remove(a.max(b));
        }
    }
    debug_assert!(base.is_independent(&independent));
    Ok(Extraction { equivalent_to_root: u0, induced_edges, independent })
}

/// Size guaranteed by the gap argument: `(1 - (25r - 3)ε)·α`.
pub fn apx_guarantee(r: usize, eps: Ratio<i64>, alpha: usize) -> Ratio<i64> {
    let r = r as i64;
    (Ratio::from_integer(1) - Ratio::from_integer(25 * r - 3) * eps) * Ratio::from_integer(alpha as i64)
}
