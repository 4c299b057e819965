//! The rank-`r` divisor built from an independent set, and the explicit
//! firing that pays off each debt placement.

use serde::Serialize;

use super::{ReductionInstance, Role};
use crate::divisor::{colex_multisets, Divisor, RankCheck};
use crate::error::{Error, Result};
use crate::exec::SearchConfig;
use crate::graph::{MultiGraph, VertexSet};

/// An independent set `S` of the base graph, an ordering `v_1..v_k` of
/// `V \ S`, and an orientation of every base edge: edges leaving `S` point
/// away from it, edges inside `V \ S` point from the earlier vertex to the
/// later one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrientedIndependentData {
    pub independent: VertexSet,
    pub ordering: Vec<usize>,
    /// `(tail, head)` per expanded base edge.
    pub orientation: Vec<(usize, usize)>,
    position: Vec<Option<usize>>,
}

impl OrientedIndependentData {
    /// Orders `V \ S` by vertex index.
    pub fn new(inst: &ReductionInstance, independent: VertexSet) -> Result<Self> {
        let g = &inst.base;
        check_independent(g, &independent)?;
        let ordering: Vec<usize> = (0..g.n()).filter(|v| !independent.contains(*v)).collect();
        let position = positions(g.n(), &ordering);
        let orientation = inst
            .edges
            .iter()
            .map(|&(a, b)| match (independent.contains(a), independent.contains(b)) {
                (true, _) => (a, b),
                (_, true) => (b, a),
                _ if position[a] < position[b] => (a, b),
                _ => (b, a),
            })
            .collect();
        Ok(OrientedIndependentData { independent, ordering, orientation, position })
    }

    pub fn from_parts(
        inst: &ReductionInstance,
        independent: VertexSet,
        ordering: Vec<usize>,
        orientation: Vec<(usize, usize)>,
    ) -> Result<Self> {
        let g = &inst.base;
        check_independent(g, &independent)?;
        let bad = |msg: String| Err(Error::IncompleteOrientation(msg));
        let mut seen = vec![false; g.n()];
        for &v in &ordering {
            if v >= g.n() || independent.contains(v) || std::mem::replace(&mut seen[v], true) {
                return bad(format!("ordering entry {v} is not a fresh vertex outside S"));
            }
        }
        if ordering.len() + independent.len() != g.n() {
            return bad("ordering does not cover V \\ S".into());
        }
        if orientation.len() != inst.edges.len() {
            return bad(format!("{} edges oriented, {} expected", orientation.len(), inst.edges.len()));
        }
        let position = positions(g.n(), &ordering);
        for (e, (&(a, b), &(t, h))) in inst.edges.iter().zip(&orientation).enumerate() {
            if !((t, h) == (a, b) || (t, h) == (b, a)) {
                return bad(format!("edge {e} is oriented between the wrong endpoints"));
            }
            let ok = match (independent.contains(t), independent.contains(h)) {
                (true, false) => true,
                (false, false) => position[t] < position[h],
                _ => false,
            };
            if !ok {
                return bad(format!("edge {e} {}→{} breaks the ordering", g.name(t), g.name(h)));
            }
        }
        Ok(OrientedIndependentData { independent, ordering, orientation, position })
    }

    fn in_s(&self, v: usize) -> bool {
        self.independent.contains(v)
    }
}

fn check_independent(g: &MultiGraph, s: &VertexSet) -> Result<()> {
    s.check_host(g)?;
    for &(a, b, _) in g.edge_groups() {
        if s.contains(a) && s.contains(b) {
            return Err(Error::NotIndependent(g.name(a).into(), g.name(b).into()));
        }
    }
    Ok(())
}

fn positions(n: usize, ordering: &[usize]) -> Vec<Option<usize>> {
    let mut pos = vec![None; n];
    for (i, &v) in ordering.iter().enumerate() {
        pos[v] = Some(i);
    }
    pos
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    pub holds: bool,
    pub degree: i64,
    /// Every placement paid off directly or by one structured firing.
    pub structured_ok: bool,
    #[serde(serialize_with = "serialize_opt_divisor")]
    pub structured_failure: Option<Divisor>,
    pub placements: usize,
    pub rank_check: RankCheck,
}

fn serialize_opt_divisor<S: serde::Serializer>(d: &Option<Divisor>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match d {
        Some(d) => serde::Serialize::serialize(&crate::io::divisor_json(d), s),
        None => s.serialize_none(),
    }
}

impl ReductionInstance {
    fn check_data(&self, data: &OrientedIndependentData) -> Result<()> {
        data.independent.check_host(&self.base)?;
        if data.orientation.len() != self.edges.len() {
            return Err(Error::IncompleteOrientation("orientation belongs to another base graph".into()));
        }
        Ok(())
    }

    /// Degree `r + (3r+1)|V| + (2r-1)|E| - |S|`.
    pub fn witness_divisor(&self, data: &OrientedIndependentData) -> Result<Divisor> {
        self.check_data(data)?;
        let r = self.r as i64;
        let mut c = vec![0i64; self.gadget.n()];
        c[Self::ROOT] = r;
        for v in 0..self.base.n() {
            c[self.vertex(v)] = r;
            if data.in_s(v) {
                c[self.tv(v)] = r;
                c[self.prime(v)] = r;
            } else {
                c[self.tv(v)] = 2 * r + 1;
            }
        }
        for (e, &(t, h)) in data.orientation.iter().enumerate() {
            let (ct, ch) = (self.edge_copy(e, t), self.edge_copy(e, h));
            if data.in_s(t) {
                c[ct] = 2 * r - 1;
            } else {
                c[ct] = r;
                c[ch] = r - 1;
            }
        }
        Divisor::new(&self.gadget, c)
    }

    /// Subset whose firing clears the debt of `d_minus_e = D - E`.
    pub fn structured_debt_play(&self, data: &OrientedIndependentData, d_minus_e: &Divisor) -> Result<VertexSet> {
        self.check_data(data)?;
        if d_minus_e.host().id() != self.gadget.id() {
            return Err(Error::HostMismatch);
        }
        let g = &self.gadget;
        let debt = d_minus_e.in_debt();
        if debt.is_empty() {
            return Err(Error::UnexpectedDebtPattern("no debt".into()));
        }
        let unexpected = |x: usize| Err(Error::UnexpectedDebtPattern(format!("debt on {}", g.name(x))));

        let inner_edge = |e: usize| {
            let (a, b) = self.edges[e];
            !data.in_s(a) && !data.in_s(b)
        };
        let inner_debt: Vec<usize> = debt
            .iter()
            .copied()
            .filter(|&x| matches!(self.roles[x], Role::Ev { edge, .. } if inner_edge(edge)))
            .collect();

        let fire = if let Some(&x) = inner_debt.first() {
            if debt.len() > 1 {
                return Err(Error::UnexpectedDebtPattern("debt inside V \\ S alongside other debt".into()));
            }
            let Role::Ev { edge, endpoint } = self.roles[x] else { unreachable!() };
            if data.orientation[edge].1 != endpoint {
                return unexpected(x);
            }
            let i = data.position[endpoint].expect("inner edges join ordered vertices");
            let mut w = VertexSet::empty(g);
            for &v in &data.ordering[i..] {
                w.insert(self.vertex(v));
                w.insert(self.prime(v));
            }
            for (e, &(a, b)) in self.edges.iter().enumerate() {
                for v in [a, b] {
                    if data.position[v].is_some_and(|p| p >= i) {
                        w.insert(self.edge_copy(e, v));
                    }
                }
            }
            w.complement()
        } else {
            for &x in &debt {
                let ok = match self.roles[x] {
                    Role::Prime { vertex } => !data.in_s(vertex),
                    Role::Ev { edge, endpoint } => {
                        let (a, b) = self.edges[edge];
                        let other = if endpoint == a { b } else { a };
                        !data.in_s(endpoint) && data.in_s(other)
                    }
                    _ => false,
                };
                if !ok {
                    return unexpected(x);
                }
            }
            let mut u = VertexSet::empty(g);
            u.insert(Self::ROOT);
            for v in 0..self.base.n() {
                u.insert(self.tv(v));
                if data.in_s(v) {
                    u.insert(self.vertex(v));
                    u.insert(self.prime(v));
                }
            }
            for (e, &(a, b)) in self.edges.iter().enumerate() {
                for v in [a, b] {
                    if data.in_s(v) {
                        u.insert(self.edge_copy(e, v));
                    }
                }
            }
            u
        };

        let after = d_minus_e.fire_set(&fire)?;
        if !after.is_effective() {
            return Err(Error::InvariantViolated(format!(
                "firing {:?} leaves debt on {:?}",
                fire.names(g),
                after.in_debt().iter().map(|&v| g.name(v)).collect::<Vec<_>>()
            )));
        }
        Ok(fire)
    }

    pub fn verify_witness(&self, data: &OrientedIndependentData, cfg: &SearchConfig) -> Result<WitnessReport> {
        let d = self.witness_divisor(data)?;
        self.verify_divisor(data, &d, cfg)
    }

    /// Checks every degree-`r` placement through [`Self::structured_debt_play`]
    /// and cross-checks with the generic rank test.
    pub fn verify_divisor(&self, data: &OrientedIndependentData, d: &Divisor, cfg: &SearchConfig) -> Result<WitnessReport> {
        let n = self.gadget.n();
        let placements = colex_multisets(n, self.r);
        let fails = |e: &Vec<usize>| -> Result<bool> {
            cfg.budget.tick()?;
            let mut c = d.coeffs().to_vec();
            for &v in e {
                c[v] -= 1;
            }
            let dme = Divisor::new(&self.gadget, c)?;
            if dme.is_effective() {
                return Ok(false);
            }
            match self.structured_debt_play(data, &dme) {
                Ok(_) => Ok(false),
                Err(Error::UnexpectedDebtPattern(_) | Error::InvariantViolated(_)) => Ok(true),
                Err(e) => Err(e),
            }
        };
        let first = cfg.exec.find_first(&placements, fails)?;
        let structured_failure = first.map(|i| {
            let mut e = vec![0; n];
            for &v in &placements[i] {
                e[v] += 1;
            }
            Divisor::from_raw(&self.gadget, e)
        });
        let rank_check = d.rank_at_least_with(self.r, cfg)?;
        Ok(WitnessReport {
            holds: structured_failure.is_none() && rank_check.holds,
            degree: d.degree(),
            structured_ok: structured_failure.is_none(),
            structured_failure,
            placements: placements.len(),
            rank_check,
        })
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::graph::build_graph;
    use crate::reduction::build_reduction;

    fn path3() -> Arc<MultiGraph> {
        Arc::new(build_graph(&[("a", "b", 1), ("b", "c", 1)]).unwrap())
    }

    #[test]
    fn k1_witness() {
        let base = Arc::new(MultiGraph::single_vertex("x"));
        for r in 1..3 {
            let inst = build_reduction(&base, r).unwrap();
            let s = VertexSet::all(&base);
            let data = OrientedIndependentData::new(&inst, s).unwrap();
            let d = inst.witness_divisor(&data).unwrap();
            assert_eq!(d.degree(), 4 * r as i64);
            assert!(inst.verify_witness(&data, &SearchConfig::default()).unwrap().holds);
        }
    }

    #[test]
    fn witness_degrees_match_formula() {
        let base = path3();
        for r in 1..3 {
            let inst = build_reduction(&base, r).unwrap();
            for names in [vec![], vec!["a"], vec!["a", "c"], vec!["b"]] {
                let s = VertexSet::from_names(&base, names.iter().copied()).unwrap();
                let k = s.len();
                let data = OrientedIndependentData::new(&inst, s).unwrap();
                let d = inst.witness_divisor(&data).unwrap();
                assert!(d.is_effective());
                assert_eq!(d.degree(), inst.formula(k));
            }
        }
    }

    #[test]
    fn path_witness_verifies() {
        let base = path3();
        let inst = build_reduction(&base, 1).unwrap();
        for names in [vec!["a", "c"], vec!["b"], vec![]] {
            let s = VertexSet::from_names(&base, names.iter().copied()).unwrap();
            let data = OrientedIndependentData::new(&inst, s).unwrap();
            let rep = inst.verify_witness(&data, &SearchConfig::default()).unwrap();
            assert!(rep.structured_ok, "{names:?}: {:?}", rep.structured_failure);
            assert!(rep.rank_check.holds);
        }
    }

    #[test]
    fn dependent_set_rejected() {
        let base = path3();
        let inst = build_reduction(&base, 1).unwrap();
        let s = VertexSet::from_names(&base, ["a", "b"]).unwrap();
        assert!(matches!(OrientedIndependentData::new(&inst, s), Err(Error::NotIndependent(..))));
    }

    #[test]
    fn bad_orientation_rejected() {
        let base = path3();
        let inst = build_reduction(&base, 1).unwrap();
        let s = VertexSet::from_names(&base, ["a"]).unwrap();
        let b = base.index_of("b").unwrap();
        let c = base.index_of("c").unwrap();
        let a = base.index_of("a").unwrap();
        let err = OrientedIndependentData::from_parts(&inst, s.clone(), vec![b, c], vec![(b, a), (b, c)]);
        assert!(matches!(err, Err(Error::IncompleteOrientation(_))));
        let err = OrientedIndependentData::from_parts(&inst, s.clone(), vec![c, b], vec![(a, b), (b, c)]);
        assert!(matches!(err, Err(Error::IncompleteOrientation(_))));
        let err = OrientedIndependentData::from_parts(&inst, s.clone(), vec![b], vec![(a, b), (b, c)]);
        assert!(matches!(err, Err(Error::IncompleteOrientation(_))));
        OrientedIndependentData::from_parts(&inst, s, vec![b, c], vec![(a, b), (b, c)]).unwrap();
    }

    #[test]
    fn no_debt_is_unexpected() {
        let base = path3();
        let inst = build_reduction(&base, 1).unwrap();
        let data = OrientedIndependentData::new(&inst, VertexSet::empty(&base)).unwrap();
        let d = inst.witness_divisor(&data).unwrap();
        assert!(matches!(inst.structured_debt_play(&data, &d), Err(Error::UnexpectedDebtPattern(_))));
    }

    #[test]
    fn broken_witness_fails() {
        let base = path3();
        let inst = build_reduction(&base, 1).unwrap();
        let s = VertexSet::from_names(&base, ["a", "c"]).unwrap();
        let data = OrientedIndependentData::new(&inst, s).unwrap();
        let d = inst.witness_divisor(&data).unwrap();
        let v = inst.gadget.index_of("tv:b").unwrap();
        let broken = d.with_added(v, -2);
        let rep = inst.verify_divisor(&data, &broken, &SearchConfig::default()).unwrap();
        assert!(!rep.holds);
        assert!(!rep.structured_ok);
    }
}
