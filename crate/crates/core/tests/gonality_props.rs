mod common;

use std::sync::Arc;

use chipfire::gonality::{dgon, dgon_upper_witness, dgon_with, sandwich_check};
use chipfire::reduction::build_reduction;
use chipfire::{Exec, MultiGraph, SearchConfig};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn gonality_bounds_and_trace(g in common::graph(5), r in 1usize..3) {
        let res = dgon(&g, r).unwrap();
        prop_assert!(res.degree <= (r * g.n()) as i64);
        prop_assert!(res.degree >= r as i64);
        prop_assert!(dgon_upper_witness(&res.witness, r).unwrap());
        prop_assert_eq!(res.witness.degree(), res.degree);
        // One trace row per degree; every row below the optimum rejected all
        // of its (non-empty) candidate list.
        let degrees: Vec<i64> = res.trace.iter().map(|t| t.degree).collect();
        prop_assert_eq!(degrees, (r as i64..=res.degree).collect::<Vec<_>>());
        for t in &res.trace[..res.trace.len() - 1] {
            prop_assert!(t.candidates > 0);
            prop_assert_eq!(t.examined, t.candidates);
            prop_assert_eq!(t.rejected, t.candidates);
        }
    }

    #[test]
    fn gonality_nondecreasing_in_rank(g in common::graph(4)) {
        let d1 = dgon(&g, 1).unwrap().degree;
        let d2 = dgon(&g, 2).unwrap().degree;
        let d3 = dgon(&g, 3).unwrap().degree;
        prop_assert!(d1 <= d2 && d2 <= d3);
    }

    #[test]
    fn schedule_does_not_change_witness(g in common::graph(6), r in 1usize..3) {
        let a = dgon_with(&g, r, &SearchConfig::sequential()).unwrap();
        let b = dgon_with(&g, r, &SearchConfig::new(Exec::Parallel, Default::default())).unwrap();
        prop_assert_eq!(a.degree, b.degree);
        prop_assert_eq!(a.witness, b.witness);
        prop_assert_eq!(a.trace, b.trace);
    }

    #[test]
    fn tree_gonality_is_rank(n in 1usize..7, seed in any::<u64>()) {
        // Random tree by attaching each vertex to an earlier one.
        let mut edges = Vec::new();
        for v in 1..n {
            let p = (seed as usize).wrapping_mul(v + 7) % v;
            edges.push((p.to_string(), v.to_string(), 1));
        }
        let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let g = Arc::new(MultiGraph::new(&names, &edges).unwrap());
        for r in 1..3 {
            prop_assert_eq!(dgon(&g, r).unwrap().degree, r as i64);
        }
    }
}

#[test]
fn gadget_gonality_matches_formula() {
    let k1 = Arc::new(MultiGraph::single_vertex("x"));
    for r in 1..=3 {
        let inst = build_reduction(&k1, r).unwrap();
        assert_eq!(dgon(&inst.gadget, r).unwrap().degree, inst.formula(1));
    }
    let k2 = Arc::new(chipfire::build_graph(&[("a", "b", 1)]).unwrap());
    let inst = build_reduction(&k2, 1).unwrap();
    assert_eq!(dgon(&inst.gadget, 1).unwrap().degree, inst.formula(1));
}

#[test]
fn subdivided_gadget_keeps_gonality() {
    let k1 = Arc::new(MultiGraph::single_vertex("x"));
    let inst = build_reduction(&k1, 1).unwrap();
    let g2 = Arc::new(inst.gadget.subdivide_uniform(2).unwrap());
    assert_eq!(dgon(&g2, 1).unwrap().degree, dgon(&inst.gadget, 1).unwrap().degree);
    let rep = sandwich_check(&inst.gadget, 1, 2, &SearchConfig::default()).unwrap();
    assert!(rep.consistent);
    assert_eq!(rep.sdgon_upper, rep.dgon);
}

#[test]
fn cycles() {
    for n in 3..=6 {
        let g = common::cycle(n);
        for r in 1..=3 {
            assert_eq!(dgon(&g, r).unwrap().degree, r as i64 + 1);
        }
    }
}
