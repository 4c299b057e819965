//! Exact r-th divisorial gonality and bounded-subdivision surrogates.
//!
//! Degrees `k = r, r+1, …, r·|V|` are searched in turn. A divisor of
//! rank `>= 0` has an effective class, so one candidate per class suffices:
//! the q-reduced representative (`q` = first vertex), i.e. a superstable
//! configuration off `q` topped up with `k - |x|` chips on `q`. The
//! superstables are built level by level, adding one chip at a time, since
//! they are closed under removing chips. Within a degree, candidates are
//! ordered colexicographically and the first one of rank `>= r` is the
//! witness; the upper end of the range is always attained by `r` chips on
//! every vertex.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::sync::Arc;

use serde::Serialize;

use crate::budget::Budget;
use crate::divisor::{Divisor, Reducer};
use crate::error::{Error, Result};
use crate::exec::{Exec, SearchConfig};
use crate::graph::MultiGraph;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeTrace {
    pub degree: i64,
    /// q-reduced effective representatives of this degree.
    pub candidates: usize,
    /// Candidates decided, in colex order.
    pub examined: usize,
    /// Candidates shown to have rank below `r` (each with a failing `E`).
    pub rejected: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GonalityResult {
    pub r: usize,
    pub degree: i64,
    pub witness: Divisor,
    pub trace: Vec<DegreeTrace>,
}

/// Outcome of a search capped at some degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundedSearch {
    pub found: Option<(i64, Divisor)>,
    pub trace: Vec<DegreeTrace>,
}

fn colex_cmp(a: &[i64], b: &[i64]) -> Ordering {
    a.iter().rev().cmp(b.iter().rev())
}

/// Superstable configurations off `q`, grouped by chip count.
struct Superstables<'g> {
    reducer: Reducer<'g>,
    levels: Vec<Vec<Vec<i64>>>,
}

impl<'g> Superstables<'g> {
    fn new(g: &'g MultiGraph) -> Self {
        Superstables { reducer: Reducer::new(g, 0), levels: vec![vec![vec![0; g.n()]]] }
    }

    fn level(&mut self, s: usize, budget: &Budget) -> Result<&[Vec<i64>]> {
        while self.levels.len() <= s {
            let prev = self.levels.last().unwrap();
            let mut seen: HashSet<Vec<i64>> = HashSet::new();
            let mut next = Vec::new();
            for x in prev {
                for v in 1..x.len() {
                    let mut y = x.clone();
                    y[v] += 1;
                    if seen.contains(&y) {
                        continue;
                    }
                    budget.tick()?;
                    if self.reducer.is_superstable(&y) {
                        seen.insert(y.clone());
                        next.push(y);
                    }
                }
            }
            self.levels.push(next);
        }
        Ok(&self.levels[s])
    }

    /// q-reduced effective divisors of degree `k`, colex-sorted.
    fn candidates(&mut self, k: i64, budget: &Budget) -> Result<Vec<Vec<i64>>> {
        let mut out = Vec::new();
        for s in 0..=k as usize {
            if s > 0 && self.levels.get(s - 1).is_some_and(|l| l.is_empty()) {
                break;
            }
            for x in self.level(s, budget)? {
                let mut d = x.clone();
                d[0] = k - s as i64;
                out.push(d);
            }
        }
        out.sort_by(|a, b| colex_cmp(a, b));
        Ok(out)
    }
}

/// Searches degrees `r ..= max_degree` for a divisor of rank at least `r`.
pub fn search_up_to(g: &Arc<MultiGraph>, r: usize, max_degree: i64, cfg: &SearchConfig) -> Result<BoundedSearch> {
    if r == 0 {
        return Err(Error::BadRank(0));
    }
    let mut stables = Superstables::new(g);
    let mut trace = Vec::new();
    for k in r as i64..=max_degree {
        let cands = stables.candidates(k, &cfg.budget)?;
        let hit = cfg.exec.find_first(&cands, |c| {
            let d = Divisor::from_raw(g, c.clone());
            Ok(d.rank_at_least_in(r, Exec::Sequential, &cfg.budget)?.holds)
        })?;
        match hit {
            Some(i) => {
                trace.push(DegreeTrace { degree: k, candidates: cands.len(), examined: i + 1, rejected: i });
                let witness = Divisor::from_raw(g, cands[i].clone());
                return Ok(BoundedSearch { found: Some((k, witness)), trace });
            }
            None => trace.push(DegreeTrace {
                degree: k,
                candidates: cands.len(),
                examined: cands.len(),
                rejected: cands.len(),
            }),
        }
    }
    Ok(BoundedSearch { found: None, trace })
}

pub fn dgon(g: &Arc<MultiGraph>, r: usize) -> Result<GonalityResult> {
    dgon_with(g, r, &SearchConfig::default())
}

pub fn dgon_with(g: &Arc<MultiGraph>, r: usize, cfg: &SearchConfig) -> Result<GonalityResult> {
    let upper = (r * g.n()) as i64;
    let search = search_up_to(g, r, upper, cfg)?;
    match search.found {
        Some((degree, witness)) => Ok(GonalityResult { r, degree, witness, trace: search.trace }),
        None => Err(Error::InvariantViolated(format!(
            "no rank-{r} divisor up to degree {upper}, but r chips everywhere has rank >= r"
        ))),
    }
}

/// Accepts any claimed witness: true iff `D` has rank at least `r`.
pub fn dgon_upper_witness(d: &Divisor, r: usize) -> Result<bool> {
    if !d.is_effective() {
        return Err(Error::NotEffective);
    }
    Ok(d.rank_at_least(r)?.holds)
}

/// Minimum of `dgon_r(σ_k(G))` over `k = 1..=k_max`. An upper bound on both
/// the stable gonality (only uniform subdivisions are searched) and the
/// metric gonality of the unit-length metric graph (only finitely many `k`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubdivisionBound {
    pub upper_bound: i64,
    /// Smallest `k` attaining the bound.
    pub best_k: i64,
    /// `(k, dgon_r(σ_k(G)))` for every `k` searched.
    pub per_k: Vec<(i64, i64)>,
}

fn subdivision_bound(g: &Arc<MultiGraph>, r: usize, k_max: i64, cfg: &SearchConfig) -> Result<SubdivisionBound> {
    if k_max < 1 {
        return Err(Error::BadK(k_max));
    }
    let mut per_k = Vec::new();
    for k in 1..=k_max {
        let sub = Arc::new(g.subdivide_uniform(k)?);
        per_k.push((k, dgon_with(&sub, r, cfg)?.degree));
    }
    let &(best_k, upper_bound) = per_k.iter().min_by_key(|&&(k, d)| (d, k)).unwrap();
    Ok(SubdivisionBound { upper_bound, best_k, per_k })
}

pub fn sdgon_upper(g: &Arc<MultiGraph>, r: usize, k_max: i64, cfg: &SearchConfig) -> Result<SubdivisionBound> {
    subdivision_bound(g, r, k_max, cfg)
}

/// Exact whenever the minimum over all `k` is attained at some `k <= k_max`.
pub fn metric_dgon_upper(g: &Arc<MultiGraph>, r: usize, k_max: i64, cfg: &SearchConfig) -> Result<SubdivisionBound> {
    subdivision_bound(g, r, k_max, cfg)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SandwichReport {
    pub r: usize,
    pub k_max: i64,
    pub dgon: i64,
    pub sdgon_upper: i64,
    pub metric_upper: i64,
    pub best_k: i64,
    /// `metric_upper <= dgon`, `sdgon_upper <= metric_upper`, and the `k = 1`
    /// entry of the subdivision search reproduces `dgon`.
    pub consistent: bool,
}

/// Stable ≤ metric ≤ divisorial, checked on the computed values. The two
/// surrogates share one search over `σ_1..σ_{k_max}`.
pub fn sandwich_check(g: &Arc<MultiGraph>, r: usize, k_max: i64, cfg: &SearchConfig) -> Result<SandwichReport> {
    let exact = dgon_with(g, r, cfg)?.degree;
    let bound = metric_dgon_upper(g, r, k_max, cfg)?;
    let sdgon = bound.upper_bound;
    let consistent = bound.upper_bound <= exact && sdgon <= bound.upper_bound && bound.per_k[0] == (1, exact);
    Ok(SandwichReport {
        r,
        k_max,
        dgon: exact,
        sdgon_upper: sdgon,
        metric_upper: bound.upper_bound,
        best_k: bound.best_k,
        consistent,
    })
}
