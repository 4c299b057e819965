//! Rank via exhaustive debt placement.
//!
//! Effective divisors `E` of degree `r` on `n` vertices correspond to
//! `r`-multisets of vertices; there are `C(n + r - 1, n - 1)` of them. They
//! are visited in colexicographic order (largest vertex index first), which
//! fixes the failing certificate reported by [`Divisor::rank_at_least`]
//! regardless of how the checks are scheduled.

use serde::Serialize;

use super::{Divisor, Reducer};
use crate::error::Result;
use crate::budget::Budget;
use crate::exec::{Exec, SearchConfig};

/// Non-decreasing index sequences of length `r` over `0..n`, colex order.
#[derive(Debug, Clone)]
pub struct ColexMultisets {
    n: usize,
    cur: Option<Vec<usize>>,
}

impl ColexMultisets {
    pub fn new(n: usize, r: usize) -> Self {
        let cur = if n == 0 && r > 0 { None } else { Some(vec![0; r]) };
        ColexMultisets { n, cur }
    }
}

impl Iterator for ColexMultisets {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.cur.take()?;
        let r = out.len();
        let mut next = out.clone();
        for j in 0..r {
            let cap = if j + 1 == r { self.n - 1 } else { next[j + 1] };
            if next[j] < cap {
                next[j] += 1;
                next[..j].fill(0);
                self.cur = Some(next);
                break;
            }
        }
        Some(out)
    }
}

pub fn colex_multisets(n: usize, r: usize) -> Vec<Vec<usize>> {
    ColexMultisets::new(n, r).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankCheck {
    pub holds: bool,
    /// Colex-least `E` with `|D - E|` empty.
    #[serde(serialize_with = "serialize_opt_divisor")]
    pub failing: Option<Divisor>,
    /// Length of the colex prefix of candidates decided: all of them when
    /// the check holds, up to and including the failing one otherwise.
    pub examined: usize,
}

fn serialize_opt_divisor<S: serde::Serializer>(d: &Option<Divisor>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match d {
        Some(d) => crate::io::divisor_json(d).serialize(s),
        None => s.serialize_none(),
    }
}

impl Divisor {
    pub fn rank_at_least(&self, r: usize) -> Result<RankCheck> {
        self.rank_at_least_with(r, &SearchConfig::default())
    }

    pub fn rank_at_least_with(&self, r: usize, cfg: &SearchConfig) -> Result<RankCheck> {
        self.rank_at_least_in(r, cfg.exec, &cfg.budget)
    }

    pub(crate) fn rank_at_least_in(&self, r: usize, exec: Exec, budget: &Budget) -> Result<RankCheck> {
        let g = self.host();
        let candidates = colex_multisets(g.n(), r);
        let base = self.coeffs();
        let fails = |e: &Vec<usize>| -> Result<bool> {
            budget.tick()?;
            let mut chips = base.to_vec();
            for &v in e {
                chips[v] -= 1;
            }
            Ok(!Reducer::new(g, 0).winnable(&mut chips))
        };
        let first = exec.find_first(&candidates, fails)?;
        Ok(match first {
            None => RankCheck { holds: true, failing: None, examined: candidates.len() },
            Some(i) => {
                let mut e = vec![0; g.n()];
                for &v in &candidates[i] {
                    e[v] += 1;
                }
                RankCheck { holds: false, failing: Some(Divisor::from_raw(g, e)), examined: i + 1 }
            }
        })
    }

    /// `-1` when the class has no effective member, otherwise the largest
    /// `r` for which every degree-`r` debt placement can be paid off.
    pub fn rank(&self) -> Result<i64> {
        self.rank_with(&SearchConfig::default())
    }

    pub fn rank_with(&self, cfg: &SearchConfig) -> Result<i64> {
        if !self.effective_in_class() {
            return Ok(-1);
        }
        let mut r = 0usize;
        while (r as i64) < self.degree() && self.rank_at_least_with(r + 1, cfg)?.holds {
            r += 1;
        }
        Ok(r as i64)
    }
}
