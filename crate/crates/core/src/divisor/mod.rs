//! Divisors, firing scripts and subset-firing.

mod dhar;
mod rank;
mod stopping;

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{MultiGraph, VertexSet};

pub use dhar::Reducer;
pub use rank::{colex_multisets, ColexMultisets, RankCheck};
pub use stopping::{EquivalenceClasses, StoppingPath};

/// Integer chip counts on the vertices of a host graph.
#[derive(Clone)]
pub struct Divisor {
    host: Arc<MultiGraph>,
    coeffs: Vec<i64>,
}

impl PartialEq for Divisor {
    fn eq(&self, other: &Self) -> bool {
        self.host.id() == other.host.id() && self.coeffs == other.coeffs
    }
}

impl Eq for Divisor {}

impl Hash for Divisor {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.host.id().hash(state);
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `2·a + 1·c - 1·d`; the zero divisor prints as `0`.
impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            if !first {
                f.write_str(" ")?;
            }
            let sep = if first && c >= 0 { "" } else { " " };
            write!(f, "{sign}{sep}{}·{}", c.abs(), self.host.name(v))?;
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl Divisor {
    pub fn new(host: &Arc<MultiGraph>, coeffs: Vec<i64>) -> Result<Self> {
        if coeffs.len() != host.n() {
            return Err(Error::BadParams(format!(
                "divisor has {} coefficients, graph has {} vertices",
                coeffs.len(),
                host.n()
            )));
        }
        Ok(Divisor { host: Arc::clone(host), coeffs })
    }

    pub fn zero(host: &Arc<MultiGraph>) -> Self {
        Divisor { host: Arc::clone(host), coeffs: vec![0; host.n()] }
    }

    /// `c` chips on every vertex.
    pub fn constant(host: &Arc<MultiGraph>, c: i64) -> Self {
        Divisor { host: Arc::clone(host), coeffs: vec![c; host.n()] }
    }

    /// `val(v) - 2` at every vertex.
    pub fn canonical(host: &Arc<MultiGraph>) -> Self {
        let coeffs = (0..host.n()).map(|v| host.valence(v) as i64 - 2).collect();
        Divisor { host: Arc::clone(host), coeffs }
    }

    pub fn from_pairs<S: AsRef<str>>(host: &Arc<MultiGraph>, pairs: &[(S, i64)]) -> Result<Self> {
        let mut d = Self::zero(host);
        for (name, c) in pairs {
            let v = host.index_of(name.as_ref())?;
            d.coeffs[v] += c;
        }
        Ok(d)
    }

    pub(crate) fn from_raw(host: &Arc<MultiGraph>, coeffs: Vec<i64>) -> Self {
        debug_assert_eq!(coeffs.len(), host.n());
        Divisor { host: Arc::clone(host), coeffs }
    }

    pub fn host(&self) -> &Arc<MultiGraph> {
        &self.host
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn get(&self, v: usize) -> i64 {
        self.coeffs[v]
    }

    pub fn at(&self, name: &str) -> Result<i64> {
        Ok(self.coeffs[self.host.index_of(name)?])
    }

    pub fn degree(&self) -> i64 {
        self.coeffs.iter().sum()
    }

    pub fn is_effective(&self) -> bool {
        self.coeffs.iter().all(|&c| c >= 0)
    }

    pub fn in_debt(&self) -> Vec<usize> {
        (0..self.coeffs.len()).filter(|&v| self.coeffs[v] < 0).collect()
    }

    pub fn chips_on(&self, set: &VertexSet) -> i64 {
        set.iter().map(|v| self.coeffs[v]).sum()
    }

    pub fn same_host(&self, other: &Divisor) -> Result<()> {
        if self.host.id() == other.host.id() {
            Ok(())
        } else {
            Err(Error::HostMismatch)
        }
    }

    pub fn plus(&self, other: &Divisor) -> Result<Divisor> {
        self.same_host(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(Divisor::from_raw(&self.host, coeffs))
    }

    pub fn minus(&self, other: &Divisor) -> Result<Divisor> {
        self.same_host(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(Divisor::from_raw(&self.host, coeffs))
    }

    pub fn with_added(&self, v: usize, delta: i64) -> Divisor {
        let mut d = self.clone();
        d.coeffs[v] += delta;
        d
    }

    /// Fires every vertex of `set` once: `D - L·1_U`.
    pub fn fire_set(&self, set: &VertexSet) -> Result<Divisor> {
        set.check_host(&self.host)?;
        let mut coeffs = self.coeffs.clone();
        fire_in_place(&self.host, &mut coeffs, &set.indicator(), 1);
        Ok(Divisor::from_raw(&self.host, coeffs))
    }

    /// `D - L·σ`.
    pub fn apply_script(&self, script: &FiringScript) -> Result<Divisor> {
        script.check_host(&self.host)?;
        let g = &*self.host;
        let coeffs = (0..g.n())
            .map(|v| {
                let flow: i64 = g
                    .neighbors(v)
                    .iter()
                    .map(|&(w, m)| m as i64 * (script.counts[v] - script.counts[w]))
                    .sum();
                self.coeffs[v] - flow
            })
            .collect();
        Ok(Divisor::from_raw(&self.host, coeffs))
    }

    /// A subset-firing sequence from `self` to the effective `target` along
    /// which no vertex gains debt and no debt deepens. The sequence is the
    /// nested level sets of the normalised script; each step is re-checked.
    pub fn benign_play(&self, target: &Divisor) -> Result<Vec<VertexSet>> {
        self.same_host(target)?;
        if !target.is_effective() {
            return Err(Error::NotEffectiveTarget);
        }
        let script = FiringScript::between(self, target)?;
        let sets = script.level_sets(&self.host);
        let mut cur = self.clone();
        for set in &sets {
            let next = cur.fire_set(set)?;
            for w in 0..self.host.n() {
                let (before, after) = (cur.coeffs[w], next.coeffs[w]);
                if after < 0 && (before >= 0 || after < before) {
                    return Err(Error::InvariantViolated(format!(
                        "firing increased debt on `{}` ({before} -> {after})",
                        self.host.name(w)
                    )));
                }
            }
            cur = next;
        }
        if cur != *target {
            return Err(Error::InvariantViolated("level sets did not reach the target".into()));
        }
        Ok(sets)
    }
}

pub(crate) fn fire_in_place(g: &MultiGraph, chips: &mut [i64], inside: &[bool], times: i64) {
    for v in 0..g.n() {
        if !inside[v] {
            continue;
        }
        for &(w, m) in g.neighbors(v) {
            if !inside[w] {
                chips[v] -= times * m as i64;
                chips[w] += times * m as i64;
            }
        }
    }
}

/// Per-vertex firing counts. Scripts differing by a constant fire the same.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiringScript {
    counts: Vec<i64>,
}

impl FiringScript {
    pub fn new(counts: Vec<i64>) -> Self {
        FiringScript { counts }
    }

    pub fn zero(n: usize) -> Self {
        FiringScript { counts: vec![0; n] }
    }

    pub fn counts(&self) -> &[i64] {
        &self.counts
    }

    fn check_host(&self, g: &MultiGraph) -> Result<()> {
        if self.counts.len() != g.n() {
            return Err(Error::UnknownVertex(format!(
                "script covers {} vertices, graph has {}",
                self.counts.len(),
                g.n()
            )));
        }
        Ok(())
    }

    /// Shifted so that the minimum entry is zero.
    pub fn normalized(&self) -> FiringScript {
        let min = self.counts.iter().copied().min().unwrap_or(0);
        FiringScript { counts: self.counts.iter().map(|c| c - min).collect() }
    }

    /// The script σ (normalised) with `to = from - L·σ`.
    pub fn between(from: &Divisor, to: &Divisor) -> Result<FiringScript> {
        from.same_host(to)?;
        if from.degree() != to.degree() {
            return Err(Error::NotEquivalent);
        }
        let mut reducer = Reducer::new(&from.host, 0);
        let (a, sa) = reducer.reduce_with_script(from.coeffs());
        let (b, sb) = reducer.reduce_with_script(to.coeffs());
        if a != b {
            return Err(Error::NotEquivalent);
        }
        let counts = sa.iter().zip(&sb).map(|(x, y)| x - y).collect();
        Ok(FiringScript { counts }.normalized())
    }

    /// `U_1 ⊆ … ⊆ U_k` where `U_l` holds the vertices fired at least
    /// `k + 1 - l` times by the normalised script.
    pub fn level_sets(&self, g: &MultiGraph) -> Vec<VertexSet> {
        let s = self.normalized();
        let k = s.counts.iter().copied().max().unwrap_or(0);
        (1..=k)
            .map(|l| {
                let members = (0..s.counts.len()).filter(|&v| s.counts[v] >= k + 1 - l);
                VertexSet::from_indices(g, members).expect("script sized to host")
            })
            .collect()
    }
}
