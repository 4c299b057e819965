//! Seeded random connected simple graphs, vertices named `0..n`.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::MultiGraph;

/// Rejection sampling stops after this many disconnected draws.
pub const MAX_ATTEMPTS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EdgeModel {
    /// Each pair independently with probability `p`.
    Probability(f64),
    /// Exactly `m` distinct pairs, uniformly.
    Count(usize),
}

pub fn random_graph(n: usize, model: EdgeModel, seed: u64) -> Result<MultiGraph> {
    if n == 0 {
        return Err(Error::BadParams("n must be at least 1".into()));
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    match model {
        EdgeModel::Probability(p) if !(0.0..=1.0).contains(&p) => {
            return Err(Error::BadParams(format!("p = {p} is not a probability")));
        }
        EdgeModel::Count(m) if m > pairs.len() => {
            return Err(Error::BadParams(format!("{m} edges do not fit on {n} vertices")));
        }
        EdgeModel::Count(m) if m + 1 < n => {
            return Err(Error::BadParams(format!("{m} edges cannot connect {n} vertices")));
        }
        EdgeModel::Probability(p) if p == 0.0 && n > 1 => {
            return Err(Error::BadParams("p = 0 never yields a connected graph".into()));
        }
        _ => {}
    }
    let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        let chosen: Vec<(usize, usize)> = match model {
            EdgeModel::Probability(p) => pairs.iter().copied().filter(|_| rng.gen_bool(p)).collect(),
            EdgeModel::Count(m) => {
                let mut idx = sample(&mut rng, pairs.len(), m).into_vec();
                idx.sort_unstable();
                idx.into_iter().map(|i| pairs[i]).collect()
            }
        };
        let edges: Vec<(&str, &str, i64)> = chosen.iter().map(|&(a, b)| (names[a].as_str(), names[b].as_str(), 1)).collect();
        match MultiGraph::new(&names, &edges) {
            Ok(g) => return Ok(g),
            Err(Error::Disconnected) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::BadParams(format!("no connected graph after {MAX_ATTEMPTS} draws")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_cases() {
        let k1 = random_graph(1, EdgeModel::Probability(0.3), 7).unwrap();
        assert_eq!((k1.n(), k1.num_edges()), (1, 0));
        let k2 = random_graph(2, EdgeModel::Probability(1.0), 7).unwrap();
        assert_eq!((k2.n(), k2.num_edges()), (2, 1));
    }

    #[test]
    fn deterministic_per_seed() {
        let a = random_graph(6, EdgeModel::Probability(0.5), 42).unwrap();
        let b = random_graph(6, EdgeModel::Probability(0.5), 42).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.n(), 6);
        let c = random_graph(6, EdgeModel::Count(7), 42).unwrap();
        assert_eq!(c.num_edges(), 7);
        assert_eq!(c, random_graph(6, EdgeModel::Count(7), 42).unwrap());
    }

    #[test]
    fn simple_graphs() {
        for seed in 0..20 {
            let g = random_graph(7, EdgeModel::Probability(0.4), seed).unwrap();
            assert!(g.edge_groups().iter().all(|&(_, _, m)| m == 1));
        }
    }

    #[test]
    fn bad_params() {
        assert!(matches!(random_graph(0, EdgeModel::Count(0), 1), Err(Error::BadParams(_))));
        assert!(matches!(random_graph(3, EdgeModel::Probability(1.5), 1), Err(Error::BadParams(_))));
        assert!(matches!(random_graph(3, EdgeModel::Count(4), 1), Err(Error::BadParams(_))));
        assert!(matches!(random_graph(4, EdgeModel::Count(2), 1), Err(Error::BadParams(_))));
    }
}
