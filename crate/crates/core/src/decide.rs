//! "Is `dgon_r(G) <= k`?"

use std::sync::Arc;

use serde::Serialize;

use crate::divisor::Divisor;
use crate::error::{Error, Result};
use crate::exec::SearchConfig;
use crate::gonality::{dgon_upper_witness, search_up_to, DegreeTrace};
use crate::graph::MultiGraph;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decision {
    pub r: usize,
    pub k: i64,
    pub yes: bool,
    pub degree: Option<i64>,
    #[serde(serialize_with = "serialize_opt_divisor")]
    pub witness: Option<Divisor>,
    pub trace: Vec<DegreeTrace>,
}

fn serialize_opt_divisor<S: serde::Serializer>(d: &Option<Divisor>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match d {
        Some(d) => serde::Serialize::serialize(&crate::io::divisor_json(d), s),
        None => s.serialize_none(),
    }
}

/// Searches up to degree `k`; a `yes` carries a witness that has been
/// re-checked independently, a `no` the full per-degree trace.
pub fn decide_gonality(g: &Arc<MultiGraph>, r: usize, k: i64, cfg: &SearchConfig) -> Result<Decision> {
    let cap = (r * g.n()) as i64;
    if k > cap {
        return Err(Error::BadParams(format!("k = {k} exceeds r·|V| = {cap}")));
    }
    let search = search_up_to(g, r, k, cfg)?;
    let (degree, witness) = match search.found {
        Some((deg, w)) => {
            if !dgon_upper_witness(&w, r)? {
                return Err(Error::InvariantViolated(format!("witness {w} failed the rank re-check")));
            }
            (Some(deg), Some(w))
        }
        None => (None, None),
    };
    Ok(Decision { r, k, yes: witness.is_some(), degree, witness, trace: search.trace })
}
