//! Text and JSON formats.
//!
//! Graphs:
//!
//! ```text
//! graph <name> <|V|>
//! vertex <id>          # optional; fixes order, allows isolated K_1
//! <u> <v> <mult>
//! ```
//!
//! Divisors are `vertex count` lines (unlisted vertices hold zero) or a
//! JSON object `{"vertex": count}`. `#` starts a comment in both text
//! formats.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::divisor::Divisor;
use crate::error::{Error, Result};
use crate::graph::{MultiGraph, VertexSet};
use crate::reduction::{build_reduction, ReductionInstance, Role};

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("");
        let words: Vec<&str> = l.split_whitespace().collect();
        (!words.is_empty()).then_some((i + 1, words))
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedGraph {
    pub name: String,
    pub graph: MultiGraph,
}

pub fn parse_graph(text: &str) -> Result<NamedGraph> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| parse_err(0, "empty graph file"))?;
    let [kw, name, count] = header[..] else {
        return Err(parse_err(hl, "expected `graph <name> <|V|>`"));
    };
    if kw != "graph" {
        return Err(parse_err(hl, "expected `graph <name> <|V|>`"));
    }
    let count: usize = count.parse().map_err(|_| parse_err(hl, format!("bad vertex count `{count}`")))?;
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    for (ln, words) in lines {
        match words[..] {
            ["vertex", v] => vertices.push(v.to_string()),
            [u, v, m] => {
                let m: i64 = m.parse().map_err(|_| parse_err(ln, format!("bad multiplicity `{m}`")))?;
                edges.push((u.to_string(), v.to_string(), m));
            }
            _ => return Err(parse_err(ln, "expected `u v mult` or `vertex <id>`")),
        }
    }
    let graph = MultiGraph::new(&vertices, &edges)?;
    if graph.n() != count {
        return Err(parse_err(hl, format!("header declares {count} vertices, found {}", graph.n())));
    }
    Ok(NamedGraph { name: name.to_string(), graph })
}

pub fn emit_graph(name: &str, g: &MultiGraph) -> String {
    let mut out = format!("graph {name} {}\n", g.n());
    for v in g.names() {
        out.push_str(&format!("vertex {v}\n"));
    }
    for &(a, b, m) in g.edge_groups() {
        out.push_str(&format!("{} {} {m}\n", g.name(a), g.name(b)));
    }
    out
}

pub fn read_graph(path: &Path) -> Result<NamedGraph> {
    parse_graph(&fs::read_to_string(path)?)
}

pub fn parse_divisor(g: &Arc<MultiGraph>, text: &str) -> Result<Divisor> {
    if text.trim_start().starts_with('{') {
        let map: Map<String, Value> = serde_json::from_str(text)?;
        let mut pairs = Vec::with_capacity(map.len());
        for (k, v) in map {
            let c = v.as_i64().ok_or_else(|| parse_err(0, format!("`{k}` is not an integer")))?;
            pairs.push((k, c));
        }
        return Divisor::from_pairs(g, &pairs);
    }
    let mut pairs = Vec::new();
    for (ln, words) in content_lines(text) {
        let [v, c] = words[..] else {
            return Err(parse_err(ln, "expected `vertex count`"));
        };
        let c: i64 = c.parse().map_err(|_| parse_err(ln, format!("bad count `{c}`")))?;
        g.index_of(v)?;
        pairs.push((v.to_string(), c));
    }
    Divisor::from_pairs(g, &pairs)
}

pub fn emit_divisor(d: &Divisor) -> String {
    let g = d.host();
    d.coeffs()
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(v, c)| format!("{} {c}\n", g.name(v)))
        .collect()
}

/// Nonzero coefficients keyed by vertex name, in vertex order.
pub fn divisor_json(d: &Divisor) -> Value {
    let g = d.host();
    let map: Map<String, Value> = d
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(v, &c)| (g.name(v).to_string(), Value::from(c)))
        .collect();
    Value::Object(map)
}

pub fn read_divisor(g: &Arc<MultiGraph>, path: &Path) -> Result<Divisor> {
    parse_divisor(g, &fs::read_to_string(path)?)
}

/// Vertex names separated by commas or whitespace.
pub fn parse_vertex_set(g: &MultiGraph, text: &str) -> Result<VertexSet> {
    VertexSet::from_names(g, text.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceMeta {
    pub r: usize,
    #[serde(rename = "M")]
    pub m: u64,
    pub base_vertices: usize,
    pub base_edges: u64,
    pub gadget_vertices: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoleEntry {
    pub name: String,
    #[serde(flatten)]
    pub role: Role,
}

const BASE_FILE: &str = "base.txt";
const GRAPH_FILE: &str = "graph.txt";
const ROLES_FILE: &str = "roles.json";
const META_FILE: &str = "meta.json";

pub fn instance_meta(inst: &ReductionInstance) -> InstanceMeta {
    InstanceMeta {
        r: inst.r,
        m: inst.m,
        base_vertices: inst.base.n(),
        base_edges: inst.base.num_edges(),
        gadget_vertices: inst.gadget.n(),
    }
}

pub fn instance_roles(inst: &ReductionInstance) -> Vec<RoleEntry> {
    inst.roles
        .iter()
        .enumerate()
        .map(|(v, &role)| RoleEntry { name: inst.gadget.name(v).to_string(), role })
        .collect()
}

/// Directory with the base graph, the gadget, `roles.json` and `meta.json`.
pub fn write_instance(dir: &Path, inst: &ReductionInstance) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(BASE_FILE), emit_graph("base", &inst.base))?;
    fs::write(dir.join(GRAPH_FILE), emit_graph("gadget", &inst.gadget))?;
    fs::write(dir.join(ROLES_FILE), serde_json::to_string_pretty(&instance_roles(inst))? + "\n")?;
    fs::write(dir.join(META_FILE), serde_json::to_string_pretty(&instance_meta(inst))? + "\n")?;
    Ok(())
}

/// Rebuilds the instance from the base graph and `r`, then checks that the
/// stored gadget, roles and metadata agree with it.
pub fn read_instance(dir: &Path) -> Result<ReductionInstance> {
    let base = read_graph(&dir.join(BASE_FILE))?.graph;
    let meta: InstanceMeta = serde_json::from_str(&fs::read_to_string(dir.join(META_FILE))?)?;
    let inst = build_reduction(&Arc::new(base), meta.r)?;
    let stored = read_graph(&dir.join(GRAPH_FILE))?.graph;
    let roles: Vec<RoleEntry> = serde_json::from_str(&fs::read_to_string(dir.join(ROLES_FILE))?)?;
    let rebuilt = MultiGraph::new(inst.gadget.names(), &edge_triples(&inst.gadget))?;
    if stored != rebuilt {
        return Err(parse_err(0, format!("{GRAPH_FILE} does not match the gadget built from {BASE_FILE}")));
    }
    if roles != instance_roles(&inst) {
        return Err(parse_err(0, format!("{ROLES_FILE} does not match the gadget")));
    }
    if meta != instance_meta(&inst) {
        return Err(parse_err(0, format!("{META_FILE} does not match the gadget")));
    }
    Ok(inst)
}

fn edge_triples(g: &MultiGraph) -> Vec<(String, String, i64)> {
    g.edge_groups()
        .iter()
        .map(|&(a, b, m)| (g.name(a).to_string(), g.name(b).to_string(), m as i64))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;

    #[test]
    fn graph_round_trip() {
        let g = build_graph(&[("a", "b", 2), ("b", "c", 1), ("c", "a", 3)]).unwrap();
        let text = emit_graph("tri", &g);
        let back = parse_graph(&text).unwrap();
        assert_eq!(back.name, "tri");
        assert_eq!(back.graph, g);
        let k1 = MultiGraph::single_vertex("x");
        assert_eq!(parse_graph(&emit_graph("k1", &k1)).unwrap().graph, k1);
    }

    #[test]
    fn graph_parse_errors() {
        assert!(matches!(parse_graph(""), Err(Error::Parse { line: 0, .. })));
        assert!(matches!(parse_graph("graph g 2\na b x\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_graph("graph g 3\na b 1\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_graph("graph g 1\na a 1\n"), Err(Error::SelfLoop(_))));
        assert!(matches!(parse_graph("edges g 2\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn comments_and_blank_lines() {
        let g = parse_graph("# cycle\ngraph c 3\n\na b 1 # first\nb c 1\nc a 1\n").unwrap();
        assert_eq!(g.graph.num_edges(), 3);
    }

    #[test]
    fn divisor_round_trip() {
        let g = Arc::new(build_graph(&[("a", "b", 1), ("b", "c", 1)]).unwrap());
        let d = Divisor::from_pairs(&g, &[("a", 2), ("c", -1)]).unwrap();
        assert_eq!(parse_divisor(&g, &emit_divisor(&d)).unwrap(), d);
        let json = divisor_json(&d).to_string();
        assert_eq!(json, r#"{"a":2,"c":-1}"#);
        assert_eq!(parse_divisor(&g, &json).unwrap(), d);
        assert_eq!(parse_divisor(&g, "").unwrap(), Divisor::zero(&g));
        assert!(matches!(parse_divisor(&g, "z 1\n"), Err(Error::UnknownVertex(_))));
        assert!(matches!(parse_divisor(&g, "a 1 2\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn vertex_sets() {
        let g = build_graph(&[("a", "b", 1), ("b", "c", 1)]).unwrap();
        assert_eq!(parse_vertex_set(&g, "a, c").unwrap().len(), 2);
        assert!(parse_vertex_set(&g, "").unwrap().is_empty());
    }

    #[test]
    fn instance_round_trip() {
        let base = Arc::new(build_graph(&[("a", "b", 1), ("b", "c", 2)]).unwrap());
        let inst = build_reduction(&base, 2).unwrap();
        let dir = tempfile::tempdir().unwrap();
        write_instance(dir.path(), &inst).unwrap();
        let back = read_instance(dir.path()).unwrap();
        assert_eq!(back.roles, inst.roles);
        assert_eq!(back.m, inst.m);
        assert_eq!(*back.gadget, *inst.gadget);
        assert_eq!(*back.base, *inst.base);

        fs::write(dir.path().join(META_FILE), r#"{"r":1,"M":99,"base_vertices":3,"base_edges":3,"gadget_vertices":16}"#)
            .unwrap();
        assert!(matches!(read_instance(dir.path()), Err(Error::Parse { .. })));
    }
}
