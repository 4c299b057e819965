//! The acceptance suite: twelve fixed criteria plus optional smoke rows for
//! user-supplied graph files. Failures (including budget trips and parse
//! errors) become report rows rather than errors.

use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::budget::{Budget, DEFAULT_NODE_BUDGET};
use crate::divisor::{Divisor, FiringScript};
use crate::error::Result;
use crate::exec::{Exec, SearchConfig};
use crate::generate::{random_graph, EdgeModel};
use crate::gonality::{dgon_upper_witness, dgon_with};
use crate::graph::{build_graph, MultiGraph, VertexSet};
use crate::io::read_graph;
use crate::reduction::{apx_guarantee, build_reduction, OrientedIndependentData};

pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Debug, Clone)]
pub struct AcceptanceConfig {
    pub seed: u64,
    pub node_budget: u64,
    pub exec: Exec,
    /// Criterion ids to run; all when empty.
    pub only: Vec<usize>,
    pub graph_files: Vec<PathBuf>,
}

impl Default for AcceptanceConfig {
    fn default() -> Self {
        AcceptanceConfig {
            seed: DEFAULT_SEED,
            node_budget: DEFAULT_NODE_BUDGET * 10,
            exec: Exec::default(),
            only: Vec::new(),
            graph_files: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriterionReport {
    pub id: String,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u128,
    pub limit_ms: u128,
    pub seed: u64,
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:>3} {:<36} {:>9.3}s / {:>5}s  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed_ms as f64 / 1000.0,
            self.limit_ms / 1000,
            self.detail
        )
    }
}

type Check = fn(&Ctx) -> Result<(bool, String)>;

struct Ctx {
    cfg: SearchConfig,
    seed: u64,
}

impl Ctx {
    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }
}

const CRITERIA: [(&str, u64, Check); 12] = [
    ("gadget K_1, r=1 has gonality 4", 1, gadget_k1_r1),
    ("gadget K_1, r=2 has gonality 8", 60, gadget_k1_r2),
    ("gadget K_2, r=1 has gonality 9", 600, gadget_k2_r1),
    ("subdivided K_1 gadget has gonality 4", 600, subdivided_gadget),
    ("witnesses verify at formula degree", 1800, witnesses_verify),
    ("extraction recovers alpha", 1800, extraction_round_trip),
    ("gap guarantee arithmetic", 1, apx_arithmetic),
    ("Riemann-Roch on random divisors", 600, riemann_roch),
    ("reduced divisors", 600, dhar_suite),
    ("monotone subset firing", 600, monotone_firing),
    ("cycle gonality is r+1", 300, cycle_gonality),
    ("certificate count on K_2 gadget", 60, certificate_count),
];

pub fn run_all(config: &AcceptanceConfig) -> Vec<CriterionReport> {
    let mut out = Vec::new();
    for (i, &(name, limit_s, check)) in CRITERIA.iter().enumerate() {
        let id = i + 1;
        if !config.only.is_empty() && !config.only.contains(&id) {
            continue;
        }
        out.push(run_row(config, id.to_string(), name, limit_s, check));
    }
    for path in &config.graph_files {
        let start = Instant::now();
        let limit = Duration::from_secs(600);
        let budget = Budget::new(config.node_budget, Some(limit));
        let ctx = Ctx { cfg: SearchConfig::new(config.exec, budget), seed: config.seed };
        let (passed, detail) = match graph_smoke(&ctx, path) {
            Ok(v) => v,
            Err(e) => (false, e.to_string()),
        };
        out.push(CriterionReport {
            id: "G".into(),
            name: path.display().to_string(),
            passed,
            detail,
            elapsed_ms: start.elapsed().as_millis(),
            limit_ms: limit.as_millis(),
            seed: config.seed,
        });
    }
    out
}

fn run_row(config: &AcceptanceConfig, id: String, name: &str, limit_s: u64, check: Check) -> CriterionReport {
    let limit = Duration::from_secs(limit_s);
    let budget = Budget::new(config.node_budget, Some(limit));
    let ctx = Ctx { cfg: SearchConfig::new(config.exec, budget), seed: config.seed };
    let start = Instant::now();
    let outcome = check(&ctx);
    let elapsed = start.elapsed();
    let (mut passed, mut detail) = match outcome {
        Ok(v) => v,
        Err(e) => (false, e.to_string()),
    };
    if passed && elapsed > limit {
        passed = false;
        detail = format!("{detail}; over the {limit_s}s limit");
    }
    CriterionReport {
        id,
        name: name.to_string(),
        passed,
        detail,
        elapsed_ms: elapsed.as_millis(),
        limit_ms: limit.as_millis(),
        seed: config.seed,
    }
}

fn k1() -> Arc<MultiGraph> {
    Arc::new(MultiGraph::single_vertex("x"))
}

fn gadget_gonality(base: &Arc<MultiGraph>, r: usize, subdivide: i64, ctx: &Ctx) -> Result<(bool, String)> {
    let inst = build_reduction(base, r)?;
    let alpha = base.independence_number().0;
    let want = inst.formula(alpha);
    let g = Arc::new(inst.gadget.subdivide_uniform(subdivide)?);
    let got = dgon_with(&g, r, &ctx.cfg)?;
    let examined: usize = got.trace.iter().map(|t| t.examined).sum();
    Ok((
        got.degree == want,
        format!("degree {} (formula {want}), {} vertices, {examined} candidates", got.degree, g.n()),
    ))
}

fn gadget_k1_r1(ctx: &Ctx) -> Result<(bool, String)> {
    gadget_gonality(&k1(), 1, 1, ctx)
}

fn gadget_k1_r2(ctx: &Ctx) -> Result<(bool, String)> {
    gadget_gonality(&k1(), 2, 1, ctx)
}

fn gadget_k2_r1(ctx: &Ctx) -> Result<(bool, String)> {
    gadget_gonality(&Arc::new(build_graph(&[("a", "b", 1)])?), 1, 1, ctx)
}

fn subdivided_gadget(ctx: &Ctx) -> Result<(bool, String)> {
    gadget_gonality(&k1(), 1, 2, ctx)
}

fn small_bases() -> Result<Vec<(&'static str, Arc<MultiGraph>)>> {
    Ok(vec![
        ("K_1", k1()),
        ("K_2", Arc::new(build_graph(&[("a", "b", 1)])?)),
        ("P_3", Arc::new(build_graph(&[("a", "b", 1), ("b", "c", 1)])?)),
        ("K_3", Arc::new(build_graph(&[("a", "b", 1), ("b", "c", 1), ("c", "a", 1)])?)),
    ])
}

fn witnesses_verify(ctx: &Ctx) -> Result<(bool, String)> {
    let mut bad = Vec::new();
    let mut count = 0;
    for (name, base) in small_bases()? {
        for r in 1..=2 {
            let inst = build_reduction(&base, r)?;
            let (alpha, s) = base.independence_number();
            let data = OrientedIndependentData::new(&inst, s)?;
            let rep = inst.verify_witness(&data, &ctx.cfg)?;
            count += 1;
            if !rep.holds || rep.degree != inst.formula(alpha) {
                bad.push(format!("{name} r={r}"));
            }
        }
    }
    Ok(tally(count, "instances verified", &bad))
}

fn extraction_round_trip(ctx: &Ctx) -> Result<(bool, String)> {
    let mut rng = ctx.rng(6);
    let mut bad = Vec::new();
    for i in 0..50 {
        let n = rng.gen_range(1..=6);
        let p = rng.gen_range(0.3..0.8);
        let r = 1 + i % 2;
        let base = Arc::new(random_graph(n, EdgeModel::Probability(p), rng.gen())?);
        let inst = build_reduction(&base, r)?;
        let (alpha, s) = base.independence_number();
        let data = OrientedIndependentData::new(&inst, s)?;
        let d = inst.witness_divisor(&data)?;
        let got = inst.extract_independent_set(&d)?;
        if got.independent.len() != alpha || !base.is_independent(&got.independent) {
            bad.push(format!("#{i} (n={n}, r={r}): {} vs {alpha}", got.independent.len()));
        }
        ctx.cfg.budget.tick()?;
    }
    Ok(tally(50, "graphs exact", &bad))
}

fn apx_arithmetic(_: &Ctx) -> Result<(bool, String)> {
    let headline = apx_guarantee(1, Ratio::new(1, 100), 100);
    let mut ok = headline == Ratio::from_integer(78);
    for r in 1..6 {
        for alpha in 0..20 {
            ok &= apx_guarantee(r, Ratio::from_integer(0), alpha) == Ratio::from_integer(alpha as i64);
        }
    }
    Ok((ok, format!("guarantee(1, 1/100, 100) = {headline}; ε = 0 gives α")))
}

fn random_divisor(rng: &mut ChaCha8Rng, g: &Arc<MultiGraph>, degree: i64) -> Divisor {
    let n = g.n();
    let mut c: Vec<i64> = (0..n).map(|_| rng.gen_range(-2..=2)).collect();
    let mut diff = degree - c.iter().sum::<i64>();
    while diff != 0 {
        let v = rng.gen_range(0..n);
        c[v] += diff.signum();
        diff -= diff.signum();
    }
    Divisor::new(g, c).expect("length matches")
}

fn random_host(rng: &mut ChaCha8Rng, max_n: usize) -> Result<Arc<MultiGraph>> {
    let n = rng.gen_range(1..=max_n);
    let p = rng.gen_range(0.3..0.9);
    let g = random_graph(n, EdgeModel::Probability(p), rng.gen())?;
    // Occasionally double an edge to exercise multigraphs.
    if g.num_edges() > 0 && rng.gen_bool(0.3) {
        let mut edges: Vec<(String, String, i64)> = g
            .edge_groups()
            .iter()
            .map(|&(a, b, m)| (g.name(a).to_string(), g.name(b).to_string(), m as i64))
            .collect();
        let i = rng.gen_range(0..edges.len());
        edges[i].2 += 1;
        return Ok(Arc::new(MultiGraph::new(g.names(), &edges)?));
    }
    Ok(Arc::new(g))
}

fn riemann_roch(ctx: &Ctx) -> Result<(bool, String)> {
    let mut rng = ctx.rng(8);
    let mut bad = Vec::new();
    for i in 0..200 {
        let g = random_host(&mut rng, 6)?;
        let deg = rng.gen_range(-6..=6);
        let d = random_divisor(&mut rng, &g, deg);
        let k = Divisor::canonical(&g);
        let lhs = d.rank_with(&ctx.cfg)? - k.minus(&d)?.rank_with(&ctx.cfg)?;
        let rhs = d.degree() - g.genus() + 1;
        if lhs != rhs {
            bad.push(format!("#{i}: {d} gives {lhs} vs {rhs}"));
        }
    }
    Ok(tally(200, "divisors", &bad))
}

fn random_script(rng: &mut ChaCha8Rng, n: usize) -> FiringScript {
    FiringScript::new((0..n).map(|_| rng.gen_range(-2..=2)).collect())
}

fn dhar_suite(ctx: &Ctx) -> Result<(bool, String)> {
    let mut rng = ctx.rng(9);
    let mut bad = Vec::new();
    let mut enumerated = 0;
    for i in 0..200 {
        let g = random_host(&mut rng, 8)?;
        let deg = rng.gen_range(-2..=6);
        let d = random_divisor(&mut rng, &g, deg);
        let q = rng.gen_range(0..g.n());
        let red = d.q_reduce(q)?;
        let moved = d.apply_script(&random_script(&mut rng, g.n()))?;
        let mut ok = red.q_reduce(q)? == red && red.is_q_reduced(q) && moved.q_reduce(q)? == red;
        if red.is_effective() {
            let class = red.enumerate_effective_class(&ctx.cfg.budget)?;
            let reduced: Vec<&Divisor> = class.iter().filter(|e| e.is_q_reduced(q)).collect();
            ok &= reduced.len() == 1 && *reduced[0] == red;
            enumerated += 1;
        }
        if !ok {
            bad.push(format!("#{i}: {d} at {}", g.name(q)));
        }
    }
    Ok(tally(200, &format!("cases ({enumerated} with enumerated classes)"), &bad))
}

fn monotone_firing(ctx: &Ctx) -> Result<(bool, String)> {
    let mut rng = ctx.rng(10);
    let mut bad = Vec::new();
    let mut steps = 0;
    for i in 0..100 {
        let g = random_host(&mut rng, 6)?;
        let deg = rng.gen_range(0..=6);
        let target = Divisor::new(&g, {
            let mut c = vec![0i64; g.n()];
            for _ in 0..deg {
                c[rng.gen_range(0..g.n())] += 1;
            }
            c
        })?;
        let sigma = random_script(&mut rng, g.n());
        let start = target.apply_script(&FiringScript::new(sigma.counts().iter().map(|x| -x).collect()))?;
        let play = match start.benign_play(&target) {
            Ok(p) => p,
            Err(e) => {
                bad.push(format!("#{i}: {e}"));
                continue;
            }
        };
        let mut cur = start.clone();
        let mut ok = true;
        for set in &play {
            let next = cur.fire_set(set)?;
            ok &= (0..g.n()).all(|v| next.get(v).min(0) >= cur.get(v).min(0));
            cur = next;
            steps += 1;
        }
        ok &= cur == target;
        if !ok {
            bad.push(format!("#{i}: {start} → {target}"));
        }
        ctx.cfg.budget.tick()?;
    }
    Ok(tally(100, &format!("pairs, {steps} firings checked"), &bad))
}

fn cycle_gonality(ctx: &Ctx) -> Result<(bool, String)> {
    let mut bad = Vec::new();
    for n in 3..=6 {
        let edges: Vec<(String, String, i64)> =
            (0..n).map(|i| (i.to_string(), ((i + 1) % n).to_string(), 1)).collect();
        let g = Arc::new(build_graph(&edges)?);
        for r in 1..=3 {
            let got = dgon_with(&g, r, &ctx.cfg)?;
            if got.degree != r as i64 + 1 || !dgon_upper_witness(&got.witness, r)? {
                bad.push(format!("C_{n} r={r}: {}", got.degree));
            }
        }
    }
    Ok(tally(12, "cases", &bad))
}

fn certificate_count(ctx: &Ctx) -> Result<(bool, String)> {
    let base = Arc::new(build_graph(&[("a", "b", 1)])?);
    let inst = build_reduction(&base, 1)?;
    let s = VertexSet::from_names(&base, ["a"])?;
    let d = inst.witness_divisor(&OrientedIndependentData::new(&inst, s)?)?;
    let check = d.rank_at_least_with(1, &ctx.cfg)?;
    Ok((check.holds && check.examined == 9, format!("examined {} placements, holds = {}", check.examined, check.holds)))
}

fn graph_smoke(ctx: &Ctx, path: &Path) -> Result<(bool, String)> {
    let g = Arc::new(read_graph(path)?.graph);
    let got = dgon_with(&g, 1, &ctx.cfg)?;
    let ok = dgon_upper_witness(&got.witness, 1)?;
    Ok((ok, format!("dgon_1 = {}", got.degree)))
}

fn tally(total: usize, what: &str, bad: &[String]) -> (bool, String) {
    let mut detail = format!("{} of {total} {what}", total - bad.len());
    if !bad.is_empty() {
        detail.push_str("; failing: ");
        detail.push_str(&bad.join(", "));
    }
    (bad.is_empty(), detail)
}

pub fn all_passed(reports: &[CriterionReport]) -> bool {
    reports.iter().all(|r| r.passed)
}
