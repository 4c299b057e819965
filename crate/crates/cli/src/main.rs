use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use chipfire::acceptance::{self, AcceptanceConfig};
use chipfire::budget::DEFAULT_NODE_BUDGET;
use chipfire::decide::decide_gonality;
use chipfire::generate::{random_graph, EdgeModel};
use chipfire::gonality::{dgon_with, sandwich_check};
use chipfire::io::{self, divisor_json};
use chipfire::reduction::{build_reduction, ReductionInstance};
use chipfire::{Budget, Error, Exec, MultiGraph, OrientedIndependentData, SearchConfig, VertexSet};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

const EXIT_YES: u8 = 0;
const EXIT_NO: u8 = 1;
const EXIT_BUDGET: u8 = 2;
const EXIT_INPUT: u8 = 3;

#[derive(Parser)]
#[command(name = "chipfire", version, about = "Divisors, rank and gonality on multigraphs")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct SearchOpts {
    /// Node budget (rank sub-checks and enumeration steps).
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    budget: u64,
    /// Wall-clock limit in seconds.
    #[arg(long)]
    timeout: Option<u64>,
    /// Search candidates on one thread.
    #[arg(long)]
    sequential: bool,
}

impl SearchOpts {
    fn config(&self) -> Result<SearchConfig> {
        if self.budget == 0 {
            bail!("--budget must be positive");
        }
        let exec = if self.sequential { Exec::Sequential } else { Exec::Parallel };
        Ok(SearchConfig::new(exec, Budget::new(self.budget, self.timeout.map(Duration::from_secs))))
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Exact r-th gonality with witness and per-degree trace.
    Gonality {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 1)]
        rank: usize,
        /// Also report subdivision upper bounds for k = 1..=K.
        #[arg(long)]
        kmax: Option<i64>,
        #[command(flatten)]
        search: SearchOpts,
    },
    /// Is dgon_r(G) <= k? Exit 0 yes, 1 no, 2 budget, 3 input error.
    Decide {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 1)]
        rank: usize,
        #[arg(long)]
        k: i64,
        #[command(flatten)]
        search: SearchOpts,
    },
    /// Build the gadget for a base graph and write an instance directory.
    Reduce {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 1)]
        rank: usize,
        #[arg(long)]
        out: PathBuf,
        /// Also write the gadget as DOT.
        #[arg(long)]
        dot: bool,
    },
    /// Print the witness divisor for an independent set (default: a maximum one).
    Witness {
        #[arg(long)]
        instance: PathBuf,
        /// Base vertices, comma separated.
        #[arg(long)]
        set: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Check a witness (or a given divisor) placement by placement.
    Verify {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        set: Option<String>,
        /// Divisor on the gadget to check instead of the built witness.
        #[arg(long)]
        divisor: Option<PathBuf>,
        #[command(flatten)]
        search: SearchOpts,
    },
    /// Read an independent set of the base graph off a gadget divisor.
    Extract {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        divisor: PathBuf,
    },
    /// Replace every edge by a path of k edges.
    Subdivide {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        k: i64,
        #[arg(long)]
        dot: bool,
    },
    /// Run the acceptance criteria and print a pass/fail table.
    Accept {
        #[arg(long, default_value_t = acceptance::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET * 10)]
        budget: u64,
        /// Criterion ids, comma separated.
        #[arg(long, value_delimiter = ',')]
        only: Vec<usize>,
        /// Extra graph files to smoke-test.
        #[arg(long)]
        graph: Vec<PathBuf>,
        #[arg(long)]
        sequential: bool,
        #[arg(long)]
        json: bool,
    },
    /// Seeded random connected simple graph.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long, conflicts_with = "m", required_unless_present = "m")]
        p: Option<f64>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "random")]
        name: String,
        #[arg(long)]
        dot: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let budget = e.chain().any(|c| matches!(c.downcast_ref::<Error>(), Some(Error::BudgetExceeded(_))));
            ExitCode::from(if budget { EXIT_BUDGET } else { EXIT_INPUT })
        }
    }
}

fn load_graph(path: &Path) -> Result<Arc<MultiGraph>> {
    let g = io::read_graph(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(Arc::new(g.graph))
}

fn load_instance(dir: &Path) -> Result<ReductionInstance> {
    io::read_instance(dir).with_context(|| format!("reading instance {}", dir.display()))
}

fn independent_data(inst: &ReductionInstance, set: Option<&str>) -> Result<OrientedIndependentData> {
    let s = match set {
        Some(text) => io::parse_vertex_set(&inst.base, text)?,
        None => inst.base.independence_number().1,
    };
    Ok(OrientedIndependentData::new(inst, s)?)
}

fn print_json(v: &serde_json::Value) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn names(g: &MultiGraph, s: &VertexSet) -> Vec<String> {
    s.names(g).into_iter().map(String::from).collect()
}

fn run(cmd: Cmd) -> Result<u8> {
    match cmd {
        Cmd::Gonality { graph, rank, kmax, search } => {
            let g = load_graph(&graph)?;
            let cfg = search.config()?;
            let res = dgon_with(&g, rank, &cfg)?;
            let mut out = json!({
                "r": rank,
                "degree": res.degree,
                "witness": divisor_json(&res.witness),
                "trace": res.trace,
            });
            if let Some(k) = kmax {
                let s = sandwich_check(&g, rank, k, &cfg)?;
                out["upper_bounds"] = json!({
                    "k_max": k,
                    "stable_upper_bound": s.sdgon_upper,
                    "metric_upper_bound": s.metric_upper,
                    "best_k": s.best_k,
                    "consistent": s.consistent,
                });
            }
            print_json(&out)?;
            Ok(EXIT_YES)
        }
        Cmd::Decide { graph, rank, k, search } => {
            let g = load_graph(&graph)?;
            let dec = decide_gonality(&g, rank, k, &search.config()?)?;
            print_json(&serde_json::to_value(&dec)?)?;
            Ok(if dec.yes { EXIT_YES } else { EXIT_NO })
        }
        Cmd::Reduce { graph, rank, out, dot } => {
            let base = load_graph(&graph)?;
            let inst = build_reduction(&base, rank)?;
            io::write_instance(&out, &inst)?;
            if dot {
                fs::write(out.join("graph.dot"), inst.gadget.to_dot("gadget"))?;
            }
            print_json(&json!({
                "out": out,
                "meta": io::instance_meta(&inst),
                "roles": io::instance_roles(&inst),
            }))?;
            Ok(EXIT_YES)
        }
        Cmd::Witness { instance, set, json } => {
            let inst = load_instance(&instance)?;
            let data = independent_data(&inst, set.as_deref())?;
            let d = inst.witness_divisor(&data)?;
            if json {
                print_json(&json!({
                    "set": names(&inst.base, &data.independent),
                    "degree": d.degree(),
                    "divisor": divisor_json(&d),
                }))?;
            } else {
                print!("{}", io::emit_divisor(&d));
            }
            Ok(EXIT_YES)
        }
        Cmd::Verify { instance, set, divisor, search } => {
            let inst = load_instance(&instance)?;
            let data = independent_data(&inst, set.as_deref())?;
            let d = match divisor {
                Some(p) => io::read_divisor(&inst.gadget, &p)?,
                None => inst.witness_divisor(&data)?,
            };
            let rep = inst.verify_divisor(&data, &d, &search.config()?)?;
            print_json(&serde_json::to_value(&rep)?)?;
            Ok(if rep.holds { EXIT_YES } else { EXIT_NO })
        }
        Cmd::Extract { instance, divisor } => {
            let inst = load_instance(&instance)?;
            let d = io::read_divisor(&inst.gadget, &divisor)?;
            let got = inst.extract_independent_set(&d)?;
            print_json(&json!({
                "equivalent_to_root": names(&inst.base, &got.equivalent_to_root),
                "induced_edges": got.induced_edges,
                "independent": names(&inst.base, &got.independent),
                "size": got.independent.len(),
            }))?;
            Ok(EXIT_YES)
        }
        Cmd::Subdivide { graph, k, dot } => {
            let named = io::read_graph(&graph)?;
            let sub = named.graph.subdivide_uniform(k)?;
            let name = format!("{}_s{k}", named.name);
            print!("{}", if dot { sub.to_dot(&name) } else { io::emit_graph(&name, &sub) });
            Ok(EXIT_YES)
        }
        Cmd::Accept { seed, budget, only, graph, sequential, json } => {
            if budget == 0 {
                bail!("--budget must be positive");
            }
            let cfg = AcceptanceConfig {
                seed,
                node_budget: budget,
                exec: if sequential { Exec::Sequential } else { Exec::Parallel },
                only,
                graph_files: graph,
            };
            let rows = acceptance::run_all(&cfg);
            if json {
                print_json(&json!({ "seed": seed, "rows": rows }))?;
            } else {
                println!("seed {seed}");
                for row in &rows {
                    println!("{row}");
                }
            }
            Ok(if acceptance::all_passed(&rows) { EXIT_YES } else { EXIT_NO })
        }
        Cmd::Gen { n, p, m, seed, name, dot } => {
            let model = match (p, m) {
                (Some(p), _) => EdgeModel::Probability(p),
                (None, Some(m)) => EdgeModel::Count(m),
                (None, None) => unreachable!("clap requires one of --p, --m"),
            };
            let g = random_graph(n, model, seed)?;
            if dot {
                print!("{}", g.to_dot(&name));
            } else {
                println!("# seed {seed}");
                print!("{}", io::emit_graph(&name, &g));
            }
            Ok(EXIT_YES)
        }
    }
}
