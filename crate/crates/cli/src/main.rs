use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use iasi_core::graph::{emit_dot, EdgeId, Graph};
use iasi_core::harness::{generate_corpus, run_suite, HarnessOptions, TheoremId};
use iasi_core::labeling::{canonical_iasi, verify, SetLabeling};
use iasi_core::search::{
    find_labeling, ground_set_lower_bound, minimal_ground_set, minimal_ground_set_exact,
    uniform_ground_set_lower_bound, MinimizeOptions, Mode, SearchSpec, Status,
};
use iasi_core::setcore::DEFAULT_UNIVERSE_BOUND;
use iasi_core::transforms::{
    contract_edge, line_graph_labeled, topological_reduction, total_graph_labeled, TransformResult,
};

const EXIT_HOLDS: u8 = 0;
const EXIT_FAILS: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_TIMEOUT: u8 = 3;

/// Integer additive set-indexers: verify, transform, search and check claims.
#[derive(Debug, Parser)]
#[command(name = "iasi", version)]
struct Cli {
    /// Largest integer any set may contain.
    #[arg(long, global = true, default_value_t = DEFAULT_UNIVERSE_BOUND)]
    universe_bound: u32,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Op {
    Line,
    Total,
    Contract,
    Reduce,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Iasi,
    Weak,
    Strong,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Iasi => Mode::Iasi,
            ModeArg::Weak => Mode::Weak,
            ModeArg::Strong => Mode::Strong,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check whether a labeling is an IASI. Exit 0 if it is, 1 if not.
    Verify {
        graph: PathBuf,
        labels: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Build a derived graph and, with --labels, its induced labeling.
    Transform {
        #[arg(long, value_enum)]
        op: Op,
        graph: PathBuf,
        #[arg(long)]
        labels: Option<PathBuf>,
        /// Edge to contract, as `u,v`.
        #[arg(long, conflicts_with = "vertex")]
        edge: Option<String>,
        /// Degree-2 vertex to reduce.
        #[arg(long)]
        vertex: Option<String>,
        /// Write PREFIX.graph, PREFIX.labels and PREFIX.provenance.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, conflicts_with = "out")]
        json: bool,
    },
    /// Search labels drawn from {0..=M}. Exit 0 found, 1 exhausted, 3 timeout.
    Search {
        #[arg(long, value_enum, default_value = "iasi")]
        mode: ModeArg,
        /// Largest ground element; with --minimize, the largest allowed.
        #[arg(long)]
        ground_max: u32,
        /// Every vertex label has exactly L elements.
        #[arg(long)]
        uniform: Option<usize>,
        #[arg(long)]
        max_label_size: Option<usize>,
        /// Find the smallest ground set instead of searching a fixed one.
        #[arg(long)]
        minimize: bool,
        /// With --minimize, try every subset of {0..=M} rather than prefixes.
        #[arg(long, requires = "minimize")]
        exact: bool,
        /// Wall-clock budget in seconds.
        #[arg(long)]
        budget: Option<f64>,
        /// Node budget per search.
        #[arg(long)]
        nodes: Option<u64>,
        #[arg(long)]
        json: bool,
        graph: PathBuf,
    },
    /// Smallest ground-set size allowed by counting for n vertices.
    Bounds {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        uniform: Option<usize>,
    },
    /// Run the theorem suite over the small-graph corpus.
    Harness {
        #[arg(long, default_value_t = 5)]
        max_n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Restrict to these theorems (repeatable), e.g. T5.
        #[arg(long)]
        theorem: Vec<String>,
        #[arg(long)]
        node_budget: Option<u64>,
        /// Print the machine-readable report instead of the text one.
        #[arg(long)]
        json: bool,
        /// Also write the machine-readable report to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render a graph, optionally labeled, as DOT.
    EmitDot {
        graph: PathBuf,
        #[arg(long)]
        labels: Option<PathBuf>,
    },
    /// Print the powers-of-two labeling of a graph.
    Canonical { graph: PathBuf },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_graph(path: &Path) -> Result<Graph> {
    Graph::parse(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn load_labels(path: &Path, bound: u32) -> Result<SetLabeling> {
    SetLabeling::parse(&read(path)?, bound).with_context(|| format!("parsing {}", path.display()))
}

fn json<T: serde::Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}

fn parse_edge(text: &str) -> Result<EdgeId> {
    match text.split_once(',') {
        Some((u, v)) if !u.trim().is_empty() && !v.trim().is_empty() => {
            Ok(EdgeId::new(u.trim(), v.trim()))
        }
        _ => bail!("--edge expects `u,v`, got {text:?}"),
    }
}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow::anyhow!(msg.into())
}

fn transform_text(t: &TransformResult) -> String {
    let mut out = String::from("# graph\n");
    out.push_str(&t.graph.to_edge_list());
    if let Some(f) = &t.induced_labeling {
        out.push_str("# labels\n");
        out.push_str(&f.to_text());
    }
    out.push_str("# provenance\n");
    out.push_str(&t.provenance_text());
    if let Some(r) = &t.report {
        out.push_str("# report\n");
        out.push_str(&r.to_text());
    }
    out
}

fn run(cli: Cli) -> Result<u8> {
    let bound = cli.universe_bound;
    match cli.command {
        Command::Verify {
            graph,
            labels,
            json: as_json,
        } => {
            let g = load_graph(&graph)?;
            let f = load_labels(&labels, bound)?;
            let report = verify(&g, &f)?;
            if as_json {
                println!("{}", json(&report)?);
            } else {
                print!("{}", report.to_text());
            }
            Ok(if report.is_iasi {
                EXIT_HOLDS
            } else {
                EXIT_FAILS
            })
        }
        Command::Transform {
            op,
            graph,
            labels,
            edge,
            vertex,
            out,
            json: as_json,
        } => {
            let g = load_graph(&graph)?;
            let f = labels.map(|p| load_labels(&p, bound)).transpose()?;
            let result = match op {
                Op::Line | Op::Total => {
                    if edge.is_some() || vertex.is_some() {
                        return Err(usage(
                            "--edge and --vertex only apply to contract and reduce",
                        ));
                    }
                    if matches!(op, Op::Line) {
                        line_graph_labeled(&g, f.as_ref())?
                    } else {
                        total_graph_labeled(&g, f.as_ref())?
                    }
                }
                Op::Contract => {
                    let e = edge.ok_or_else(|| usage("--op contract needs --edge u,v"))?;
                    contract_edge(&g, &parse_edge(&e)?, f.as_ref())?
                }
                Op::Reduce => {
                    let v = vertex.ok_or_else(|| usage("--op reduce needs --vertex v"))?;
                    topological_reduction(&g, &v, f.as_ref())?
                }
            };
            if let Some(prefix) = out {
                let path = |ext: &str| PathBuf::from(format!("{}.{ext}", prefix.display()));
                fs::write(path("graph"), result.graph.to_edge_list())?;
                if let Some(f) = &result.induced_labeling {
                    fs::write(path("labels"), f.to_text())?;
                }
                fs::write(path("provenance"), result.provenance_text())?;
                if let Some(r) = &result.report {
                    print!("{}", r.to_text());
                }
            } else if as_json {
                println!("{}", json(&result)?);
            } else {
                print!("{}", transform_text(&result));
            }
            Ok(EXIT_HOLDS)
        }
        Command::Search {
            mode,
            ground_max,
            uniform,
            max_label_size,
            minimize,
            exact,
            budget,
            nodes,
            json: as_json,
            graph,
        } => {
            let g = load_graph(&graph)?;
            let mode = Mode::from(mode);
            let time_budget = match budget {
                Some(s) if !(s.is_finite() && s > 0.0) => {
                    return Err(usage(format!(
                        "--budget must be a positive number of seconds, got {s}"
                    )))
                }
                s => s.map(Duration::from_secs_f64),
            };
            let ground_size = ground_max as usize + 1;
            if minimize {
                let opts = MinimizeOptions {
                    mode,
                    max_ground: ground_size,
                    uniform_vertex_size: uniform,
                    max_label_size,
                    time_budget,
                    node_budget: nodes,
                    universe_bound: bound,
                };
                let found = if exact {
                    minimal_ground_set_exact(&g, &opts, ground_max)?
                } else {
                    minimal_ground_set(&g, &opts)?
                };
                if as_json {
                    println!("{}", json(&found)?);
                } else {
                    println!("lower_bound: {}", found.lower_bound);
                    for (m, status) in &found.attempts {
                        println!("attempt: size={m} status={status}");
                    }
                    match (&found.minimum, &found.ground) {
                        (Some(m), Some(ground)) => println!("minimum: {m}\nground: {ground}"),
                        _ => println!("minimum: none"),
                    }
                    if let Some(f) = &found.outcome.labeling {
                        print!("{}", f.to_text());
                    }
                }
                Ok(if found.minimum.is_some() {
                    EXIT_HOLDS
                } else if found.attempts.iter().any(|(_, s)| *s == Status::Timeout) {
                    EXIT_TIMEOUT
                } else {
                    EXIT_FAILS
                })
            } else {
                let mut spec = SearchSpec::prefix(mode, ground_size, bound)?;
                spec.uniform_vertex_size = uniform;
                spec.max_label_size = max_label_size;
                spec.time_budget = time_budget;
                spec.node_budget = nodes;
                let outcome = find_labeling(&g, &spec)?;
                if as_json {
                    println!("{}", json(&outcome)?);
                } else {
                    println!("status: {}", outcome.status);
                    println!("nodes_expanded: {}", outcome.nodes_expanded);
                    if let Some(f) = &outcome.labeling {
                        print!("{}", f.to_text());
                    }
                }
                Ok(match outcome.status {
                    Status::Found => EXIT_HOLDS,
                    Status::Exhausted => EXIT_FAILS,
                    Status::Timeout => EXIT_TIMEOUT,
                })
            }
        }
        Command::Bounds { n, uniform } => {
            let m = match uniform {
                None => ground_set_lower_bound(n)?,
                Some(l) => uniform_ground_set_lower_bound(n, l)?,
            };
            println!("{m}");
            Ok(EXIT_HOLDS)
        }
        Command::Harness {
            max_n,
            seed,
            theorem,
            node_budget,
            json: as_json,
            out,
        } => {
            let mut opts = HarnessOptions::new(max_n, seed);
            opts.universe_bound = bound;
            if let Some(n) = node_budget {
                opts.node_budget = n;
            }
            opts.theorems = theorem
                .iter()
                .map(|t| t.parse::<TheoremId>().map_err(|e| usage(e.to_string())))
                .collect::<Result<_>>()?;
            let corpus = generate_corpus(&opts).map_err(|e| usage(e.to_string()))?;
            let report = run_suite(&corpus, &opts)?;
            let doc = json(&report)?;
            if let Some(path) = out {
                fs::write(&path, format!("{doc}\n"))
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            if as_json {
                println!("{doc}");
            } else {
                print!("{}", report.to_text());
            }
            Ok(if report.ok() { EXIT_HOLDS } else { EXIT_FAILS })
        }
        Command::EmitDot { graph, labels } => {
            let g = load_graph(&graph)?;
            let f = labels.map(|p| load_labels(&p, bound)).transpose()?;
            print!("{}", emit_dot(&g, f.as_ref())?);
            Ok(EXIT_HOLDS)
        }
        Command::Canonical { graph } => {
            let g = load_graph(&graph)?;
            print!("{}", canonical_iasi(&g, bound)?.to_text());
            Ok(EXIT_HOLDS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
