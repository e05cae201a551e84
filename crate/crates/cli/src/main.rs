use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use zerocycle::codec::{self, AnyGraph};
use zerocycle::constructive::{
    build_extremal_digraph, build_extremal_undirected, lemma_one_solve_with, path_tree, theorem_main_solve_with,
    LemmaResult,
};
use zerocycle::explorer::{run_experiment, BoundReport, ExperimentConfig, Strategy, Task};
use zerocycle::group::{classify_near_ap, NearApClass};
use zerocycle::oracle::{distinct_weight_paths, find_zero_cycle_with_stats};
use zerocycle::undirected::theorem_undirected_solve_with;
use zerocycle::witness::{check_family, check_zero_cycle};
use zerocycle::{CycleWitness, Error, GroupSpec, PathWitness, ResidueSet, Search, SearchBudget, WeightedAdjacency};

const EXIT_OK: u8 = 0;
const EXIT_WITNESS: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_USAGE: u8 = 64;
const EXIT_DATA: u8 = 65;
const EXIT_SOFTWARE: u8 = 70;

#[derive(Parser)]
#[command(name = "zerocycle", version, about = "Zero-sum cycles in group-weighted graphs")]
struct Cli {
    /// Write the JSON result here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Worker threads for experiments; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Search a graph document for a zero cycle.
    FindZeroCycle {
        /// Graph JSON; standard input when omitted or `-`.
        input: Option<PathBuf>,
        /// Minimum cycle length; defaults to 2 (directed) or 3 (undirected).
        #[arg(long)]
        min_len: Option<usize>,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Find `r` distinct-weight paths from `v` to `u` in a directed graph.
    Paths {
        input: Option<PathBuf>,
        #[arg(long)]
        v: usize,
        #[arg(long)]
        u: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Classify a subset of `Z_k`.
    ClassifyNearap {
        #[arg(long)]
        k: u32,
        /// Comma-separated residues.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        set: Vec<i64>,
    },
    /// Build extremal zero-cycle-free graphs.
    #[command(subcommand)]
    Construct(Construct),
    /// Run the constructive solvers on a graph document.
    #[command(subcommand)]
    Solve(Solve),
    /// Check lemma and theorem statements over many instances.
    #[command(subcommand)]
    Verify(Verify),
    /// Search for counterexamples and bounds.
    #[command(subcommand)]
    Explore(Explore),
}

#[derive(Subcommand)]
enum Construct {
    /// Complete `Z_k` digraph on `k` vertices without zero cycles.
    ExtremalDigraph {
        #[arg(long)]
        k: u32,
    },
    /// Degree-`k` undirected graph without zero cycles, built on a tree.
    ExtremalUndirected {
        #[arg(long)]
        k: u32,
        /// Use the path on this many vertices as the tree.
        #[arg(long, conflicts_with = "tree")]
        path: Option<usize>,
        /// Tree edges as `a-b` pairs, comma-separated.
        #[arg(long, value_delimiter = ',')]
        tree: Vec<String>,
    },
}

#[derive(Subcommand)]
enum Solve {
    /// Zero cycle avoiding `u, v` or `r` distinct-weight `v`-`u` paths.
    LemmaOne {
        input: Option<PathBuf>,
        #[arg(long)]
        u: usize,
        #[arg(long)]
        v: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Constructive zero cycle in a complete `Z_k` digraph at the threshold order.
    TheoremMain {
        input: Option<PathBuf>,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Constructive zero cycle in a graph of minimum degree `2|Γ| - 1`.
    TheoremUndirected {
        input: Option<PathBuf>,
        #[arg(long)]
        budget: Option<u64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Main,
    Corollary,
    Undirected,
}

#[derive(Subcommand)]
enum Verify {
    /// Check the near-AP classification on every subset of `Z_k`, `k <= kmax`.
    LemmaInc {
        #[arg(long)]
        kmax: u32,
    },
    /// Sweep instances at a theorem threshold.
    Theorem {
        #[arg(long, value_enum, default_value = "main")]
        which: Which,
        #[command(flatten)]
        exp: ExpArgs,
    },
}

#[derive(Subcommand)]
enum Explore {
    /// Search for a zero-cycle-free complete digraph on `n` vertices over `Z_k`.
    FBound(ExpArgs),
    /// `{0, 1, -1}` weightings without zero cycle or one-signed Hamiltonian path.
    Q1(ExpArgs),
    /// Minimum degree `k + 1` graphs without a zero cycle.
    Q2(ExpArgs),
}

#[derive(Args, Clone)]
struct ExpArgs {
    /// Base ExperimentConfig JSON; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    k: Option<u32>,
    /// Cyclic factors of the group, comma-separated (undirected sweeps).
    #[arg(long, value_delimiter = ',')]
    group: Option<Vec<u32>>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, value_enum)]
    strategy: Option<StrategyArg>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    steps: Option<u64>,
    /// Largest exhaustive space accepted.
    #[arg(long)]
    cap: Option<u64>,
    /// Disable isomorph rejection.
    #[arg(long)]
    no_prune: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Exhaustive,
    Random,
    LocalSearch,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Exhaustive => Strategy::Exhaustive,
            StrategyArg::Random => Strategy::Random,
            StrategyArg::LocalSearch => Strategy::LocalSearch,
        }
    }
}

/// A failure and the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
    dump: Option<Value>,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Domain(_) | Error::Precondition(_) => EXIT_USAGE,
            Error::Codec(_) | Error::Io(_) => EXIT_DATA,
            Error::LemmaViolation(_) => EXIT_SOFTWARE,
            Error::BudgetExceeded(_) => EXIT_BUDGET,
        };
        Failure {
            code,
            message: e.to_string(),
            dump: None,
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
        dump: None,
    }
}

fn violation(message: impl Into<String>, input: &AnyGraph) -> Failure {
    Failure {
        code: EXIT_SOFTWARE,
        message: message.into(),
        dump: Some(codec::to_value(input)),
    }
}

/// What a command produced: JSON for standard output, a summary line for
/// standard error and an exit code.
struct Emit {
    json: Value,
    summary: String,
    code: u8,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    let output = cli.output.clone();
    let result = run(cli).and_then(|emit| {
        let text = serde_json::to_string_pretty(&emit.json).expect("json values serialize") + "\n";
        match &output {
            Some(p) => std::fs::write(p, text).map_err(|e| Failure {
                code: EXIT_DATA,
                message: format!("cannot write {}: {e}", p.display()),
                dump: None,
            })?,
            None => print!("{text}"),
        }
        Ok(emit)
    });
    match result {
        Ok(emit) => {
            eprintln!("{}", emit.summary);
            ExitCode::from(emit.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            if let Some(d) = f.dump {
                eprintln!("{}", serde_json::to_string(&d).expect("json values serialize"));
            }
            ExitCode::from(f.code)
        }
    }
}

fn read_input(path: &Option<PathBuf>) -> Result<String, Failure> {
    let mut text = String::new();
    match path {
        Some(p) if p.as_os_str() != "-" => {
            text = std::fs::read_to_string(p).map_err(|e| Failure {
                code: EXIT_DATA,
                message: format!("cannot read {}: {e}", p.display()),
                dump: None,
            })?;
        }
        _ => {
            std::io::stdin().read_to_string(&mut text).map_err(Error::from)?;
        }
    }
    Ok(text)
}

fn read_graph(path: &Option<PathBuf>) -> Result<AnyGraph, Failure> {
    let text = read_input(path)?;
    Ok(codec::parse(&text).map_err(Error::from)?)
}

fn budget(b: Option<u64>) -> SearchBudget {
    b.map_or(SearchBudget::unlimited(), SearchBudget::nodes)
}

fn cycle_json(z: &GroupSpec, c: &CycleWitness) -> Value {
    json!({ "vertices": c.vertices, "directed": c.directed, "weight": z.residues(c.weight) })
}

fn path_json(z: &GroupSpec, p: &PathWitness) -> Value {
    json!({ "vertices": p.vertices, "weight": z.residues(p.weight) })
}

fn run(cli: Cli) -> Result<Emit, Failure> {
    match cli.command {
        Command::FindZeroCycle {
            input,
            min_len,
            budget: b,
        } => find_zero_cycle(&read_graph(&input)?, min_len, b),
        Command::Paths {
            input,
            v,
            u,
            r,
            budget: b,
        } => {
            let AnyGraph::Directed(g) = read_graph(&input)? else {
                return Err(usage("paths needs a directed graph"));
            };
            let z = g.group().clone();
            let s = distinct_weight_paths(&g, v, u, r, budget(b))?;
            let (code, family) = match &s.outcome {
                Search::Found(f) => (
                    EXIT_OK,
                    json!(f.paths.iter().map(|p| path_json(&z, p)).collect::<Vec<_>>()),
                ),
                Search::Exhausted => (EXIT_OK, Value::Null),
                Search::BudgetExceeded => (EXIT_BUDGET, Value::Null),
            };
            let achieved: Vec<Value> = s.achieved.iter().map(|p| path_json(&z, p)).collect();
            Ok(Emit {
                summary: format!(
                    "paths {v} -> {u}: {} ({} distinct weights seen)",
                    s.outcome.label(),
                    achieved.len()
                ),
                json: json!({ "outcome": s.outcome.label(), "r": r, "family": family, "achieved": achieved }),
                code,
            })
        }
        Command::ClassifyNearap { k, set } => {
            let a = ResidueSet::new(k, set)?;
            let c = classify_near_ap(&a)?;
            let summary = match c.class {
                NearApClass::NotNearAp => format!("{:?} is not a near-AP in Z_{k}", a.members()),
                NearApClass::DivisorCase { d } => format!("DivisorCase d={d}"),
                NearApClass::UnitCase { a } => format!("UnitCase a={a}"),
            };
            Ok(Emit {
                json: serde_json::to_value(&c).expect("classification serializes"),
                summary,
                code: EXIT_OK,
            })
        }
        Command::Construct(Construct::ExtremalDigraph { k }) => {
            let g = build_extremal_digraph(k)?;
            Ok(Emit {
                summary: format!(
                    "extremal digraph over Z_{k}: {} vertices, {} arcs",
                    g.order(),
                    g.edge_count()
                ),
                json: codec::to_value(&AnyGraph::Directed(g)),
                code: EXIT_OK,
            })
        }
        Command::Construct(Construct::ExtremalUndirected { k, path, tree }) => {
            let tree = if tree.is_empty() {
                path_tree(path.unwrap_or(2))
            } else {
                parse_tree(&tree)?
            };
            let g = build_extremal_undirected(k, &tree)?;
            Ok(Emit {
                summary: format!(
                    "extremal graph over Z_{k}: {} vertices, {} edges, minimum degree {}",
                    g.order(),
                    g.edge_count(),
                    g.min_degree()
                ),
                json: codec::to_value(&AnyGraph::Undirected(g)),
                code: EXIT_OK,
            })
        }
        Command::Solve(s) => solve(s),
        Command::Verify(Verify::LemmaInc { kmax }) => {
            let cfg = ExperimentConfig {
                k_max: Some(kmax),
                ..ExperimentConfig::new(Task::LemmaInc)
            };
            experiment(cfg, cli.jobs)
        }
        Command::Verify(Verify::Theorem { which, exp }) => {
            let task = match which {
                Which::Main => Task::TheoremMain,
                Which::Corollary => Task::TheoremCorollary,
                Which::Undirected => Task::TheoremUndirected,
            };
            experiment(exp_config(task, &exp)?, cli.jobs)
        }
        Command::Explore(e) => {
            let (task, exp) = match e {
                Explore::FBound(x) => (Task::FBound, x),
                Explore::Q1(x) => (Task::Question1, x),
                Explore::Q2(x) => (Task::Question2, x),
            };
            experiment(exp_config(task, &exp)?, cli.jobs)
        }
    }
}

fn parse_tree(items: &[String]) -> Result<Vec<(usize, usize)>, Failure> {
    items
        .iter()
        .map(|s| {
            let (a, b) = s
                .split_once('-')
                .ok_or_else(|| usage(format!("tree edge `{s}` is not `a-b`")))?;
            let p = |t: &str| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| usage(format!("bad vertex in tree edge `{s}`")))
            };
            Ok((p(a)?, p(b)?))
        })
        .collect()
}

fn find_zero_cycle(g: &AnyGraph, min_len: Option<usize>, b: Option<u64>) -> Result<Emit, Failure> {
    let (res, stats) = match g {
        AnyGraph::Directed(d) => {
            let verts: Vec<usize> = (0..d.order()).collect();
            find_zero_cycle_with_stats(d, &verts, min_len.unwrap_or(2), usize::MAX, budget(b))?
        }
        AnyGraph::Undirected(u) => {
            let verts: Vec<usize> = (0..u.order()).collect();
            find_zero_cycle_with_stats(u, &verts, min_len.unwrap_or(3), usize::MAX, budget(b))?
        }
    };
    let z = g.group();
    let (code, cycle) = match &res {
        Search::Found(c) => (EXIT_OK, cycle_json(z, c)),
        Search::Exhausted => (EXIT_OK, Value::Null),
        Search::BudgetExceeded => (EXIT_BUDGET, Value::Null),
    };
    Ok(Emit {
        summary: format!(
            "zero cycle: {} ({} cycles, {} nodes)",
            res.label(),
            stats.cycles,
            stats.nodes
        ),
        json: json!({
            "outcome": res.label(),
            "cycle": cycle,
            "stats": { "nodes": stats.nodes, "cycles": stats.cycles },
        }),
        code,
    })
}

fn solve(s: Solve) -> Result<Emit, Failure> {
    match s {
        Solve::LemmaOne {
            input,
            u,
            v,
            r,
            budget: b,
        } => {
            let any = read_graph(&input)?;
            let AnyGraph::Directed(g) = &any else {
                return Err(usage("lemma-one needs a directed graph"));
            };
            let verts: Vec<usize> = (0..g.order()).collect();
            let out = lemma_one_solve_with(g, &verts, u, v, r, budget(b))?;
            let z = g.group();
            let result = match &out.result {
                LemmaResult::ZeroCycle(c) => {
                    let avoid: Vec<usize> = verts.iter().copied().filter(|&x| x != u && x != v).collect();
                    check_zero_cycle(g, c, 2, Some(&avoid))
                        .map_err(|e| violation(format!("lemma output fails validation: {e}"), &any))?;
                    json!({ "cycle": cycle_json(z, c) })
                }
                LemmaResult::Family(f) => {
                    check_family(g, f, r, 3, None)
                        .map_err(|e| violation(format!("lemma output fails validation: {e}"), &any))?;
                    json!({ "paths": f.paths.iter().map(|p| path_json(z, p)).collect::<Vec<_>>() })
                }
            };
            Ok(Emit {
                summary: format!(
                    "lemma: {} after {} steps, {} oracle fallbacks",
                    out.result.tag(),
                    out.trace.len(),
                    out.fallbacks()
                ),
                json: json!({
                    "outcome": out.result.tag(),
                    "result": result,
                    "trace": out.trace,
                    "oracle_fallbacks": out.fallbacks(),
                }),
                code: EXIT_OK,
            })
        }
        Solve::TheoremMain { input, budget: b } => {
            let any = read_graph(&input)?;
            let AnyGraph::Directed(g) = &any else {
                return Err(usage("theorem-main needs a directed graph"));
            };
            let verts: Vec<usize> = (0..g.order()).collect();
            let out = theorem_main_solve_with(g, &verts, budget(b))?;
            check_zero_cycle(g, &out.cycle, 2, None)
                .map_err(|e| violation(format!("solver output fails validation: {e}"), &any))?;
            Ok(Emit {
                summary: format!(
                    "zero cycle of length {}, {} oracle fallbacks",
                    out.cycle.vertices.len(),
                    out.fallbacks()
                ),
                json: json!({
                    "outcome": "found",
                    "cycle": cycle_json(g.group(), &out.cycle),
                    "trace": out.trace,
                    "oracle_fallbacks": out.fallbacks(),
                }),
                code: EXIT_OK,
            })
        }
        Solve::TheoremUndirected { input, budget: b } => {
            let any = read_graph(&input)?;
            let AnyGraph::Undirected(g) = &any else {
                return Err(usage("theorem-undirected needs an undirected graph"));
            };
            let out = theorem_undirected_solve_with(g, budget(b))?;
            check_zero_cycle(g, &out.cycle, 3, None)
                .map_err(|e| violation(format!("solver output fails validation: {e}"), &any))?;
            Ok(Emit {
                summary: format!(
                    "zero cycle of length {}, {} oracle fallbacks",
                    out.cycle.vertices.len(),
                    out.fallbacks()
                ),
                json: json!({
                    "outcome": "found",
                    "cycle": cycle_json(g.group(), &out.cycle),
                    "trace": out.trace,
                    "oracle_fallbacks": out.fallbacks(),
                }),
                code: EXIT_OK,
            })
        }
    }
}

fn exp_config(task: Task, a: &ExpArgs) -> Result<ExperimentConfig, Failure> {
    let mut cfg = match &a.config {
        Some(p) => {
            let cfg = ExperimentConfig::from_json(&read_input(&Some(p.clone()))?).map_err(|e| Failure {
                code: EXIT_DATA,
                message: format!("{}: {e}", p.display()),
                dump: None,
            })?;
            if cfg.task != task {
                return Err(usage(format!(
                    "config task {:?} does not match the subcommand",
                    cfg.task
                )));
            }
            cfg
        }
        None => ExperimentConfig::new(task),
    };
    macro_rules! set {
        ($($f:ident),*) => {$( if a.$f.is_some() { cfg.$f = a.$f.clone(); } )*};
    }
    set!(k, group, n, trials, seed, budget, steps);
    if let Some(s) = a.strategy {
        cfg.strategy = Some(s.into());
    }
    if let Some(c) = a.cap {
        cfg.cap = c;
    }
    if a.no_prune {
        cfg.prune = false;
    }
    Ok(cfg)
}

fn experiment(cfg: ExperimentConfig, jobs: usize) -> Result<Emit, Failure> {
    let report: BoundReport = run_experiment(&cfg, jobs)?;
    let c = &report.counters;
    let summary = format!(
        "{:?}: {} ({}), tested {} of {}, pruned {}, fallbacks {}, budget-exceeded {}, {:.2}s",
        cfg.task,
        serde_json::to_value(report.outcome)
            .expect("outcome serializes")
            .as_str()
            .unwrap_or(""),
        report.evidence,
        c.instances_tested,
        c.instances_total,
        c.pruned,
        c.oracle_fallbacks,
        c.budget_exceeded,
        report.timing.as_ref().map_or(0.0, |t| t.wall_seconds),
    );
    let code = match report.exit_code() {
        2 => EXIT_WITNESS,
        3 => EXIT_BUDGET,
        _ => EXIT_OK,
    };
    Ok(Emit {
        json: serde_json::to_value(&report).expect("reports serialize"),
        summary,
        code,
    })
}
