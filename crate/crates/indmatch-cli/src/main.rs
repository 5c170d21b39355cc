//! `indmatch` — solve, verify, and inspect deletion-to-induced-matching
//! instances from the command line.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use indmatch::branching::{branching_number, BranchingVector};
use indmatch::graph::{Graph, Vertex, VertexSet};
use indmatch::pathdecomp::{decompose_for_instance, DEFAULT_EXACT_THRESHOLD};
use indmatch::pipeline::{solve_extend, solve_ind, verify, PipelineStats, SolveConfig};
use indmatch::Solution;

const THRESHOLD_ENV: &str = "INDMATCH_EXACT_THRESHOLD";

#[derive(Parser)]
#[command(
    name = "indmatch",
    about = "Exact solvers for deletion to induced matching",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct SolveOpts {
    /// Instance file (edge list or DIMACS)
    file: PathBuf,
    /// Output format
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Exact decomposition up to this many vertices (env INDMATCH_EXACT_THRESHOLD)
    #[arg(long)]
    exact_threshold: Option<usize>,
    /// Dump per-leaf decomposition records as JSON on stderr
    #[arg(long)]
    trace: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether k deletions suffice and print a certificate
    SolveInd {
        /// Deletion budget
        #[arg(short)]
        k: u64,
        #[command(flatten)]
        opts: SolveOpts,
    },
    /// Compute a minimum deletion set
    SolveExtend {
        #[command(flatten)]
        opts: SolveOpts,
    },
    /// Check a deletion set against an instance (exit 1 when invalid)
    Verify {
        file: PathBuf,
        /// Comma-separated vertex ids
        #[arg(long)]
        set: String,
        /// Optional budget to enforce
        #[arg(short)]
        k: Option<u64>,
    },
    /// Print a path decomposition and its width
    Decompose {
        file: PathBuf,
        /// Print the nice (leaf/introduce/forget) form
        #[arg(long)]
        nice: bool,
        #[arg(long)]
        exact_threshold: Option<usize>,
    },
    /// Solve every instance in a directory and emit one CSV row each
    Bench {
        dir: PathBuf,
        /// Fixed budget: run the decision solver instead of minimization
        #[arg(long)]
        k: Option<u64>,
        #[arg(long)]
        exact_threshold: Option<usize>,
    },
    /// Print the branching number of a comma-separated decrement vector
    BranchingNumber {
        /// e.g. 1,4,4,4,4
        vector: String,
    },
    /// Generate a random instance in canonical edge-list form
    Gen {
        /// Number of vertices
        #[arg(short)]
        n: u32,
        /// Edge probability
        #[arg(short, default_value = "0.3")]
        p: f64,
        /// RNG seed
        #[arg(long, default_value = "0")]
        seed: u64,
        /// Output file (stdout when absent)
        #[arg(short)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn resolve_threshold(flag: Option<usize>) -> Result<usize> {
    let value = match flag {
        Some(v) => v,
        None => match std::env::var(THRESHOLD_ENV) {
            Ok(raw) => raw
                .parse()
                .with_context(|| format!("bad {THRESHOLD_ENV} value `{raw}`"))?,
            Err(_) => DEFAULT_EXACT_THRESHOLD,
        },
    };
    if value < 4 {
        bail!("exact threshold must be at least 4, got {value}");
    }
    Ok(value)
}

fn load_graph(path: &Path) -> Result<Graph> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    Graph::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

fn parse_vertex_set(raw: &str) -> Result<VertexSet> {
    raw.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            t.trim()
                .parse::<Vertex>()
                .with_context(|| format!("bad vertex id `{t}`"))
        })
        .collect()
}

fn print_solution_lines(solution: &Solution) {
    println!("size {}", solution.deleted.len());
    let mut deleted = String::from("deleted");
    for v in &solution.deleted {
        let _ = write!(deleted, " {v}");
    }
    println!("{deleted}");
    let mut matching = String::from("matching");
    for (u, v) in &solution.matching {
        let _ = write!(matching, " {u}-{v}");
    }
    println!("{matching}");
}

fn print_stats_line(stats: &PipelineStats) {
    println!(
        "nodes {} leaves {} max_width {} dp {} gate {}",
        stats.search.nodes_expanded,
        stats.search.leaves,
        stats.max_width,
        stats.dp_invocations,
        stats.gate_rejections
    );
}

fn emit_trace(stats: &PipelineStats) {
    let records = serde_json::to_string(&stats.leaf_records).expect("records serialize");
    eprintln!("{records}");
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::SolveInd { k, opts } => {
            let g = load_graph(&opts.file)?;
            let config = SolveConfig {
                exact_threshold: resolve_threshold(opts.exact_threshold)?,
                collect_leaf_records: opts.trace,
                ..SolveConfig::default()
            };
            let answer = solve_ind(&g, k, &config);
            if opts.trace {
                emit_trace(&answer.stats);
            }
            match opts.format {
                Format::Json => println!("{}", answer.to_json()),
                Format::Text => {
                    println!("decision {}", if answer.decision { "yes" } else { "no" });
                    if let Some(solution) = &answer.solution {
                        print_solution_lines(solution);
                    }
                    print_stats_line(&answer.stats);
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::SolveExtend { opts } => {
            let g = load_graph(&opts.file)?;
            let config = SolveConfig {
                exact_threshold: resolve_threshold(opts.exact_threshold)?,
                collect_leaf_records: opts.trace,
                ..SolveConfig::default()
            };
            let answer = solve_extend(&g, &config);
            if opts.trace {
                emit_trace(&answer.stats);
            }
            match opts.format {
                Format::Json => println!("{}", answer.to_json()),
                Format::Text => {
                    println!("minimum {}", answer.solution.deleted.len());
                    print_solution_lines(&answer.solution);
                    print_stats_line(&answer.stats);
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { file, set, k } => {
            let g = load_graph(&file)?;
            let s = parse_vertex_set(&set)?;
            let ok = verify(&g, &s, k)?;
            println!("{}", if ok { "valid" } else { "invalid" });
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Decompose {
            file,
            nice,
            exact_threshold,
        } => {
            let g = load_graph(&file)?;
            let threshold = resolve_threshold(exact_threshold)?;
            if g.max_degree() > 3 {
                bail!("decompose expects maximum degree 3, got {}", g.max_degree());
            }
            let outcome = decompose_for_instance(&g, threshold)?;
            if nice {
                print!("{}", outcome.nice.to_text());
            } else {
                print!("{}", outcome.nice.as_path_decomposition().to_text());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Bench {
            dir,
            k,
            exact_threshold,
        } => {
            let threshold = resolve_threshold(exact_threshold)?;
            let mut paths: Vec<PathBuf> = std::fs::read_dir(&dir)
                .with_context(|| format!("reading {}", dir.display()))?
                .filter_map(|entry| entry.ok().map(|e| e.path()))
                .filter(|p| p.is_file())
                .collect();
            paths.sort();
            println!("file,n,m,k,decision,s,nodes,leaves,max_width,millis");
            for path in paths {
                let g = load_graph(&path)?;
                let config = SolveConfig {
                    exact_threshold: threshold,
                    ..SolveConfig::default()
                };
                let start = Instant::now();
                let (decision, size, stats, budget) = match k {
                    Some(k) => {
                        let answer = solve_ind(&g, k, &config);
                        let size = answer.solution.as_ref().map(|s| s.deleted.len());
                        (answer.decision, size, answer.stats, k)
                    }
                    None => {
                        let answer = solve_extend(&g, &config);
                        let size = answer.solution.deleted.len();
                        (true, Some(size), answer.stats, size as u64)
                    }
                };
                let millis = start.elapsed().as_millis();
                let name = path
                    .file_name()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_default();
                println!(
                    "{},{},{},{},{},{},{},{},{},{}",
                    name,
                    g.vertex_count(),
                    g.edge_count(),
                    budget,
                    if decision { "yes" } else { "no" },
                    size.map(|s| s.to_string()).unwrap_or_default(),
                    stats.search.nodes_expanded,
                    stats.search.leaves,
                    stats.max_width,
                    millis
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::BranchingNumber { vector } => {
            let decrements: Vec<u32> = vector
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<u32>()
                        .with_context(|| format!("bad decrement `{t}`"))
                })
                .collect::<Result<_>>()?;
            let vector = BranchingVector::new(decrements).map_err(|e| anyhow::anyhow!(e))?;
            println!("{:.4}", branching_number(&vector));
            Ok(ExitCode::SUCCESS)
        }
        Command::Gen { n, p, seed, output } => {
            if !(0.0..=1.0).contains(&p) {
                bail!("edge probability must be within [0, 1], got {p}");
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut g = Graph::new();
            for v in 1..=n {
                g.add_vertex(v);
            }
            for u in 1..=n {
                for v in (u + 1)..=n {
                    if rng.gen_bool(p) {
                        g.add_edge(u, v).unwrap();
                    }
                }
            }
            let text = g.to_edge_list();
            match output {
                Some(path) => std::fs::write(&path, text)
                    .with_context(|| format!("writing {}", path.display()))?,
                None => print!("{text}"),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
