use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use rlc_core::baselines::build_etc;
use rlc_core::graph::{generate_ba, generate_er, graph_stats, load_edge_list_path, write_edge_list};
use rlc_core::workload::{
    generate_workload, read_workload, run_bench, run_bench_prebuilt, verify_equivalence, write_workload, BenchConfig,
    EvaluatorKind, VerifyParams, WorkloadParams,
};
use rlc_core::{build_index, ExecMode, Graph, RlcIndex};

/// Build and query reachability indexes for recursive label-concatenated
/// path constraints on edge-labeled graphs.
#[derive(Debug, Parser)]
#[command(name = "rlc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Model {
    /// Uniform random digraph with a fixed edge count
    Er,
    /// Preferential attachment
    Ba,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    Sequential,
    Parallel,
}

impl From<Mode> for ExecMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Sequential => ExecMode::Sequential,
            Mode::Parallel => ExecMode::Parallel,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a synthetic labeled graph as an edge list
    GenGraph {
        #[arg(long, value_enum, default_value = "er")]
        model: Model,
        #[arg(long)]
        n: usize,
        /// Average out-degree (ER only)
        #[arg(long, default_value_t = 5.0)]
        deg: f64,
        /// Edges added per new vertex (BA only)
        #[arg(long, default_value_t = 3)]
        m: usize,
        #[arg(long, default_value_t = 8)]
        labels: usize,
        /// Zipf exponent of the label distribution
        #[arg(long, default_value_t = 2.0)]
        zipf: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; standard output when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw a query workload with balanced true and false answers
    GenWorkload {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 1000)]
        true_queries: usize,
        #[arg(long, default_value_t = 1000)]
        false_queries: usize,
        /// Length of every label constraint
        #[arg(long, default_value_t = 2)]
        len: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Product-state expansions allowed when classifying one draw
        #[arg(long, default_value_t = 10_000_000)]
        step_cap: u64,
        #[arg(long)]
        max_draws: Option<u64>,
        #[arg(long, value_enum, default_value = "parallel")]
        mode: Mode,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build an index from an edge list and save it
    Build {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Answer one query against a saved index; prints true or false
    Query {
        #[arg(long)]
        index: PathBuf,
        #[arg(long)]
        s: String,
        #[arg(long)]
        t: String,
        /// Space-separated label names
        #[arg(long)]
        labels: String,
        /// Kleene star instead of plus (an empty path also matches)
        #[arg(long)]
        star: bool,
    },
    /// Time the index against online baselines over a workload
    Bench {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        workload: PathBuf,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 3)]
        repeats: usize,
        #[arg(long, value_delimiter = ',', default_value = "index,bfs,bibfs")]
        evaluators: Vec<EvaluatorKind>,
        /// Use a saved index instead of building one
        #[arg(long)]
        index: Option<PathBuf>,
        /// Build time of the saved index in seconds, for break-even points
        #[arg(long, requires = "index")]
        build_secs: Option<f64>,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the index with exhaustive search on random small graphs
    Verify {
        #[arg(long, default_value_t = 200)]
        graphs: usize,
        #[arg(long, default_value_t = 5)]
        min_n: usize,
        #[arg(long, default_value_t = 50)]
        max_n: usize,
        #[arg(long, default_value_t = 1.0)]
        min_deg: f64,
        #[arg(long, default_value_t = 6.0)]
        max_deg: f64,
        #[arg(long, default_value_t = 2)]
        min_labels: usize,
        #[arg(long, default_value_t = 4)]
        max_labels: usize,
        #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
        k: Vec<usize>,
        #[arg(long, default_value_t = 1.0)]
        zipf: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "parallel")]
        mode: Mode,
    },
    /// Print size statistics of a graph or an index
    Stats {
        #[arg(long, required_unless_present = "index", conflicts_with = "index")]
        graph: Option<PathBuf>,
        #[arg(long)]
        index: Option<PathBuf>,
    },
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("cannot create {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn load_graph(path: &Path) -> Result<Graph> {
    load_edge_list_path(path).with_context(|| format!("cannot load graph {}", path.display()))
}

fn load_index(path: &Path) -> Result<RlcIndex> {
    RlcIndex::load(path).with_context(|| format!("cannot load index {}", path.display()))
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::GenGraph { model, n, deg, m, labels, zipf, seed, out } => {
            let (g, params) = match model {
                Model::Er => (
                    generate_er(n, deg, labels, zipf, seed)?,
                    format!("model=er n={n} deg={deg} labels={labels} zipf={zipf} seed={seed}"),
                ),
                Model::Ba => (
                    generate_ba(n, m, labels, zipf, seed)?,
                    format!("model=ba n={n} m={m} labels={labels} zipf={zipf} seed={seed}"),
                ),
            };
            write_edge_list(&g, &[params], output(out.as_deref())?)?;
        }
        Command::GenWorkload { graph, true_queries, false_queries, len, seed, step_cap, max_draws, mode, out } => {
            let g = load_graph(&graph)?;
            let params = WorkloadParams {
                true_queries,
                false_queries,
                constraint_len: len,
                seed,
                step_cap,
                max_draws,
                mode: mode.into(),
            };
            let w = generate_workload(&g, &params)?;
            write_workload(&g, &w, output(out.as_deref())?)?;
        }
        Command::Build { graph, k, out } => {
            let g = load_graph(&graph)?;
            let start = Instant::now();
            let index = build_index(&g, k)?;
            let elapsed = start.elapsed();
            index.save(&out).with_context(|| format!("cannot write {}", out.display()))?;
            let stats = index.stats();
            eprintln!("built index in {:.3}s: {} entries, {} bytes", elapsed.as_secs_f64(), stats.entries, stats.bytes);
        }
        Command::Query { index, s, t, labels, star } => {
            let index = load_index(&index)?;
            let (s, t) = (index.vertex_id(&s)?, index.vertex_id(&t)?);
            let constraint = index.parse_labels(&labels)?;
            let answer = if star { index.query_star(s, t, &constraint)? } else { index.query(s, t, &constraint)? };
            println!("{answer}");
        }
        Command::Bench { graph, workload, k, repeats, evaluators, index, build_secs, format, out } => {
            let g = load_graph(&graph)?;
            let file = File::open(&workload).with_context(|| format!("cannot open {}", workload.display()))?;
            let w = read_workload(&g, BufReader::new(file))?;
            let config = BenchConfig { k, repeats, evaluators };
            if config.evaluators.contains(&EvaluatorKind::Etc) {
                // fail fast before the index build when the closure cannot be built
                build_etc(&g, k)?;
            }
            let report = match index {
                Some(path) => {
                    let index = load_index(&path)?;
                    let build = Duration::from_secs_f64(build_secs.unwrap_or(0.0).max(0.0));
                    run_bench_prebuilt(&g, &index, build, &w, &config)?
                }
                None => run_bench(&g, &w, &config)?,
            };
            let mut out = output(out.as_deref())?;
            match format {
                Format::Table => write!(out, "{report}")?,
                Format::Csv => report.write_csv(&mut out)?,
            }
            out.flush()?;
        }
        Command::Verify { graphs, min_n, max_n, min_deg, max_deg, min_labels, max_labels, k, zipf, seed, mode } => {
            let params = VerifyParams {
                graphs,
                vertices: (min_n, max_n),
                avg_degree: (min_deg, max_deg),
                labels: (min_labels, max_labels),
                k_values: k,
                zipf,
                seed,
                mode: mode.into(),
            };
            let report = verify_equivalence(&params)?;
            println!(
                "graphs={} queries={} mismatches={} condensed_violations={}",
                report.graphs.len(),
                report.queries(),
                report.mismatches(),
                report.condensed_violations()
            );
            for (i, check) in report.graphs.iter().enumerate().filter(|(_, c)| !c.passed()) {
                eprintln!(
                    "graph {i} (n={}, seed={}, k={}): {} mismatches, {} redundant entries",
                    check.vertices,
                    check.seed,
                    check.k,
                    check.mismatches.len(),
                    check.condensed_violations
                );
            }
            if !report.passed() {
                bail!("verification failed");
            }
        }
        Command::Stats { graph, index } => {
            if let Some(path) = index {
                let index = load_index(&path)?;
                let s = index.stats();
                println!("vertices={}", index.num_vertices());
                println!("k={}", index.k());
                println!("entries={}", s.entries);
                println!("in_entries={}", s.in_entries);
                println!("out_entries={}", s.out_entries);
                println!("repeats={}", s.dictionary);
                println!("bytes={}", s.bytes);
            } else if let Some(path) = graph {
                let s = graph_stats(&load_graph(&path)?);
                println!("vertices={}", s.vertices);
                println!("edges={}", s.edges);
                println!("labels={}", s.labels);
                println!("self_loops={}", s.self_loops);
                println!("triangles={}", s.triangles);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("RLC_LOG")).init();
    // clap exits with status 2 on usage errors
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
