use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::baselines::{build_etc, EtcIndex, ProductSearch};
use crate::builder::build_index;
use crate::error::{Result, RlcError};
use crate::graph::{Graph, VertexId};
use crate::index::RlcIndex;
use crate::labelseq::LabelSeq;

use super::Workload;

/// Anything that answers `(s, t, L+)` queries.
pub trait Evaluator {
    fn evaluate(&mut self, s: VertexId, t: VertexId, labels: &LabelSeq) -> Result<bool>;
}

impl Evaluator for &RlcIndex {
    fn evaluate(&mut self, s: VertexId, t: VertexId, labels: &LabelSeq) -> Result<bool> {
        self.query(s, t, labels)
    }
}

impl Evaluator for EtcIndex {
    fn evaluate(&mut self, s: VertexId, t: VertexId, labels: &LabelSeq) -> Result<bool> {
        self.query(s, t, labels)
    }
}

struct Nfa<'g>(ProductSearch<'g>);

impl Evaluator for Nfa<'_> {
    fn evaluate(&mut self, s: VertexId, t: VertexId, labels: &LabelSeq) -> Result<bool> {
        Ok(self.0.nfa_bfs(s, t, labels.labels()))
    }
}

struct BiBfs<'g>(ProductSearch<'g>);

impl Evaluator for BiBfs<'_> {
    fn evaluate(&mut self, s: VertexId, t: VertexId, labels: &LabelSeq) -> Result<bool> {
        Ok(self.0.bibfs(s, t, labels.labels(), None).unwrap_or(false))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EvaluatorKind {
    Index,
    Bfs,
    BiBfs,
    Etc,
}

impl EvaluatorKind {
    pub fn name(self) -> &'static str {
        match self {
            EvaluatorKind::Index => "index",
            EvaluatorKind::Bfs => "bfs",
            EvaluatorKind::BiBfs => "bibfs",
            EvaluatorKind::Etc => "etc",
        }
    }
}

impl fmt::Display for EvaluatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EvaluatorKind {
    type Err = RlcError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "index" => Ok(EvaluatorKind::Index),
            "bfs" => Ok(EvaluatorKind::Bfs),
            "bibfs" => Ok(EvaluatorKind::BiBfs),
            "etc" => Ok(EvaluatorKind::Etc),
            other => Err(RlcError::ConfigRejected(format!(
                "unknown evaluator `{other}` (expected index, bfs, bibfs or etc)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchConfig {
    pub k: usize,
    pub repeats: usize,
    /// The index is always measured, whether listed or not.
    pub evaluators: Vec<EvaluatorKind>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            k: 2,
            repeats: 3,
            evaluators: vec![EvaluatorKind::Index, EvaluatorKind::Bfs, EvaluatorKind::BiBfs],
        }
    }
}

/// Queries after which building the index has paid for itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BreakEven {
    Queries(u64),
    Never,
}

impl fmt::Display for BreakEven {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BreakEven::Queries(q) => write!(f, "{q}"),
            BreakEven::Never => f.write_str("never"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub kind: EvaluatorKind,
    pub build: Option<Duration>,
    /// Median over repeats of the time to answer the whole workload.
    pub median_total: Duration,
    pub per_query: Duration,
    /// Baseline time over index time; `None` for the index itself.
    pub speedup: Option<f64>,
    pub break_even: Option<BreakEven>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub k: usize,
    pub queries: usize,
    pub true_queries: usize,
    pub index_entries: usize,
    pub index_bytes: usize,
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    pub fn row(&self, kind: EvaluatorKind) -> Option<&BenchRow> {
        self.rows.iter().find(|r| r.kind == kind)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["evaluator", "build_s", "total_s", "per_query_us", "speedup", "break_even"])?;
        for r in &self.rows {
            w.write_record([
                r.kind.name().to_owned(),
                r.build.map(|d| format!("{:.6}", d.as_secs_f64())).unwrap_or_default(),
                format!("{:.6}", r.median_total.as_secs_f64()),
                format!("{:.3}", r.per_query.as_secs_f64() * 1e6),
                r.speedup.map(|s| format!("{s:.2}")).unwrap_or_default(),
                r.break_even.map(|b| b.to_string()).unwrap_or_default(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

impl fmt::Display for BenchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "k = {}, {} queries ({} true), index: {} entries, {} bytes",
            self.k, self.queries, self.true_queries, self.index_entries, self.index_bytes
        )?;
        writeln!(
            f,
            "{:<8} {:>12} {:>12} {:>14} {:>9} {:>11}",
            "eval", "build (s)", "total (s)", "per query (us)", "speedup", "break-even"
        )?;
        for r in &self.rows {
            writeln!(
                f,
                "{:<8} {:>12} {:>12.6} {:>14.3} {:>9} {:>11}",
                r.kind.name(),
                r.build.map(|d| format!("{:.3}", d.as_secs_f64())).unwrap_or_else(|| "-".into()),
                r.median_total.as_secs_f64(),
                r.per_query.as_secs_f64() * 1e6,
                r.speedup.map(|s| format!("{s:.1}x")).unwrap_or_else(|| "-".into()),
                r.break_even.map(|b| b.to_string()).unwrap_or_else(|| "-".into()),
            )?;
        }
        Ok(())
    }
}

fn median(mut samples: Vec<Duration>) -> Duration {
    samples.sort_unstable();
    let mid = samples.len() / 2;
    if samples.len() % 2 == 1 {
        samples[mid]
    } else {
        (samples[mid - 1] + samples[mid]) / 2
    }
}

fn time_workload(eval: &mut dyn Evaluator, name: &str, workload: &Workload, repeats: usize) -> Result<Duration> {
    let mut totals = Vec::with_capacity(repeats);
    for _ in 0..repeats {
        let start = Instant::now();
        for (i, q) in workload.queries.iter().enumerate() {
            let got = eval.evaluate(q.s, q.t, &q.labels)?;
            if got != q.expected {
                return Err(RlcError::EvaluatorMismatch {
                    evaluator: name.to_owned(),
                    query: i,
                    expected: q.expected,
                    got,
                });
            }
        }
        totals.push(start.elapsed());
    }
    Ok(median(totals))
}

fn break_even(build: Duration, baseline_per_query: f64, index_per_query: f64) -> BreakEven {
    let gain = baseline_per_query - index_per_query;
    if gain <= 0.0 {
        BreakEven::Never
    } else {
        BreakEven::Queries((build.as_secs_f64() / gain).ceil() as u64)
    }
}

/// Builds the index, then times each evaluator over the workload. Every
/// answer is checked against the workload's expected value.
pub fn run_bench(g: &Graph, workload: &Workload, config: &BenchConfig) -> Result<BenchReport> {
    check_config(workload, config)?;
    let start = Instant::now();
    let index = build_index(g, config.k)?;
    let index_build = start.elapsed();
    log::info!("index built in {:.3}s", index_build.as_secs_f64());
    run_bench_prebuilt(g, &index, index_build, workload, config)
}

/// [`run_bench`] over an index built elsewhere; `index_build` is the build
/// time used for break-even points. `config.k` must match the index.
pub fn run_bench_prebuilt(
    g: &Graph,
    index: &RlcIndex,
    index_build: Duration,
    workload: &Workload,
    config: &BenchConfig,
) -> Result<BenchReport> {
    check_config(workload, config)?;
    if index.k() != config.k || index.num_vertices() != g.num_vertices() {
        return Err(RlcError::ConfigRejected(format!(
            "index (k = {}, {} vertices) does not match graph ({} vertices) and k = {}",
            index.k(),
            index.num_vertices(),
            g.num_vertices(),
            config.k
        )));
    }
    run_evaluators(g, index, index_build, workload, config)
}

fn check_config(workload: &Workload, config: &BenchConfig) -> Result<()> {
    if workload.is_empty() {
        return Err(RlcError::ConfigRejected("empty workload".into()));
    }
    if config.repeats == 0 {
        return Err(RlcError::ConfigRejected("repeats must be positive".into()));
    }
    if let Some(q) = workload.queries.iter().find(|q| q.labels.len() > config.k) {
        return Err(RlcError::UnsupportedConstraint { len: q.labels.len(), k: config.k });
    }
    Ok(())
}

fn run_evaluators(
    g: &Graph,
    index: &RlcIndex,
    index_build: Duration,
    workload: &Workload,
    config: &BenchConfig,
) -> Result<BenchReport> {
    let mut kinds = vec![EvaluatorKind::Index];
    for &kind in &config.evaluators {
        if !kinds.contains(&kind) {
            kinds.push(kind);
        }
    }

    let count = workload.len() as u32;
    let mut rows: Vec<BenchRow> = Vec::with_capacity(kinds.len());
    for kind in kinds {
        let (total, build) = match kind {
            EvaluatorKind::Index => {
                (time_workload(&mut &*index, kind.name(), workload, config.repeats)?, Some(index_build))
            }
            EvaluatorKind::Bfs => {
                let mut eval = Nfa(ProductSearch::new(g));
                (time_workload(&mut eval, kind.name(), workload, config.repeats)?, None)
            }
            EvaluatorKind::BiBfs => {
                let mut eval = BiBfs(ProductSearch::new(g));
                (time_workload(&mut eval, kind.name(), workload, config.repeats)?, None)
            }
            EvaluatorKind::Etc => {
                let start = Instant::now();
                let mut etc = build_etc(g, config.k)?;
                let built = start.elapsed();
                (time_workload(&mut etc, kind.name(), workload, config.repeats)?, Some(built))
            }
        };
        log::info!("{kind}: {:.6}s median total", total.as_secs_f64());
        rows.push(BenchRow {
            kind,
            build,
            median_total: total,
            per_query: total / count,
            speedup: None,
            break_even: None,
        });
    }

    let index_total = rows[0].median_total.as_secs_f64();
    let index_per_query = index_total / count as f64;
    for row in rows.iter_mut().skip(1) {
        let total = row.median_total.as_secs_f64();
        row.speedup = Some(if index_total > 0.0 { total / index_total } else { f64::INFINITY });
        row.break_even = Some(break_even(index_build, total / count as f64, index_per_query));
    }

    let stats = index.stats();
    Ok(BenchReport {
        k: config.k,
        queries: workload.len(),
        true_queries: workload.true_count(),
        index_entries: stats.entries,
        index_bytes: stats.bytes,
        rows,
    })
}
