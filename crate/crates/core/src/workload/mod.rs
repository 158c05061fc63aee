//! Query workloads, the benchmark harness and randomized verification.

mod bench;
mod verify;

use std::io::{Read, Write};

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

use crate::baselines::ProductSearch;
use crate::error::{Result, RlcError};
use crate::graph::{Graph, VertexId};
use crate::labelseq::{Label, LabelSeq};
use crate::par::{self, ExecMode};

pub use bench::{
    run_bench, run_bench_prebuilt, BenchConfig, BenchReport, BenchRow, BreakEven, Evaluator, EvaluatorKind,
};
pub use verify::{check_index, verify_equivalence, GraphCheck, Mismatch, VerifyParams, VerifyReport};

/// One labeled query with its known answer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    pub s: VertexId,
    pub t: VertexId,
    pub labels: LabelSeq,
    pub expected: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Workload {
    pub queries: Vec<Query>,
}

impl Workload {
    pub fn len(&self) -> usize {
        self.queries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.queries.is_empty()
    }

    pub fn true_count(&self) -> usize {
        self.queries.iter().filter(|q| q.expected).count()
    }

    pub fn false_count(&self) -> usize {
        self.len() - self.true_count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorkloadParams {
    pub true_queries: usize,
    pub false_queries: usize,
    pub constraint_len: usize,
    pub seed: u64,
    /// Expansion limit for classifying a draw; draws that hit it are dropped.
    pub step_cap: u64,
    /// Give up after this many draws. `None` allows `max(10_000, 1000 × wanted)`.
    pub max_draws: Option<u64>,
    pub mode: ExecMode,
}

impl Default for WorkloadParams {
    fn default() -> Self {
        WorkloadParams {
            true_queries: 1000,
            false_queries: 1000,
            constraint_len: 2,
            seed: 0,
            step_cap: 10_000_000,
            max_draws: None,
            mode: ExecMode::default(),
        }
    }
}

const DRAW_BATCH: usize = 1024;

/// Draws uniform `(s, t, L)` triples with primitive `L` of the requested
/// length and keeps them until both answer classes are filled.
///
/// Classification runs in parallel over fixed-size batches, and draws are
/// consumed in order, so the result depends only on the graph and `params`.
pub fn generate_workload(g: &Graph, params: &WorkloadParams) -> Result<Workload> {
    let n = g.num_vertices();
    let num_labels = g.num_labels();
    if n == 0 || num_labels == 0 {
        return Err(RlcError::ConfigRejected("workload needs a graph with vertices and labels".into()));
    }
    if params.constraint_len == 0 {
        return Err(RlcError::ConfigRejected("constraint length must be positive".into()));
    }
    if num_labels == 1 && params.constraint_len > 1 {
        return Err(RlcError::ConfigRejected(format!(
            "no primitive sequence of length {} over a single label",
            params.constraint_len
        )));
    }
    let wanted = params.true_queries + params.false_queries;
    let max_draws = params.max_draws.unwrap_or_else(|| (1000 * wanted as u64).max(10_000));

    let mut rng = Xoshiro256StarStar::seed_from_u64(params.seed);
    // filled counts per class: [false, true]
    let mut filled = [0usize; 2];
    let quota = [params.false_queries, params.true_queries];
    let mut queries = Vec::with_capacity(wanted);
    let mut draws: u64 = 0;

    while filled != quota {
        let batch: Vec<(VertexId, VertexId, LabelSeq)> = (0..DRAW_BATCH)
            .map(|_| {
                let s = rng.random_range(0..n) as VertexId;
                let t = rng.random_range(0..n) as VertexId;
                let labels: Vec<Label> =
                    (0..params.constraint_len).map(|_| Label(rng.random_range(0..num_labels) as u32)).collect();
                (s, t, LabelSeq::new(labels))
            })
            .collect();
        let answers = par::map_slice_init(
            params.mode,
            &batch,
            || ProductSearch::new(g),
            |search, (s, t, l)| {
                if crate::labelseq::minimum_repeat_len(l.labels()) != l.len() {
                    return None;
                }
                search.bibfs(*s, *t, l.labels(), Some(params.step_cap))
            },
        );
        for ((s, t, labels), answer) in batch.into_iter().zip(answers) {
            if draws >= max_draws {
                let short = if filled[1] < quota[1] { 1 } else { 0 };
                return Err(RlcError::UnsatisfiableWorkload {
                    class: if short == 1 { "true" } else { "false" },
                    filled: filled[short],
                    wanted: quota[short],
                    draws,
                });
            }
            draws += 1;
            let Some(expected) = answer else { continue };
            let class = expected as usize;
            if filled[class] < quota[class] {
                filled[class] += 1;
                queries.push(Query { s, t, labels, expected });
                if filled == quota {
                    break;
                }
            }
        }
    }
    log::info!("workload: {} queries from {draws} draws", queries.len());
    Ok(Workload { queries })
}

/// Writes `s,t,labels,expected` rows with external names; labels are
/// space-separated.
pub fn write_workload<W: Write>(g: &Graph, workload: &Workload, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["s", "t", "labels", "expected"])?;
    for q in &workload.queries {
        w.write_record([
            g.vertex_name(q.s),
            g.vertex_name(q.t),
            &g.format_labels(&q.labels),
            if q.expected { "true" } else { "false" },
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a workload written by [`write_workload`], resolving names in `g`.
pub fn read_workload<R: Read>(g: &Graph, input: R) -> Result<Workload> {
    let mut r = csv::ReaderBuilder::new().flexible(true).from_reader(input);
    let header = r.headers()?.clone();
    if header.iter().collect::<Vec<_>>() != ["s", "t", "labels", "expected"] {
        return Err(RlcError::Parse { line: 1, message: "expected header `s,t,labels,expected`".into() });
    }
    let mut queries = Vec::new();
    for (i, record) in r.records().enumerate() {
        let line = i + 2;
        let record = record?;
        let parse_err = |message: String| RlcError::Parse { line, message };
        if record.len() != 4 {
            return Err(parse_err(format!("expected 4 fields, found {}", record.len())));
        }
        let s = g.vertex_id(&record[0]).map_err(|e| parse_err(e.to_string()))?;
        let t = g.vertex_id(&record[1]).map_err(|e| parse_err(e.to_string()))?;
        let labels = g.parse_labels(&record[2]).map_err(|e| parse_err(e.to_string()))?;
        if labels.is_empty() {
            return Err(parse_err("empty label sequence".into()));
        }
        let expected = match &record[3] {
            "true" => true,
            "false" => false,
            other => return Err(parse_err(format!("`{other}` is not true/false"))),
        };
        queries.push(Query { s, t, labels, expected });
    }
    Ok(Workload { queries })
}
