use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

use crate::baselines::{build_etc, primitive_sequences, EtcIndex, ProductSearch};
use crate::builder::build_index;
use crate::error::{Result, RlcError};
use crate::graph::{generate_er, Graph, VertexId};
use crate::index::RlcIndex;
use crate::labelseq::LabelSeq;
use crate::par::{self, ExecMode};

/// Largest graph accepted by [`verify_equivalence`].
pub const MAX_VERIFY_VERTICES: usize = 64;
/// Largest `|labels|^k` accepted by [`verify_equivalence`].
pub const MAX_VERIFY_WORDS: u128 = 10_000;

/// Random small ER graphs on which the index is compared against exhaustive
/// search. Ranges are inclusive.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyParams {
    pub graphs: usize,
    pub vertices: (usize, usize),
    pub avg_degree: (f64, f64),
    pub labels: (usize, usize),
    /// Each graph uses one of these, picked uniformly.
    pub k_values: Vec<usize>,
    pub zipf: f64,
    pub seed: u64,
    pub mode: ExecMode,
}

impl Default for VerifyParams {
    fn default() -> Self {
        VerifyParams {
            graphs: 200,
            vertices: (5, 50),
            avg_degree: (1.0, 6.0),
            labels: (2, 4),
            k_values: vec![1, 2, 3],
            zipf: 1.0,
            seed: 0,
            mode: ExecMode::default(),
        }
    }
}

/// A triple on which the evaluators disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub s: VertexId,
    pub t: VertexId,
    pub labels: LabelSeq,
    pub index: bool,
    /// `None` when no closure was supplied.
    pub etc: Option<bool>,
    pub nfa: bool,
    pub bibfs: bool,
}

/// Result of checking one index against its graph.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GraphCheck {
    pub vertices: usize,
    pub edges: usize,
    pub labels: usize,
    pub k: usize,
    /// Generator inputs, so the graph can be rebuilt with `generate_er`.
    pub avg_degree: f64,
    pub seed: u64,
    pub entries: usize,
    pub queries: u64,
    pub mismatches: Vec<Mismatch>,
    pub condensed_violations: usize,
}

impl GraphCheck {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && self.condensed_violations == 0
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerifyReport {
    pub graphs: Vec<GraphCheck>,
}

impl VerifyReport {
    pub fn queries(&self) -> u64 {
        self.graphs.iter().map(|g| g.queries).sum()
    }

    pub fn mismatches(&self) -> usize {
        self.graphs.iter().map(|g| g.mismatches.len()).sum()
    }

    pub fn condensed_violations(&self) -> usize {
        self.graphs.iter().map(|g| g.condensed_violations).sum()
    }

    pub fn passed(&self) -> bool {
        self.graphs.iter().all(GraphCheck::passed)
    }
}

/// Compares `index` (and `etc`, when given) with forward and bidirectional
/// product-graph search for every vertex pair and every primitive constraint
/// of length `1..=k`, then scans the index for redundant entries.
///
/// The forward search runs once per source and constraint, collecting every
/// target at once; the bidirectional search runs per triple.
pub fn check_index(g: &Graph, index: &RlcIndex, etc: Option<&EtcIndex>) -> Result<GraphCheck> {
    let n = g.num_vertices();
    let mut forward = ProductSearch::new(g);
    let mut bidir = ProductSearch::new(g);
    let mut check = GraphCheck {
        vertices: n,
        edges: g.num_edges(),
        labels: g.num_labels(),
        k: index.k(),
        entries: index.stats().entries,
        ..GraphCheck::default()
    };
    let mut nfa = vec![false; n];
    for labels in primitive_sequences(g.num_labels(), index.k())? {
        let mr = index.resolve_constraint(&labels)?;
        for s in 0..n as VertexId {
            nfa.fill(false);
            for t in forward.reach_set(s, labels.labels()) {
                nfa[t as usize] = true;
            }
            for t in 0..n as VertexId {
                let answer = mr.is_some_and(|mr| index.query_mr(s, t, mr));
                let etc_answer = etc.map(|e| e.query(s, t, &labels)).transpose()?;
                let bibfs = bidir.bibfs(s, t, labels.labels(), None).unwrap_or(false);
                let expected = nfa[t as usize];
                check.queries += 1;
                if answer != expected || bibfs != expected || etc_answer.is_some_and(|e| e != expected) {
                    check.mismatches.push(Mismatch {
                        s,
                        t,
                        labels: labels.clone(),
                        index: answer,
                        etc: etc_answer,
                        nfa: expected,
                        bibfs,
                    });
                }
            }
        }
    }
    check.condensed_violations = index.condensed_violations().len();
    Ok(check)
}

fn validate(params: &VerifyParams) -> Result<()> {
    let reject = |m: String| Err(RlcError::ConfigRejected(m));
    let (n_lo, n_hi) = params.vertices;
    let (l_lo, l_hi) = params.labels;
    let (d_lo, d_hi) = params.avg_degree;
    if n_lo == 0 || n_lo > n_hi {
        return reject(format!("bad vertex range {n_lo}..={n_hi}"));
    }
    if n_hi > MAX_VERIFY_VERTICES {
        return reject(format!("graphs larger than {MAX_VERIFY_VERTICES} vertices are not verified exhaustively"));
    }
    if l_lo == 0 || l_lo > l_hi {
        return reject(format!("bad label range {l_lo}..={l_hi}"));
    }
    if !(d_lo.is_finite() && d_hi.is_finite() && 0.0 <= d_lo && d_lo <= d_hi) {
        return reject(format!("bad degree range {d_lo}..={d_hi}"));
    }
    if params.k_values.is_empty() || params.k_values.contains(&0) {
        return reject("k values must be nonempty and positive".into());
    }
    let k_max = *params.k_values.iter().max().unwrap() as u32;
    let words = (l_hi as u128).checked_pow(k_max).unwrap_or(u128::MAX);
    if words > MAX_VERIFY_WORDS {
        return reject(format!("{l_hi}^{k_max} = {words} constraints per pair exceeds {MAX_VERIFY_WORDS}"));
    }
    Ok(())
}

/// Generates `params.graphs` random graphs, builds an index and a closure on
/// each and checks both with [`check_index`]. Graphs are processed in parallel; the
/// per-graph parameters are drawn up front, so results are reproducible.
pub fn verify_equivalence(params: &VerifyParams) -> Result<VerifyReport> {
    validate(params)?;
    let mut rng = Xoshiro256StarStar::seed_from_u64(params.seed);
    let plans: Vec<(usize, f64, usize, usize, u64)> = (0..params.graphs)
        .map(|_| {
            let n = rng.random_range(params.vertices.0..=params.vertices.1);
            let d = if params.avg_degree.0 < params.avg_degree.1 {
                rng.random_range(params.avg_degree.0..=params.avg_degree.1)
            } else {
                params.avg_degree.0
            };
            let labels = rng.random_range(params.labels.0..=params.labels.1);
            let k = params.k_values[rng.random_range(0..params.k_values.len())];
            (n, d, labels, k, rng.random())
        })
        .collect();

    let results = par::map_slice(params.mode, &plans, |&(n, d, labels, k, seed)| {
        // keep the edge count feasible for tiny graphs with few labels
        let d = d.min((n * labels) as f64);
        let g = generate_er(n, d, labels, params.zipf, seed)?;
        let index = build_index(&g, k)?;
        let etc = build_etc(&g, k)?;
        let mut check = check_index(&g, &index, Some(&etc))?;
        check.avg_degree = d;
        check.seed = seed;
        Ok(check)
    });
    let graphs = results.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(VerifyReport { graphs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::Side;
    use crate::sample_graphs;

    #[test]
    fn samples_check_clean() {
        for g in [sample_graphs::six_vertex(), sample_graphs::social_network()] {
            for k in 1..=3 {
                let idx = build_index(&g, k).unwrap();
                let etc = build_etc(&g, k).unwrap();
                let check = check_index(&g, &idx, Some(&etc)).unwrap();
                assert!(check.passed(), "k = {k}: {:?}", check.mismatches);
            }
        }
    }

    #[test]
    fn missing_entry_is_noticed() {
        let g = sample_graphs::six_vertex();
        let mut idx = build_index(&g, 2).unwrap();
        idx.remove_entry(Side::In, g.vertex_id("v6").unwrap(), 0).unwrap();
        let check = check_index(&g, &idx, None).unwrap();
        assert!(!check.mismatches.is_empty());
        assert!(check.mismatches.iter().all(|m| m.nfa && m.bibfs && !m.index));
    }

    #[test]
    fn small_random_run() {
        let params = VerifyParams { graphs: 12, vertices: (5, 15), ..VerifyParams::default() };
        let report = verify_equivalence(&params).unwrap();
        assert_eq!(report.graphs.len(), 12);
        assert!(report.passed());
        assert!(report.queries() > 0);
    }

    #[test]
    fn modes_agree() {
        let base = VerifyParams { graphs: 6, vertices: (5, 12), seed: 9, ..VerifyParams::default() };
        let seq = verify_equivalence(&VerifyParams { mode: ExecMode::Sequential, ..base.clone() }).unwrap();
        let par = verify_equivalence(&VerifyParams { mode: ExecMode::Parallel, ..base }).unwrap();
        assert_eq!(seq, par);
    }

    #[test]
    fn single_vertex_graphs() {
        let params = VerifyParams { graphs: 5, vertices: (1, 1), ..VerifyParams::default() };
        let report = verify_equivalence(&params).unwrap();
        assert!(report.passed());
        assert!(report.graphs.iter().all(|g| g.vertices == 1));
    }

    #[test]
    fn oversized_configs_rejected() {
        let too_big = VerifyParams { vertices: (5, 100), ..VerifyParams::default() };
        assert!(matches!(verify_equivalence(&too_big), Err(RlcError::ConfigRejected(_))));
        let too_many_words = VerifyParams { labels: (2, 30), ..VerifyParams::default() };
        assert!(matches!(verify_equivalence(&too_many_words), Err(RlcError::ConfigRejected(_))));
        let no_k = VerifyParams { k_values: vec![], ..VerifyParams::default() };
        assert!(matches!(verify_equivalence(&no_k), Err(RlcError::ConfigRejected(_))));
    }
}
