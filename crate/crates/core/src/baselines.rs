//! Index-free evaluators and the exhaustive reference answers.
//!
//! * [`ProductSearch`] runs BFS over the product of the graph with the cyclic
//!   automaton of `L+`, either one-directional or bidirectional.
//! * [`EtcIndex`] stores every `(s, t, repeat)` triple, found with the same
//!   kernel-based traversal as the RLC index but without pruning.
//! * [`oracle_concise_set`] enumerates every candidate constraint.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::builder::{BuildOptions, Direction, EntrySink, InsertOutcome, KbsEngine};
use crate::error::{Result, RlcError};
use crate::graph::{Graph, VertexId};
use crate::index::{MrDictionary, MrId};
use crate::labelseq::{primitive_count, Label, LabelSeq};

/// Enumeration limit for [`oracle_concise_set`] and [`primitive_sequences`].
pub const CANDIDATE_GUARD: u128 = 1_000_000;

fn check_query(g: &Graph, s: VertexId, t: VertexId, constraint: &LabelSeq) -> Result<()> {
    g.check_vertex(s)?;
    g.check_vertex(t)?;
    if constraint.is_empty() {
        return Err(RlcError::InvalidSequence("empty constraint".into()));
    }
    g.check_labels(constraint)?;
    if !constraint.is_primitive()? {
        return Err(RlcError::NonPrimitiveConstraint);
    }
    Ok(())
}

/// Visited marks over `(vertex, position)` product states, reset in O(1)
/// between searches.
#[derive(Debug, Default)]
struct StateTable {
    stamps: Vec<u32>,
    kinds: Vec<u8>,
    stamp: u32,
    width: usize,
}

impl StateTable {
    fn reset(&mut self, n: usize, width: usize) {
        let size = n * width;
        if self.stamps.len() < size {
            self.stamps.resize(size, 0);
            self.kinds.resize(size, 0);
        }
        if self.stamp == u32::MAX {
            self.stamps.fill(0);
            self.stamp = 0;
        }
        self.stamp += 1;
        self.width = width;
    }

    #[inline]
    fn kind(&self, v: VertexId, p: u32) -> u8 {
        let i = v as usize * self.width + p as usize;
        if self.stamps[i] == self.stamp {
            self.kinds[i]
        } else {
            0
        }
    }

    #[inline]
    fn set(&mut self, v: VertexId, p: u32, kind: u8) {
        let i = v as usize * self.width + p as usize;
        self.stamps[i] = self.stamp;
        self.kinds[i] = kind;
    }
}

// State kinds for the bidirectional search.
const UNSEEN: u8 = 0;
const EMPTY_PATH: u8 = 1;
const NONEMPTY: u8 = 2;

/// Reusable scratch space for product-graph searches on one graph.
#[derive(Debug)]
pub struct ProductSearch<'g> {
    graph: &'g Graph,
    fwd: StateTable,
    bwd: StateTable,
    queue: VecDeque<(VertexId, u32)>,
    /// Product states expanded by the most recent search.
    pub expanded: u64,
}

impl<'g> ProductSearch<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        ProductSearch {
            graph,
            fwd: StateTable::default(),
            bwd: StateTable::default(),
            queue: VecDeque::new(),
            expanded: 0,
        }
    }

    /// Forward BFS from `(s, 0)`; true once `(t, 0)` is produced by a step.
    /// Inputs are not validated.
    pub fn nfa_bfs(&mut self, s: VertexId, t: VertexId, constraint: &[Label]) -> bool {
        let m = constraint.len() as u32;
        let g = self.graph;
        self.fwd.reset(g.num_vertices(), m as usize);
        self.expanded = 0;
        self.queue.clear();
        self.fwd.set(s, 0, NONEMPTY);
        self.queue.push_back((s, 0));
        while let Some((x, p)) = self.queue.pop_front() {
            self.expanded += 1;
            let want = constraint[p as usize];
            let p2 = (p + 1) % m;
            for &(y, l) in g.out_edges(x) {
                if l != want {
                    continue;
                }
                if p2 == 0 && y == t {
                    return true;
                }
                if self.fwd.kind(y, p2) == UNSEEN {
                    self.fwd.set(y, p2, NONEMPTY);
                    self.queue.push_back((y, p2));
                }
            }
        }
        false
    }

    /// Every `t` with `s ⇝ t` under `constraint+`, sorted.
    pub fn reach_set(&mut self, s: VertexId, constraint: &[Label]) -> Vec<VertexId> {
        let m = constraint.len() as u32;
        let g = self.graph;
        self.fwd.reset(g.num_vertices(), m as usize);
        self.expanded = 0;
        self.queue.clear();
        self.queue.push_back((s, 0));
        let mut reached = Vec::new();
        // the start state is only recorded once a nonempty path returns to it
        while let Some((x, p)) = self.queue.pop_front() {
            self.expanded += 1;
            let want = constraint[p as usize];
            let p2 = (p + 1) % m;
            for &(y, l) in g.out_edges(x) {
                if l == want && self.fwd.kind(y, p2) == UNSEEN {
                    self.fwd.set(y, p2, NONEMPTY);
                    if p2 == 0 {
                        reached.push(y);
                    }
                    self.queue.push_back((y, p2));
                }
            }
        }
        reached.sort_unstable();
        reached
    }

    /// Bidirectional BFS that always expands the smaller frontier. Returns
    /// `None` if more than `cap` states would be expanded.
    pub fn bibfs(&mut self, s: VertexId, t: VertexId, constraint: &[Label], cap: Option<u64>) -> Option<bool> {
        let m = constraint.len() as u32;
        let g = self.graph;
        let n = g.num_vertices();
        self.fwd.reset(n, m as usize);
        self.bwd.reset(n, m as usize);
        self.expanded = 0;

        // a forward state (v, pf) and backward state (v, pb) join into a path
        // spelling L^h when pf + pb ≡ 0 (mod m) and the path is nonempty
        let meets = |other: &StateTable, v: VertexId, p: u32, kind: u8| {
            let partner = other.kind(v, (m - p) % m);
            partner != UNSEEN && (kind == NONEMPTY || partner == NONEMPTY)
        };

        self.fwd.set(s, 0, EMPTY_PATH);
        self.bwd.set(t, 0, EMPTY_PATH);
        let mut fwd_frontier = vec![(s, 0u32)];
        let mut bwd_frontier = vec![(t, 0u32)];
        let mut next = Vec::new();

        while !fwd_frontier.is_empty() && !bwd_frontier.is_empty() {
            let forward = fwd_frontier.len() <= bwd_frontier.len();
            let (frontier, this, other) = if forward {
                (&mut fwd_frontier, &mut self.fwd, &self.bwd)
            } else {
                (&mut bwd_frontier, &mut self.bwd, &self.fwd)
            };
            next.clear();
            for &(x, p) in frontier.iter() {
                self.expanded += 1;
                if cap.is_some_and(|c| self.expanded > c) {
                    return None;
                }
                let p2 = (p + 1) % m;
                let (edges, want) = if forward {
                    (g.out_edges(x), constraint[p as usize])
                } else {
                    (g.in_edges(x), constraint[(m - 1 - p) as usize])
                };
                for &(y, l) in edges {
                    if l != want {
                        continue;
                    }
                    match this.kind(y, p2) {
                        UNSEEN => {
                            this.set(y, p2, NONEMPTY);
                            next.push((y, p2));
                        }
                        EMPTY_PATH => {
                            // the start state is already queued or expanded;
                            // only its kind changes
                            this.set(y, p2, NONEMPTY);
                        }
                        _ => continue,
                    }
                    if meets(other, y, p2, NONEMPTY) {
                        return Some(true);
                    }
                }
            }
            std::mem::swap(frontier, &mut next);
        }
        Some(false)
    }
}

/// Validated single query by forward product BFS.
pub fn nfa_bfs(g: &Graph, s: VertexId, t: VertexId, constraint: &LabelSeq) -> Result<bool> {
    check_query(g, s, t, constraint)?;
    Ok(ProductSearch::new(g).nfa_bfs(s, t, constraint.labels()))
}

/// Like [`nfa_bfs`], also returning the number of expanded product states.
pub fn nfa_bfs_counted(g: &Graph, s: VertexId, t: VertexId, constraint: &LabelSeq) -> Result<(bool, u64)> {
    check_query(g, s, t, constraint)?;
    let mut search = ProductSearch::new(g);
    let answer = search.nfa_bfs(s, t, constraint.labels());
    Ok((answer, search.expanded))
}

/// Validated single query by bidirectional product BFS.
pub fn bibfs(g: &Graph, s: VertexId, t: VertexId, constraint: &LabelSeq) -> Result<bool> {
    check_query(g, s, t, constraint)?;
    Ok(ProductSearch::new(g).bibfs(s, t, constraint.labels(), None).expect("uncapped search always finishes"))
}

/// [`bibfs`] with a limit on expanded states; `Ok(None)` when it is hit.
pub fn bibfs_capped(g: &Graph, s: VertexId, t: VertexId, constraint: &LabelSeq, cap: u64) -> Result<Option<bool>> {
    check_query(g, s, t, constraint)?;
    Ok(ProductSearch::new(g).bibfs(s, t, constraint.labels(), Some(cap)))
}

/// All primitive sequences of length `1..=k` over `alphabet` labels, ordered
/// by length, then lexicographically.
pub fn primitive_sequences(alphabet: usize, k: usize) -> Result<Vec<LabelSeq>> {
    if alphabet == 0 {
        return Ok(Vec::new());
    }
    let count = primitive_count(alphabet as u64, k as u32)?;
    if count > CANDIDATE_GUARD {
        return Err(RlcError::CandidateSpaceTooLarge(count));
    }
    let mut out = Vec::with_capacity(count as usize);
    for len in 1..=k {
        let words = alphabet.pow(len as u32);
        for mut code in 0..words {
            let mut ids = vec![0u32; len];
            for slot in ids.iter_mut().rev() {
                *slot = (code % alphabet) as u32;
                code /= alphabet;
            }
            let seq = LabelSeq::from_ids(ids);
            if seq.is_primitive()? {
                out.push(seq);
            }
        }
    }
    Ok(out)
}

/// Reference concise set: every primitive `L` with `|L| ≤ k` such that
/// `s ⇝ t` under `L+`, by exhaustive enumeration.
pub fn oracle_concise_set(g: &Graph, s: VertexId, t: VertexId, k: usize) -> Result<BTreeSet<LabelSeq>> {
    g.check_vertex(s)?;
    g.check_vertex(t)?;
    if k == 0 {
        return Err(RlcError::InvalidSequence("k must be positive".into()));
    }
    let mut search = ProductSearch::new(g);
    Ok(primitive_sequences(g.num_labels(), k)?.into_iter().filter(|l| search.nfa_bfs(s, t, l.labels())).collect())
}

/// Unpruned sink: records every discovered triple.
#[derive(Default)]
struct ClosureSink {
    pairs: HashMap<(VertexId, VertexId), Vec<MrId>>,
    entries: usize,
}

impl EntrySink for ClosureSink {
    fn offer(&mut self, origin: VertexId, reached: VertexId, mr: MrId, _dir: Direction) -> InsertOutcome {
        let list = self.pairs.entry((origin, reached)).or_default();
        if let Err(pos) = list.binary_search(&mr) {
            list.insert(pos, mr);
            self.entries += 1;
        }
        InsertOutcome::Accepted
    }
}

/// Extended transitive closure: for each ordered pair, the sorted repeats
/// under which it is connected.
#[derive(Debug, Clone)]
pub struct EtcIndex {
    k: usize,
    num_vertices: usize,
    num_labels: usize,
    dict: MrDictionary,
    pairs: HashMap<(VertexId, VertexId), Vec<MrId>>,
    entries: usize,
}

/// Builds the closure with forward searches from every vertex.
pub fn build_etc(g: &Graph, k: usize) -> Result<EtcIndex> {
    build_etc_with(g, k, &BuildOptions::default())
}

/// [`build_etc`] under an entry budget, which stands in for running out of
/// memory on large graphs.
pub fn build_etc_with(g: &Graph, k: usize, options: &BuildOptions) -> Result<EtcIndex> {
    if k == 0 {
        return Err(RlcError::InvalidSequence("k must be positive".into()));
    }
    let mut engine = KbsEngine::new(g, k);
    let mut sink = ClosureSink::default();
    let total = g.num_vertices();
    for v in 0..total as VertexId {
        engine.search(&mut sink, v, Direction::Forward);
        if let Some(limit) = options.max_entries.filter(|&limit| sink.entries > limit) {
            return Err(RlcError::IndexBuildFailure {
                processed: v as usize + 1,
                total,
                entries: sink.entries,
                reason: format!("entry budget of {limit} exceeded"),
            });
        }
    }
    Ok(EtcIndex {
        k,
        num_vertices: g.num_vertices(),
        num_labels: g.num_labels(),
        dict: engine.into_dictionary(),
        pairs: sink.pairs,
        entries: sink.entries,
    })
}

impl EtcIndex {
    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of `(s, t, repeat)` triples.
    pub fn num_entries(&self) -> usize {
        self.entries
    }

    pub fn num_pairs(&self) -> usize {
        self.pairs.len()
    }

    pub fn query(&self, s: VertexId, t: VertexId, constraint: &LabelSeq) -> Result<bool> {
        for v in [s, t] {
            if v as usize >= self.num_vertices {
                return Err(RlcError::NotFound(format!("vertex #{v}")));
            }
        }
        if constraint.is_empty() {
            return Err(RlcError::InvalidSequence("empty constraint".into()));
        }
        if let Some(l) = constraint.labels().iter().find(|l| l.index() >= self.num_labels) {
            return Err(RlcError::NotFound(format!("label #{}", l.0)));
        }
        if constraint.len() > self.k {
            return Err(RlcError::UnsupportedConstraint { len: constraint.len(), k: self.k });
        }
        if !constraint.is_primitive()? {
            return Err(RlcError::NonPrimitiveConstraint);
        }
        let Some(mr) = self.dict.get(constraint) else {
            return Ok(false);
        };
        Ok(self.pairs.get(&(s, t)).is_some_and(|mrs| mrs.binary_search(&mr).is_ok()))
    }

    /// Concise set of one pair.
    pub fn concise_set(&self, s: VertexId, t: VertexId) -> BTreeSet<LabelSeq> {
        self.pairs.get(&(s, t)).map(|mrs| mrs.iter().map(|&m| self.dict.seq(m).clone()).collect()).unwrap_or_default()
    }
}
