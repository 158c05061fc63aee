//! Index construction by eager kernel-based search.
//!
//! Vertices are processed in access order. For each vertex `v` a backward
//! search fills `out` lists of vertices reaching `v`, and a forward search
//! fills `in` lists of vertices `v` reaches. Each search has two phases:
//!
//! 1. *Kernel search* enumerates every path of length `1..=k` from `v` and
//!    collects, per minimum repeat of the path label, the set of endpoints.
//! 2. *Kernel BFS* continues from those endpoints along the repeat, tracking
//!    the position inside it, and offers an entry whenever a full repetition
//!    completes.
//!
//! Offers go through [`EntrySink`], so the same traversal also serves the
//! unpruned transitive-closure baseline.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use log::{debug, info};

use crate::error::{Result, RlcError};
use crate::graph::{in_out_order, Graph, VertexId, VertexOrder};
use crate::index::{certifies, IndexEntry, MrDictionary, MrId, RlcIndex};
use crate::labelseq::{minimum_repeat_len, Label, LabelSeq};

/// Which way a search walks edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Along in-edges; discovers vertices that reach the origin.
    Backward,
    /// Along out-edges; discovers vertices the origin reaches.
    Forward,
}

/// Outcome of offering an entry to a sink.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InsertOutcome {
    Accepted,
    Rejected,
}

/// Receives `(origin, reached, repeat)` discoveries. For a backward search
/// `reached ⇝ origin`, for a forward search `origin ⇝ reached`.
pub trait EntrySink {
    fn offer(&mut self, origin: VertexId, reached: VertexId, mr: MrId, dir: Direction) -> InsertOutcome;
}

/// Endpoints found by a kernel search, grouped by minimum repeat.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CandidateMap {
    pub kernels: BTreeMap<MrId, Vec<VertexId>>,
}

impl CandidateMap {
    /// Resolves repeat ids through `dict`.
    pub fn named(&self, dict: &MrDictionary) -> BTreeMap<LabelSeq, BTreeSet<VertexId>> {
        self.kernels.iter().map(|(&mr, vs)| (dict.seq(mr).clone(), vs.iter().copied().collect())).collect()
    }
}

/// Traversal state shared by every search over one graph: the repeat
/// dictionary and a reusable visited table over `(vertex, residual)` states.
pub struct KbsEngine<'g> {
    graph: &'g Graph,
    k: usize,
    dict: MrDictionary,
    stamps: Vec<u32>,
    stamp: u32,
    queue: VecDeque<(VertexId, u32)>,
}

impl<'g> KbsEngine<'g> {
    pub fn new(graph: &'g Graph, k: usize) -> Self {
        KbsEngine {
            graph,
            k,
            dict: MrDictionary::new(),
            stamps: vec![0; graph.num_vertices() * k],
            stamp: 0,
            queue: VecDeque::new(),
        }
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn dictionary(&self) -> &MrDictionary {
        &self.dict
    }

    pub fn into_dictionary(self) -> MrDictionary {
        self.dict
    }

    #[inline]
    fn adjacent(&self, v: VertexId, dir: Direction) -> &'g [(VertexId, Label)] {
        match dir {
            Direction::Backward => self.graph.in_edges(v),
            Direction::Forward => self.graph.out_edges(v),
        }
    }

    fn next_stamp(&mut self) {
        if self.stamp == u32::MAX {
            self.stamps.fill(0);
            self.stamp = 0;
        }
        self.stamp += 1;
    }

    /// Marks `(v, r)` visited; false if it already was.
    #[inline]
    fn mark(&mut self, v: VertexId, r: u32) -> bool {
        let slot = &mut self.stamps[v as usize * self.k + r as usize];
        if *slot == self.stamp {
            false
        } else {
            *slot = self.stamp;
            true
        }
    }

    /// Enumerates paths of length `1..=k` from `origin`, offering each
    /// endpoint under its path's minimum repeat. Offers here never stop the
    /// enumeration.
    pub fn kernel_search<S: EntrySink>(&mut self, sink: &mut S, origin: VertexId, dir: Direction) -> CandidateMap {
        let mut candidates: BTreeMap<MrId, Vec<VertexId>> = BTreeMap::new();
        // labels are kept in path order: prepended backward, appended forward
        let mut level: Vec<(VertexId, Vec<Label>)> = vec![(origin, Vec::new())];
        let mut seen: HashSet<(VertexId, Vec<Label>)> = HashSet::new();
        for depth in 1..=self.k {
            let mut next = Vec::new();
            seen.clear();
            for (x, seq) in &level {
                for &(y, l) in self.adjacent(*x, dir) {
                    let mut extended = Vec::with_capacity(depth);
                    match dir {
                        Direction::Backward => {
                            extended.push(l);
                            extended.extend_from_slice(seq);
                        }
                        Direction::Forward => {
                            extended.extend_from_slice(seq);
                            extended.push(l);
                        }
                    }
                    if !seen.insert((y, extended.clone())) {
                        continue;
                    }
                    let mr = self.dict.intern(&extended[..minimum_repeat_len(&extended)]);
                    sink.offer(origin, y, mr, dir);
                    candidates.entry(mr).or_default().push(y);
                    if depth < self.k {
                        next.push((y, extended));
                    }
                }
            }
            level = next;
        }
        for frontier in candidates.values_mut() {
            frontier.sort_unstable();
            frontier.dedup();
        }
        CandidateMap { kernels: candidates }
    }

    /// Follows `mr` repeatedly from `frontier`, offering every vertex reached
    /// after a whole number of repetitions. A rejected offer stops the
    /// traversal through that vertex.
    pub fn kernel_bfs<S: EntrySink>(
        &mut self,
        sink: &mut S,
        origin: VertexId,
        mr: MrId,
        frontier: &[VertexId],
        dir: Direction,
    ) {
        let kernel: Vec<Label> = self.dict.seq(mr).labels().to_vec();
        let len = kernel.len() as u32;
        self.next_stamp();
        let mut queue = std::mem::take(&mut self.queue);
        queue.clear();
        for &x in frontier {
            if self.mark(x, 0) {
                queue.push_back((x, 0));
            }
        }
        while let Some((x, r)) = queue.pop_front() {
            let needed = match dir {
                Direction::Backward => kernel[(len - 1 - r) as usize],
                Direction::Forward => kernel[r as usize],
            };
            let r2 = (r + 1) % len;
            for &(y, l) in self.adjacent(x, dir) {
                if l != needed || !self.mark(y, r2) {
                    continue;
                }
                if r2 == 0 && sink.offer(origin, y, mr, dir) == InsertOutcome::Rejected {
                    continue;
                }
                queue.push_back((y, r2));
            }
        }
        self.queue = queue;
    }

    /// Kernel search followed by a kernel BFS per discovered repeat.
    pub fn search<S: EntrySink>(&mut self, sink: &mut S, origin: VertexId, dir: Direction) {
        let candidates = self.kernel_search(sink, origin, dir);
        for (mr, frontier) in &candidates.kernels {
            self.kernel_bfs(sink, origin, *mr, frontier, dir);
        }
    }
}

/// The partially built hub lists, acting as the pruning sink.
struct PrunedLists {
    order: VertexOrder,
    l_in: Vec<Vec<IndexEntry>>,
    l_out: Vec<Vec<IndexEntry>>,
    entries: usize,
}

impl PrunedLists {
    fn answers(&self, s: VertexId, t: VertexId, mr: MrId) -> bool {
        certifies(&self.l_out[s as usize], &self.l_in[t as usize], self.order.aid(s), self.order.aid(t), mr)
    }
}

impl EntrySink for PrunedLists {
    fn offer(&mut self, origin: VertexId, reached: VertexId, mr: MrId, dir: Direction) -> InsertOutcome {
        let origin_aid = self.order.aid(origin);
        // a later hub is never recorded at a vertex that was itself a hub earlier
        if origin_aid > self.order.aid(reached) {
            return InsertOutcome::Rejected;
        }
        let (s, t) = match dir {
            Direction::Backward => (reached, origin),
            Direction::Forward => (origin, reached),
        };
        if self.answers(s, t, mr) {
            return InsertOutcome::Rejected;
        }
        let list = match dir {
            Direction::Backward => &mut self.l_out[reached as usize],
            Direction::Forward => &mut self.l_in[reached as usize],
        };
        let entry = IndexEntry { hub: origin_aid, mr };
        if let Err(pos) = list.binary_search(&entry) {
            list.insert(pos, entry);
            self.entries += 1;
        }
        InsertOutcome::Accepted
    }
}

/// Limits applied while building.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuildOptions {
    /// Abort once the index holds more entries than this.
    pub max_entries: Option<usize>,
}

/// Step-wise index construction. [`build_index`] drives it over every vertex;
/// the individual steps are public so that intermediate states can be
/// inspected.
pub struct IndexBuilder<'g> {
    engine: KbsEngine<'g>,
    lists: PrunedLists,
    processed: usize,
}

impl<'g> IndexBuilder<'g> {
    pub fn new(graph: &'g Graph, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(RlcError::InvalidSequence("k must be positive".into()));
        }
        if k > u16::MAX as usize {
            return Err(RlcError::ConfigRejected(format!("k = {k} is too large")));
        }
        let n = graph.num_vertices();
        Ok(IndexBuilder {
            engine: KbsEngine::new(graph, k),
            lists: PrunedLists {
                order: in_out_order(graph),
                l_in: vec![Vec::new(); n],
                l_out: vec![Vec::new(); n],
                entries: 0,
            },
            processed: 0,
        })
    }

    pub fn order(&self) -> &VertexOrder {
        &self.lists.order
    }

    pub fn dictionary(&self) -> &MrDictionary {
        self.engine.dictionary()
    }

    /// Number of vertices processed so far.
    pub fn processed(&self) -> usize {
        self.processed
    }

    pub fn entry_count(&self) -> usize {
        self.lists.entries
    }

    pub fn entries(&self, side: crate::index::Side, v: VertexId) -> &[IndexEntry] {
        match side {
            crate::index::Side::In => &self.lists.l_in[v as usize],
            crate::index::Side::Out => &self.lists.l_out[v as usize],
        }
    }

    /// Answers `(s, t, L+)` from the entries inserted so far.
    pub fn snapshot_query(&self, s: VertexId, t: VertexId, constraint: &LabelSeq) -> bool {
        match self.engine.dictionary().get(constraint) {
            Some(mr) => self.lists.answers(s, t, mr),
            None => false,
        }
    }

    /// Offers `(origin, L)` for the list of `reached`: the out-list for a
    /// backward search, the in-list for a forward one. `constraint` must be
    /// primitive and no longer than `k`.
    pub fn try_insert(
        &mut self,
        reached: VertexId,
        origin: VertexId,
        constraint: &LabelSeq,
        dir: Direction,
    ) -> Result<InsertOutcome> {
        if constraint.is_empty() || constraint.len() > self.engine.k || !constraint.is_primitive()? {
            return Err(RlcError::InvalidSequence(format!(
                "{constraint} is not a primitive sequence of length 1..={}",
                self.engine.k
            )));
        }
        let mr = self.engine.dict.intern(constraint.labels());
        Ok(self.lists.offer(origin, reached, mr, dir))
    }

    pub fn kernel_search(&mut self, origin: VertexId, dir: Direction) -> CandidateMap {
        self.engine.kernel_search(&mut self.lists, origin, dir)
    }

    pub fn kernel_bfs(&mut self, origin: VertexId, mr: MrId, frontier: &[VertexId], dir: Direction) {
        self.engine.kernel_bfs(&mut self.lists, origin, mr, frontier, dir)
    }

    /// Runs the backward then forward search from the next vertex in access
    /// order. Returns that vertex, or `None` once all are done.
    pub fn step(&mut self) -> Option<VertexId> {
        if self.processed >= self.lists.order.len() {
            return None;
        }
        let v = self.lists.order.vertex_at(self.processed as u32);
        self.engine.search(&mut self.lists, v, Direction::Backward);
        self.engine.search(&mut self.lists, v, Direction::Forward);
        self.processed += 1;
        Some(v)
    }

    pub fn finish(self) -> RlcIndex {
        let graph = self.engine.graph();
        let k = self.engine.k();
        let mut index = RlcIndex::empty(graph, k, self.lists.order);
        index.dict = self.engine.into_dictionary();
        index.l_in = self.lists.l_in;
        index.l_out = self.lists.l_out;
        index
    }
}

/// Builds the index with recursion bound `k`.
pub fn build_index(g: &Graph, k: usize) -> Result<RlcIndex> {
    build_index_with(g, k, &BuildOptions::default())
}

pub fn build_index_with(g: &Graph, k: usize, options: &BuildOptions) -> Result<RlcIndex> {
    let mut builder = IndexBuilder::new(g, k)?;
    let total = g.num_vertices();
    let report_every = (total / 10).max(1);
    info!("building index: {} vertices, {} edges, k = {k}", total, g.num_edges());
    while builder.step().is_some() {
        let done = builder.processed();
        if let Some(limit) = options.max_entries {
            if builder.entry_count() > limit {
                return Err(RlcError::IndexBuildFailure {
                    processed: done,
                    total,
                    entries: builder.entry_count(),
                    reason: format!("entry budget of {limit} exceeded"),
                });
            }
        }
        if done % report_every == 0 {
            debug!("processed {done}/{total} vertices, {} entries", builder.entry_count());
        }
    }
    info!("index built: {} entries", builder.entry_count());
    Ok(builder.finish())
}
