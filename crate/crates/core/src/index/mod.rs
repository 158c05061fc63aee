//! The RLC index: per-vertex in/out hub lists over `(hub, minimum repeat)`.
//!
//! `s` reaches `t` under `L+` iff either list certifies it directly
//! (`(t, L) ∈ out(s)` or `(s, L) ∈ in(t)`) or some hub `x` appears with the
//! same `L` in both `out(s)` and `in(t)`. Entries of different minimum
//! repeats are never combined at the hub.

mod codec;

use std::collections::{BTreeSet, HashMap};

use crate::error::{Result, RlcError};
use crate::graph::{self, Interner, VertexId, VertexOrder};
use crate::labelseq::{Label, LabelSeq};
use crate::par::{self, ExecMode};

pub use codec::{FORMAT_VERSION, MAGIC};

/// Dense id of an interned minimum repeat.
pub type MrId = u32;

/// Primitive label sequences of length `1..=k`, interned in first-seen order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MrDictionary {
    seqs: Vec<LabelSeq>,
    ids: HashMap<LabelSeq, MrId>,
}

impl MrDictionary {
    pub fn new() -> Self {
        Self::default()
    }

    /// Interns a sequence the caller guarantees to be primitive.
    pub fn intern(&mut self, seq: &[Label]) -> MrId {
        debug_assert!(!seq.is_empty() && crate::labelseq::minimum_repeat_len(seq) == seq.len());
        if let Some(&id) = self.ids.get(seq) {
            return id;
        }
        let key = LabelSeq::from(seq);
        let id = self.seqs.len() as MrId;
        self.seqs.push(key.clone());
        self.ids.insert(key, id);
        id
    }

    pub fn get(&self, seq: &LabelSeq) -> Option<MrId> {
        self.ids.get(seq).copied()
    }

    pub fn seq(&self, id: MrId) -> &LabelSeq {
        &self.seqs[id as usize]
    }

    pub fn len(&self) -> usize {
        self.seqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seqs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (MrId, &LabelSeq)> {
        self.seqs.iter().enumerate().map(|(i, s)| (i as MrId, s))
    }
}

/// One hub entry. `hub` is the hub's access id, so lists sort by visit order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexEntry {
    pub hub: u32,
    pub mr: MrId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    In,
    Out,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IndexStats {
    pub entries: usize,
    pub in_entries: usize,
    pub out_entries: usize,
    pub dictionary: usize,
    pub bytes: usize,
}

/// An entry that is redundant given a hub pair carrying the same repeat.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CondensedViolation {
    pub vertex: VertexId,
    pub side: Side,
    pub entry: IndexEntry,
    pub via_hub: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RlcIndex {
    pub(crate) k: usize,
    pub(crate) order: VertexOrder,
    pub(crate) dict: MrDictionary,
    pub(crate) labels: Interner,
    pub(crate) vertices: Interner,
    pub(crate) l_in: Vec<Vec<IndexEntry>>,
    pub(crate) l_out: Vec<Vec<IndexEntry>>,
}

/// Answers `(s, t, mr)` from `out(s)` and `in(t)` alone: a direct entry on
/// either side, or a hub shared with the same repeat.
#[inline]
pub(crate) fn certifies(out: &[IndexEntry], inn: &[IndexEntry], s_aid: u32, t_aid: u32, mr: MrId) -> bool {
    out.binary_search(&IndexEntry { hub: t_aid, mr }).is_ok()
        || inn.binary_search(&IndexEntry { hub: s_aid, mr }).is_ok()
        || joins_on(out, inn, mr)
}

/// Any hub present with `mr` in both sorted lists.
fn joins_on(out: &[IndexEntry], inn: &[IndexEntry], mr: MrId) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < out.len() && j < inn.len() {
        match out[i].cmp(&inn[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                if out[i].mr == mr {
                    return true;
                }
                i += 1;
                j += 1;
            }
        }
    }
    false
}

impl RlcIndex {
    pub(crate) fn empty(g: &graph::Graph, k: usize, order: VertexOrder) -> Self {
        let n = g.num_vertices();
        RlcIndex {
            k,
            order,
            dict: MrDictionary::new(),
            labels: g.label_table().clone(),
            vertices: g.vertex_table().clone(),
            l_in: vec![Vec::new(); n],
            l_out: vec![Vec::new(); n],
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn num_vertices(&self) -> usize {
        self.l_in.len()
    }

    pub fn order(&self) -> &VertexOrder {
        &self.order
    }

    pub fn dictionary(&self) -> &MrDictionary {
        &self.dict
    }

    pub fn label_table(&self) -> &Interner {
        &self.labels
    }

    pub fn vertex_table(&self) -> &Interner {
        &self.vertices
    }

    pub fn entries(&self, side: Side, v: VertexId) -> &[IndexEntry] {
        match side {
            Side::In => &self.l_in[v as usize],
            Side::Out => &self.l_out[v as usize],
        }
    }

    /// The vertex an entry's hub refers to.
    pub fn hub_vertex(&self, entry: IndexEntry) -> VertexId {
        self.order.vertex_at(entry.hub)
    }

    pub fn vertex_id(&self, name: &str) -> Result<VertexId> {
        self.vertices.get(name).ok_or_else(|| RlcError::NotFound(format!("vertex `{name}`")))
    }

    pub fn parse_labels(&self, text: &str) -> Result<LabelSeq> {
        graph::parse_labels(&self.labels, text)
    }

    pub fn format_labels(&self, seq: &LabelSeq) -> String {
        graph::format_labels(&self.labels, seq)
    }

    fn check_vertex(&self, v: VertexId) -> Result<()> {
        if (v as usize) < self.num_vertices() {
            Ok(())
        } else {
            Err(RlcError::NotFound(format!("vertex #{v}")))
        }
    }

    /// Validates a constraint and resolves it to a dictionary id. `Ok(None)`
    /// means the constraint is well formed but no entry carries it.
    pub fn resolve_constraint(&self, constraint: &LabelSeq) -> Result<Option<MrId>> {
        if constraint.is_empty() {
            return Err(RlcError::InvalidSequence("empty constraint".into()));
        }
        if let Some(l) = constraint.labels().iter().find(|l| l.index() >= self.labels.len()) {
            return Err(RlcError::NotFound(format!("label #{}", l.0)));
        }
        if constraint.len() > self.k {
            return Err(RlcError::UnsupportedConstraint { len: constraint.len(), k: self.k });
        }
        if !constraint.is_primitive()? {
            return Err(RlcError::NonPrimitiveConstraint);
        }
        Ok(self.dict.get(constraint))
    }

    /// Does some path from `s` to `t` spell `constraint^h`, `h ≥ 1`?
    pub fn query(&self, s: VertexId, t: VertexId, constraint: &LabelSeq) -> Result<bool> {
        self.check_vertex(s)?;
        self.check_vertex(t)?;
        Ok(match self.resolve_constraint(constraint)? {
            Some(mr) => self.query_mr(s, t, mr),
            None => false,
        })
    }

    /// Kleene-star variant: the empty path counts when `s == t`.
    pub fn query_star(&self, s: VertexId, t: VertexId, constraint: &LabelSeq) -> Result<bool> {
        let plus = self.query(s, t, constraint)?;
        Ok(s == t || plus)
    }

    /// Query by external vertex names and a whitespace-separated label list.
    pub fn query_named(&self, s: &str, t: &str, labels: &str) -> Result<bool> {
        let s = self.vertex_id(s)?;
        let t = self.vertex_id(t)?;
        let constraint = self.parse_labels(labels)?;
        self.query(s, t, &constraint)
    }

    /// Unchecked query over a resolved repeat id.
    #[inline]
    pub fn query_mr(&self, s: VertexId, t: VertexId, mr: MrId) -> bool {
        certifies(&self.l_out[s as usize], &self.l_in[t as usize], self.order.aid(s), self.order.aid(t), mr)
    }

    /// Evaluates many queries, optionally across threads.
    pub fn query_batch(&self, queries: &[(VertexId, VertexId, LabelSeq)], mode: ExecMode) -> Vec<Result<bool>> {
        par::map_slice(mode, queries, |(s, t, l)| self.query(*s, *t, l))
    }

    /// Every primitive `L` (`|L| ≤ k`) with `s` reaching `t` under `L+`.
    pub fn concise_set(&self, s: VertexId, t: VertexId) -> Result<BTreeSet<LabelSeq>> {
        self.check_vertex(s)?;
        self.check_vertex(t)?;
        let out = &self.l_out[s as usize];
        let inn = &self.l_in[t as usize];
        let (s_aid, t_aid) = (self.order.aid(s), self.order.aid(t));
        let mut mrs: BTreeSet<MrId> =
            out.iter().filter(|e| e.hub == t_aid).chain(inn.iter().filter(|e| e.hub == s_aid)).map(|e| e.mr).collect();
        let (mut i, mut j) = (0, 0);
        while i < out.len() && j < inn.len() {
            match out[i].cmp(&inn[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    mrs.insert(out[i].mr);
                    i += 1;
                    j += 1;
                }
            }
        }
        Ok(mrs.into_iter().map(|m| self.dict.seq(m).clone()).collect())
    }

    pub fn stats(&self) -> IndexStats {
        let in_entries: usize = self.l_in.iter().map(Vec::len).sum();
        let out_entries: usize = self.l_out.iter().map(Vec::len).sum();
        IndexStats {
            entries: in_entries + out_entries,
            in_entries,
            out_entries,
            dictionary: self.dict.len(),
            bytes: self.serialized_len(),
        }
    }

    /// Entries made redundant by a hub pair with the same repeat. Empty for a
    /// condensed index. The entry under test is never its own witness.
    pub fn condensed_violations(&self) -> Vec<CondensedViolation> {
        let mut found = Vec::new();
        for s in 0..self.num_vertices() as VertexId {
            for &entry in &self.l_out[s as usize] {
                let t = self.order.vertex_at(entry.hub);
                if let Some(via_hub) = self.shared_hub(s, t, entry.mr, entry.hub) {
                    found.push(CondensedViolation { vertex: s, side: Side::Out, entry, via_hub });
                }
            }
        }
        for t in 0..self.num_vertices() as VertexId {
            for &entry in &self.l_in[t as usize] {
                let s = self.order.vertex_at(entry.hub);
                if let Some(via_hub) = self.shared_hub(s, t, entry.mr, entry.hub) {
                    found.push(CondensedViolation { vertex: t, side: Side::In, entry, via_hub });
                }
            }
        }
        found
    }

    fn shared_hub(&self, s: VertexId, t: VertexId, mr: MrId, exclude: u32) -> Option<u32> {
        let inn = &self.l_in[t as usize];
        self.l_out[s as usize]
            .iter()
            .filter(|e| e.mr == mr && e.hub != exclude)
            .find(|e| inn.binary_search(e).is_ok())
            .map(|e| e.hub)
    }

    /// Removes one entry; used to check that verifiers notice missing entries.
    pub fn remove_entry(&mut self, side: Side, v: VertexId, position: usize) -> Option<IndexEntry> {
        let list = match side {
            Side::In => self.l_in.get_mut(v as usize)?,
            Side::Out => self.l_out.get_mut(v as usize)?,
        };
        (position < list.len()).then(|| list.remove(position))
    }

    /// All entries as `(vertex, side, hub vertex, repeat)` with external names.
    pub fn named_entries(&self) -> Vec<(String, Side, String, String)> {
        let mut rows = Vec::new();
        for v in 0..self.num_vertices() as VertexId {
            for side in [Side::In, Side::Out] {
                for &e in self.entries(side, v) {
                    rows.push((
                        self.vertices.name(v).to_owned(),
                        side,
                        self.vertices.name(self.hub_vertex(e)).to_owned(),
                        self.format_labels(self.dict.seq(e.mr)),
                    ));
                }
            }
        }
        rows
    }
}
