//! Edge-labeled directed multigraph in CSR form, with mirrored in-adjacency.

mod generate;
mod io;

use std::collections::HashMap;

use crate::error::{Result, RlcError};
use crate::labelseq::{Label, LabelSeq};

pub use generate::{generate_ba, generate_er, zipf_probabilities};
pub use io::{load_edge_list, load_edge_list_path, write_edge_list};

pub type VertexId = u32;

/// Bidirectional map between external names and dense ids.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Interner {
    names: Vec<String>,
    ids: HashMap<String, u32>,
}

impl Interner {
    pub fn intern(&mut self, name: &str) -> u32 {
        if let Some(&id) = self.ids.get(name) {
            return id;
        }
        let id = self.names.len() as u32;
        self.names.push(name.to_owned());
        self.ids.insert(name.to_owned(), id);
        id
    }

    pub fn get(&self, name: &str) -> Option<u32> {
        self.ids.get(name).copied()
    }

    pub fn name(&self, id: u32) -> &str {
        &self.names[id as usize]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn from_names(names: Vec<String>) -> Self {
        let ids = names.iter().enumerate().map(|(i, n)| (n.clone(), i as u32)).collect();
        Interner { names, ids }
    }
}

/// Collects labeled edges, then freezes them into a [`Graph`].
#[derive(Debug, Default)]
pub struct GraphBuilder {
    vertices: Interner,
    labels: Interner,
    edges: Vec<(VertexId, VertexId, Label)>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declares `n` vertices named `0..n` up front.
    pub fn with_numbered_vertices(n: usize) -> Self {
        let mut b = Self::new();
        for v in 0..n {
            b.vertices.intern(&v.to_string());
        }
        b
    }

    pub fn add_vertex(&mut self, name: &str) -> VertexId {
        self.vertices.intern(name)
    }

    pub fn add_label(&mut self, name: &str) -> Label {
        Label(self.labels.intern(name))
    }

    pub fn add_named_edge(&mut self, src: &str, dst: &str, label: &str) {
        let s = self.vertices.intern(src);
        let d = self.vertices.intern(dst);
        let l = Label(self.labels.intern(label));
        self.edges.push((s, d, l));
    }

    /// Adds an edge between already declared vertices and labels.
    pub fn add_edge(&mut self, src: VertexId, dst: VertexId, label: Label) {
        debug_assert!((src as usize) < self.vertices.len() && (dst as usize) < self.vertices.len());
        debug_assert!(label.index() < self.labels.len());
        self.edges.push((src, dst, label));
    }

    pub fn build(mut self) -> Graph {
        self.edges.sort_unstable();
        self.edges.dedup();
        let n = self.vertices.len();

        let mut out_offsets = vec![0usize; n + 1];
        let mut in_offsets = vec![0usize; n + 1];
        for &(s, d, _) in &self.edges {
            out_offsets[s as usize + 1] += 1;
            in_offsets[d as usize + 1] += 1;
        }
        for v in 0..n {
            out_offsets[v + 1] += out_offsets[v];
            in_offsets[v + 1] += in_offsets[v];
        }

        // edges are sorted by (src, dst, label) so out lists come out sorted
        let out_adj: Vec<(VertexId, Label)> = self.edges.iter().map(|&(_, d, l)| (d, l)).collect();

        let mut in_adj = vec![(0 as VertexId, Label(0)); self.edges.len()];
        let mut cursor = in_offsets.clone();
        for &(s, d, l) in &self.edges {
            in_adj[cursor[d as usize]] = (s, l);
            cursor[d as usize] += 1;
        }
        for v in 0..n {
            in_adj[in_offsets[v]..in_offsets[v + 1]].sort_unstable();
        }

        Graph { out_offsets, out_adj, in_offsets, in_adj, vertices: self.vertices, labels: self.labels }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    out_offsets: Vec<usize>,
    out_adj: Vec<(VertexId, Label)>,
    in_offsets: Vec<usize>,
    in_adj: Vec<(VertexId, Label)>,
    vertices: Interner,
    labels: Interner,
}

impl Graph {
    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.out_adj.len()
    }

    pub fn num_labels(&self) -> usize {
        self.labels.len()
    }

    /// Out-neighbours of `v` as `(target, label)`, sorted.
    #[inline]
    pub fn out_edges(&self, v: VertexId) -> &[(VertexId, Label)] {
        let v = v as usize;
        &self.out_adj[self.out_offsets[v]..self.out_offsets[v + 1]]
    }

    /// In-neighbours of `v` as `(source, label)`, sorted.
    #[inline]
    pub fn in_edges(&self, v: VertexId) -> &[(VertexId, Label)] {
        let v = v as usize;
        &self.in_adj[self.in_offsets[v]..self.in_offsets[v + 1]]
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        self.out_edges(v).len()
    }

    pub fn in_degree(&self, v: VertexId) -> usize {
        self.in_edges(v).len()
    }

    /// All edges as `(src, dst, label)` in `(src, dst, label)` order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId, Label)> + '_ {
        (0..self.num_vertices() as VertexId).flat_map(move |s| self.out_edges(s).iter().map(move |&(d, l)| (s, d, l)))
    }

    pub fn vertex_table(&self) -> &Interner {
        &self.vertices
    }

    pub fn label_table(&self) -> &Interner {
        &self.labels
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        self.vertices.name(v)
    }

    pub fn label_name(&self, l: Label) -> &str {
        self.labels.name(l.0)
    }

    pub fn vertex_id(&self, name: &str) -> Result<VertexId> {
        self.vertices.get(name).ok_or_else(|| RlcError::NotFound(format!("vertex `{name}`")))
    }

    pub fn label_id(&self, name: &str) -> Result<Label> {
        self.labels.get(name).map(Label).ok_or_else(|| RlcError::NotFound(format!("label `{name}`")))
    }

    /// Parses whitespace-separated external label names.
    pub fn parse_labels(&self, text: &str) -> Result<LabelSeq> {
        parse_labels(&self.labels, text)
    }

    pub fn format_labels(&self, seq: &LabelSeq) -> String {
        format_labels(&self.labels, seq)
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<()> {
        if (v as usize) < self.num_vertices() {
            Ok(())
        } else {
            Err(RlcError::NotFound(format!("vertex #{v}")))
        }
    }

    pub fn check_labels(&self, seq: &LabelSeq) -> Result<()> {
        match seq.labels().iter().find(|l| l.index() >= self.num_labels()) {
            Some(l) => Err(RlcError::NotFound(format!("label #{}", l.0))),
            None => Ok(()),
        }
    }
}

pub(crate) fn parse_labels(table: &Interner, text: &str) -> Result<LabelSeq> {
    text.split_whitespace()
        .map(|name| table.get(name).map(Label).ok_or_else(|| RlcError::NotFound(format!("label `{name}`"))))
        .collect::<Result<Vec<_>>>()
        .map(LabelSeq::new)
}

pub(crate) fn format_labels(table: &Interner, seq: &LabelSeq) -> String {
    seq.labels().iter().map(|l| table.name(l.0)).collect::<Vec<_>>().join(" ")
}

/// Processing order of the indexer. Rank 0 is visited first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexOrder {
    rank: Vec<u32>,
    by_rank: Vec<VertexId>,
}

impl VertexOrder {
    pub fn from_sequence(by_rank: Vec<VertexId>) -> Result<Self> {
        let n = by_rank.len();
        let mut rank = vec![u32::MAX; n];
        for (r, &v) in by_rank.iter().enumerate() {
            if v as usize >= n || rank[v as usize] != u32::MAX {
                return Err(RlcError::CorruptIndex(format!(
                    "vertex order is not a permutation (vertex {v} at rank {r})"
                )));
            }
            rank[v as usize] = r as u32;
        }
        Ok(VertexOrder { rank, by_rank })
    }

    /// Access id of `v`, 0-based.
    #[inline]
    pub fn aid(&self, v: VertexId) -> u32 {
        self.rank[v as usize]
    }

    #[inline]
    pub fn vertex_at(&self, aid: u32) -> VertexId {
        self.by_rank[aid as usize]
    }

    pub fn len(&self) -> usize {
        self.by_rank.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_rank.is_empty()
    }

    pub fn as_slice(&self) -> &[VertexId] {
        &self.by_rank
    }
}

/// IN-OUT ordering: descending `(out_degree + 1) * (in_degree + 1)`, ties by id.
pub fn in_out_order(g: &Graph) -> VertexOrder {
    let n = g.num_vertices();
    let score = |v: VertexId| (g.out_degree(v) as u64 + 1) * (g.in_degree(v) as u64 + 1);
    let mut by_rank: Vec<VertexId> = (0..n as VertexId).collect();
    by_rank.sort_by(|&a, &b| score(b).cmp(&score(a)).then(a.cmp(&b)));
    VertexOrder::from_sequence(by_rank).expect("sorted identity is a permutation")
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GraphStats {
    pub vertices: usize,
    pub edges: usize,
    pub labels: usize,
    pub self_loops: usize,
    pub triangles: u64,
}

/// Counts, plus self-loops and directed 3-cycles over distinct vertices.
pub fn graph_stats(g: &Graph) -> GraphStats {
    let n = g.num_vertices();
    let self_loops = g.edges().filter(|&(s, d, _)| s == d).count();

    // label-free simple successor lists, no self-loops
    let succ: Vec<Vec<VertexId>> = (0..n as VertexId)
        .map(|v| {
            let mut s: Vec<VertexId> = g.out_edges(v).iter().map(|&(w, _)| w).filter(|&w| w != v).collect();
            s.dedup();
            s
        })
        .collect();

    let mut triangles = 0u64;
    for a in 0..n as VertexId {
        for &b in succ[a as usize].iter().filter(|&&b| b > a) {
            for &c in succ[b as usize].iter().filter(|&&c| c > a && c != b) {
                if succ[c as usize].binary_search(&a).is_ok() {
                    triangles += 1;
                }
            }
        }
    }

    GraphStats { vertices: n, edges: g.num_edges(), labels: g.num_labels(), self_loops, triangles }
}
