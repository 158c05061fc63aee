//! Reachability queries under recursive label-concatenated constraints.
//!
//! Given an edge-labeled digraph, a query `(s, t, L+)` asks whether some path
//! from `s` to `t` spells `L` repeated one or more times. [`RlcIndex`] answers
//! such queries for every `L` up to a length bound `k` from two per-vertex hub
//! lists, built once by [`build_index`].
//!
//! ```
//! use rlc_core::{build_index, sample_graphs};
//!
//! let g = sample_graphs::six_vertex();
//! let index = build_index(&g, 2).unwrap();
//! assert!(index.query_named("v3", "v6", "l2 l1").unwrap());
//! assert!(!index.query_named("v1", "v3", "l1").unwrap());
//! ```
//!
//! The `parallel` feature (on by default) lets batch queries, workload
//! classification and verification run on the rayon pool. Without it every
//! [`ExecMode`] runs sequentially.

pub mod baselines;
pub mod builder;
pub mod error;
pub mod graph;
pub mod index;
pub mod labelseq;
pub mod par;
pub mod sample_graphs;
pub mod workload;

pub use builder::{build_index, build_index_with, BuildOptions};
pub use error::{Result, RlcError};
pub use graph::{Graph, GraphBuilder, VertexId};
pub use index::{IndexEntry, IndexStats, MrId, RlcIndex, Side};
pub use labelseq::{Label, LabelSeq};
pub use par::ExecMode;
