//! Small hand-checked graphs used throughout the tests and docs.

use crate::graph::{load_edge_list, Graph};

/// Six vertices `v1..v6`, labels `l1..l3`, eleven edges. Internal ids follow
/// the vertex numbering (`v1` is id 0).
pub const SIX_VERTEX_EDGES: &str = "\
v1 v2 l1
v1 v3 l2
v3 v4 l2
v2 v5 l1
v2 v5 l2
v3 v1 l2
v3 v2 l1
v3 v6 l1
v4 v1 l1
v4 v6 l3
v5 v1 l1
";

/// Persons, accounts and transfers: `knows`, `worksFor`, `holds`, `debits`,
/// `credits` over ten vertices.
pub const SOCIAL_NETWORK_EDGES: &str = "\
P10 P11 knows
P11 P12 worksFor
P11 P12 knows
P12 P16 knows
P13 P11 knows
P12 P13 knows
P10 A14 holds
A14 E15 debits
P13 P16 worksFor
P13 P16 knows
E15 A17 credits
P16 A19 holds
A17 E18 debits
E18 A19 credits
";

pub fn six_vertex() -> Graph {
    load_edge_list(SIX_VERTEX_EDGES.as_bytes()).expect("static edge list")
}

pub fn social_network() -> Graph {
    load_edge_list(SOCIAL_NETWORK_EDGES.as_bytes()).expect("static edge list")
}
