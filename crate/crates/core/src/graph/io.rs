use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use super::{Graph, GraphBuilder};
use crate::error::{Result, RlcError};

/// Reads `<src> <dst> <label>` lines. `#` lines and blank lines are skipped.
///
/// External vertex and label names are interned in first-seen order.
pub fn load_edge_list<R: BufRead>(reader: R) -> Result<Graph> {
    let mut builder = GraphBuilder::new();
    let mut edges = 0usize;
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        match (fields.next(), fields.next(), fields.next(), fields.next()) {
            (Some(src), Some(dst), Some(label), None) => {
                builder.add_named_edge(src, dst, label);
                edges += 1;
            }
            _ => {
                return Err(RlcError::Parse {
                    line: i + 1,
                    message: format!("expected `<src> <dst> <label>`, got `{trimmed}`"),
                })
            }
        }
    }
    if edges == 0 {
        return Err(RlcError::EmptyGraph);
    }
    Ok(builder.build())
}

pub fn load_edge_list_path<P: AsRef<Path>>(path: P) -> Result<Graph> {
    load_edge_list(BufReader::new(File::open(path)?))
}

/// Writes the graph in edge-list form, sorted by internal `(src, dst, label)`.
///
/// `header` lines are emitted as `# ` comments after the size summary.
pub fn write_edge_list<W: Write>(g: &Graph, header: &[String], mut out: W) -> Result<()> {
    writeln!(out, "# rlc edge list")?;
    writeln!(out, "# vertices: {}", g.num_vertices())?;
    writeln!(out, "# edges: {}", g.num_edges())?;
    writeln!(out, "# labels: {}", g.num_labels())?;
    for line in header {
        writeln!(out, "# {line}")?;
    }
    for (s, d, l) in g.edges() {
        writeln!(out, "{} {} {}", g.vertex_name(s), g.vertex_name(d), g.label_name(l))?;
    }
    out.flush()?;
    Ok(())
}
