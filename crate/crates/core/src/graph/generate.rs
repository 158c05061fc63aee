//! Erdős–Rényi and Barabási–Albert generators with Zipf-distributed labels.
//!
//! All randomness flows from one `Xoshiro256StarStar` seeded through
//! SplitMix64, so a `(parameters, seed)` pair always yields the same graph.

use std::collections::HashSet;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

use super::{Graph, GraphBuilder, VertexId};
use crate::error::{Result, RlcError};
use crate::labelseq::Label;

/// Rank probabilities `r^-s / H(n, s)` for ranks `1..=num_labels`.
pub fn zipf_probabilities(num_labels: usize, exponent: f64) -> Vec<f64> {
    let weights: Vec<f64> = (1..=num_labels).map(|r| (r as f64).powf(-exponent)).collect();
    let norm: f64 = weights.iter().sum();
    weights.into_iter().map(|w| w / norm).collect()
}

struct Labeler {
    dist: WeightedIndex<f64>,
}

impl Labeler {
    fn new(num_labels: usize, exponent: f64) -> Result<Self> {
        let dist = WeightedIndex::new(zipf_probabilities(num_labels, exponent))
            .map_err(|e| RlcError::InfeasibleGraph(format!("label distribution: {e}")))?;
        Ok(Labeler { dist })
    }

    fn sample(&self, rng: &mut Xoshiro256StarStar) -> Label {
        Label(self.dist.sample(rng) as u32)
    }
}

fn builder_with_labels(n: usize, num_labels: usize) -> GraphBuilder {
    let mut b = GraphBuilder::with_numbered_vertices(n);
    for r in 1..=num_labels {
        b.add_label(&format!("l{r}"));
    }
    b
}

fn check_common(n: usize, num_labels: usize, exponent: f64) -> Result<()> {
    if n == 0 {
        return Err(RlcError::InfeasibleGraph("n must be at least 1".into()));
    }
    if num_labels == 0 {
        return Err(RlcError::InfeasibleGraph("need at least one label".into()));
    }
    if !exponent.is_finite() || exponent < 0.0 {
        return Err(RlcError::InfeasibleGraph(format!("bad Zipf exponent {exponent}")));
    }
    Ok(())
}

/// G(n, M) digraph with `M = round(n * avg_deg)` distinct labeled edges.
///
/// Endpoints are uniform over ordered pairs (self-loops allowed); a repeated
/// `(src, dst, label)` triple is redrawn.
pub fn generate_er(n: usize, avg_deg: f64, num_labels: usize, zipf_s: f64, seed: u64) -> Result<Graph> {
    check_common(n, num_labels, zipf_s)?;
    if !avg_deg.is_finite() || avg_deg < 0.0 {
        return Err(RlcError::InfeasibleGraph(format!("bad average degree {avg_deg}")));
    }
    let edges = (n as f64 * avg_deg).round() as u128;
    let capacity = (n as u128) * (n as u128) * (num_labels as u128);
    if edges > capacity {
        return Err(RlcError::InfeasibleGraph(format!(
            "{edges} edges requested but only {capacity} distinct labeled pairs exist"
        )));
    }
    let edges = edges as usize;

    let mut rng = Xoshiro256StarStar::seed_from_u64(seed);
    let labeler = Labeler::new(num_labels, zipf_s)?;
    let mut builder = builder_with_labels(n, num_labels);
    let mut seen = HashSet::with_capacity(edges);
    while seen.len() < edges {
        let s = rng.random_range(0..n) as VertexId;
        let d = rng.random_range(0..n) as VertexId;
        let l = labeler.sample(&mut rng);
        if seen.insert((s, d, l)) {
            builder.add_edge(s, d, l);
        }
    }
    Ok(builder.build())
}

/// Preferential-attachment digraph.
///
/// Starts from a complete digraph on `attach_m + 1` vertices; every later
/// vertex adds `attach_m` out-edges to distinct earlier vertices, each picked
/// with probability proportional to its current total degree.
pub fn generate_ba(n: usize, attach_m: usize, num_labels: usize, zipf_s: f64, seed: u64) -> Result<Graph> {
    check_common(n, num_labels, zipf_s)?;
    if attach_m == 0 || n <= attach_m {
        return Err(RlcError::InfeasibleGraph(format!("need n > attach_m >= 1 (n = {n}, attach_m = {attach_m})")));
    }

    let mut rng = Xoshiro256StarStar::seed_from_u64(seed);
    let labeler = Labeler::new(num_labels, zipf_s)?;
    let mut builder = builder_with_labels(n, num_labels);
    // each edge contributes both endpoints, so uniform picks are degree-weighted
    let mut endpoints: Vec<VertexId> = Vec::with_capacity(2 * n * attach_m + attach_m * attach_m);

    let seed_size = attach_m + 1;
    for s in 0..seed_size as VertexId {
        for d in 0..seed_size as VertexId {
            if s != d {
                builder.add_edge(s, d, labeler.sample(&mut rng));
                endpoints.push(s);
                endpoints.push(d);
            }
        }
    }

    let mut targets: Vec<VertexId> = Vec::with_capacity(attach_m);
    for v in seed_size as VertexId..n as VertexId {
        targets.clear();
        while targets.len() < attach_m {
            let t = endpoints[rng.random_range(0..endpoints.len())];
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            builder.add_edge(v, t, labeler.sample(&mut rng));
            endpoints.push(v);
            endpoints.push(t);
        }
    }
    Ok(builder.build())
}
