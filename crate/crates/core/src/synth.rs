//! Small synthetic datasets for tests, examples and smoke runs.

use crate::error::{Error, Result};
use crate::graph::{Dataset, DirectedGraph, FeatureKind, NodeTable};
use crate::rng::RngStream;
use rand::Rng;
use rand_distr::StandardNormal;

/// Two-block stochastic block model. Nodes `0..block_size` are normal,
/// the rest hateful; features are pure noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlantedPartition {
    pub block_size: usize,
    pub p_in: f64,
    pub p_out: f64,
    pub feature_dim: usize,
    /// Share of nodes tagged with group `protected` (the rest get `other`).
    pub protected_fraction: f64,
}

impl Default for PlantedPartition {
    fn default() -> Self {
        Self {
            block_size: 50,
            p_in: 0.3,
            p_out: 0.02,
            feature_dim: 16,
            protected_fraction: 0.0,
        }
    }
}

fn noise_table(n: usize, dim: usize, labels: Vec<Option<bool>>, groups: Vec<Option<String>>, rng: &mut impl Rng) -> Result<NodeTable> {
    let features = (0..n * dim).map(|_| rng.sample(StandardNormal)).collect();
    let mut table = NodeTable::new(
        (0..n as u64).collect(),
        features,
        (0..dim).map(|i| format!("x{i}")).collect(),
        vec![FeatureKind::User; dim],
        labels,
        groups,
    )?;
    table.standardize(None);
    Ok(table)
}

/// Each unordered pair is linked with probability `p_in` (same block) or
/// `p_out`, as a single edge in a random direction.
pub fn planted_partition(cfg: &PlantedPartition, rng: RngStream) -> Result<Dataset> {
    if cfg.block_size == 0 || cfg.feature_dim == 0 {
        return Err(Error::Usage("planted partition needs positive block size and feature dim".into()));
    }
    let mut rng = rng.rng();
    let n = 2 * cfg.block_size;
    let block = |v: usize| v >= cfg.block_size;
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let p = if block(u) == block(v) { cfg.p_in } else { cfg.p_out };
            if rng.gen::<f64>() < p {
                edges.push(if rng.gen() { (u as u32, v as u32) } else { (v as u32, u as u32) });
            }
        }
    }
    let (graph, _, _) = DirectedGraph::from_edges(n, edges)?;
    let labels = (0..n).map(|v| Some(block(v))).collect();
    let groups = (0..n)
        .map(|_| {
            let g = if rng.gen::<f64>() < cfg.protected_fraction { "protected" } else { "other" };
            Some(g.to_string())
        })
        .collect();
    let table = noise_table(n, cfg.feature_dim, labels, groups, &mut rng)?;
    Dataset::new(graph, table)
}

/// `n` isolated nodes with Gaussian features, labeled by the sign of
/// `x₀ + x₁`; points within `margin` of the boundary are pushed out.
pub fn separable_points(n: usize, dim: usize, margin: f64, rng: RngStream) -> Result<Dataset> {
    if dim < 2 {
        return Err(Error::Usage("separable points need at least 2 features".into()));
    }
    let mut rng = rng.rng();
    let mut features: Vec<f64> = (0..n * dim).map(|_| rng.sample(StandardNormal)).collect();
    let mut labels = Vec::with_capacity(n);
    for row in features.chunks_mut(dim) {
        let s = row[0] + row[1];
        let shift = if s >= 0.0 { margin } else { -margin };
        row[0] += shift;
        labels.push(Some(s >= 0.0));
    }
    let mut table = NodeTable::new(
        (0..n as u64).collect(),
        features,
        (0..dim).map(|i| format!("x{i}")).collect(),
        vec![FeatureKind::User; dim],
        labels,
        vec![None; n],
    )?;
    table.standardize(None);
    Dataset::new(DirectedGraph::empty(n), table)
}
