use super::{Direction, DirectedGraph, NodeTable};
use crate::error::{Error, Result};

/// Power-iteration convergence tolerance on the L2 change between iterates.
pub const EIGEN_TOL: f64 = 1e-8;
pub const EIGEN_MAX_ITER: usize = 1000;

/// Named feature columns, stored column-major.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FeatureColumns {
    pub names: Vec<String>,
    pub columns: Vec<Vec<f64>>,
}

impl FeatureColumns {
    pub fn push(&mut self, name: impl Into<String>, column: Vec<f64>) {
        self.names.push(name.into());
        self.columns.push(column);
    }

    pub fn get(&self, name: &str) -> Option<&[f64]> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| self.columns[i].as_slice())
    }

    pub fn extend(&mut self, other: FeatureColumns) {
        self.names.extend(other.names);
        self.columns.extend(other.columns);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenCentrality {
    /// Unit L2-norm, non-negative dominant eigenvector.
    pub vector: Vec<f64>,
    /// Rayleigh quotient `xᵀAx`.
    pub eigenvalue: f64,
    pub iterations: usize,
}

/// Eigenvector centrality of the symmetrized (undirected, unweighted)
/// adjacency.
///
/// Iterates `x ← (A + I)x / ‖(A + I)x‖` from the uniform vector. The unit
/// shift keeps bipartite graphs (stars, paths) from oscillating between the
/// `±λ` eigenvectors; it does not change the dominant eigenvector.
pub fn eigenvector_centrality(graph: &DirectedGraph, tol: f64, max_iter: usize) -> Result<EigenCentrality> {
    let n = graph.node_count();
    if n == 0 {
        return Ok(EigenCentrality {
            vector: Vec::new(),
            eigenvalue: 0.0,
            iterations: 0,
        });
    }
    let adj = graph.adjacency(Direction::Both);
    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    let mut next = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for it in 1..=max_iter {
        for v in 0..n {
            next[v] = x[v] + adj.row(v).iter().map(|&u| x[u as usize]).sum::<f64>();
        }
        let norm = l2(&next);
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::Numerical("power iteration produced a zero or non-finite vector".into()));
        }
        next.iter_mut().for_each(|v| *v /= norm);
        residual = x
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        std::mem::swap(&mut x, &mut next);
        if residual < tol {
            let eigenvalue = rayleigh(graph, &x);
            return Ok(EigenCentrality {
                vector: x,
                eigenvalue,
                iterations: it,
            });
        }
    }
    Err(Error::NoConvergence {
        iterations: max_iter,
        residual,
    })
}

fn l2(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn rayleigh(graph: &DirectedGraph, x: &[f64]) -> f64 {
    let adj = graph.adjacency(Direction::Both);
    (0..x.len())
        .map(|v| x[v] * adj.row(v).iter().map(|&u| x[u as usize]).sum::<f64>())
        .sum::<f64>()
        / x.iter().map(|v| v * v).sum::<f64>()
}

/// Mean of the given table columns over each node's 1-hop neighborhood
/// (zero for nodes without neighbors). Output names are `<column>_nbr_mean`.
///
/// Table rows must be aligned with graph node ids.
pub fn neighbor_means(
    graph: &DirectedGraph,
    table: &NodeTable,
    columns: &[usize],
    direction: Direction,
) -> Result<FeatureColumns> {
    if table.len() != graph.node_count() {
        return Err(Error::data(format!(
            "node table has {} rows but graph has {} nodes",
            table.len(),
            graph.node_count()
        )));
    }
    let mut out = FeatureColumns::default();
    for &c in columns {
        let name = table
            .feature_names()
            .get(c)
            .ok_or_else(|| Error::Schema(format!("feature column {c} out of range")))?;
        let col = (0..graph.node_count())
            .map(|v| {
                let nbrs = graph.neighbor_slice(v as u32, direction);
                if nbrs.is_empty() {
                    0.0
                } else {
                    nbrs.iter().map(|&u| table.row(u as usize)[c]).sum::<f64>() / nbrs.len() as f64
                }
            })
            .collect();
        out.push(format!("{name}_nbr_mean"), col);
    }
    Ok(out)
}

/// In-degree, out-degree and eigenvector centrality, plus neighborhood means
/// of `aggregate` columns when a table is given.
pub fn compute_network_features(
    graph: &DirectedGraph,
    aggregate: Option<(&NodeTable, &[usize], Direction)>,
) -> Result<FeatureColumns> {
    let n = graph.node_count();
    let mut out = FeatureColumns::default();
    out.push("in_degree", (0..n).map(|v| graph.in_degree(v as u32) as f64).collect());
    out.push("out_degree", (0..n).map(|v| graph.out_degree(v as u32) as f64).collect());
    let eig = eigenvector_centrality(graph, EIGEN_TOL, EIGEN_MAX_ITER)?;
    out.push("eigenvector", eig.vector);
    if let Some((table, columns, direction)) = aggregate {
        out.extend(neighbor_means(graph, table, columns, direction)?);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegreeStats {
    pub node_count: usize,
    pub edge_count: usize,
    pub min_in: usize,
    pub max_in: usize,
    pub mean_in: f64,
    pub min_out: usize,
    pub max_out: usize,
    pub mean_out: f64,
    /// Nodes with neither in- nor out-edges.
    pub isolated: usize,
}

pub fn degree_stats(graph: &DirectedGraph) -> DegreeStats {
    let n = graph.node_count();
    let ins: Vec<usize> = (0..n).map(|v| graph.in_degree(v as u32)).collect();
    let outs: Vec<usize> = (0..n).map(|v| graph.out_degree(v as u32)).collect();
    let mean = |m: usize| if n == 0 { 0.0 } else { m as f64 / n as f64 };
    DegreeStats {
        node_count: n,
        edge_count: graph.edge_count(),
        min_in: ins.iter().copied().min().unwrap_or(0),
        max_in: ins.iter().copied().max().unwrap_or(0),
        mean_in: mean(graph.edge_count()),
        min_out: outs.iter().copied().min().unwrap_or(0),
        max_out: outs.iter().copied().max().unwrap_or(0),
        mean_out: mean(graph.edge_count()),
        isolated: (0..n).filter(|&v| ins[v] == 0 && outs[v] == 0).count(),
    }
}
