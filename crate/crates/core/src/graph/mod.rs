//! Directed retweet graph, node table, and lightweight network features.
//!
//! A [`DirectedGraph`] keeps three CSR adjacencies: out-edges, in-edges
//! (the exact transpose) and their sorted union, which is what neighborhood
//! aggregation samples from by default. Graphs are immutable once built.

mod csr;
mod features;
mod load;
mod store;
mod table;

pub use csr::Csr;
pub use features::{
    compute_network_features, degree_stats, eigenvector_centrality, neighbor_means, DegreeStats,
    EigenCentrality, FeatureColumns, EIGEN_MAX_ITER, EIGEN_TOL,
};
pub use load::{load_edge_list, parse_edge_list, EdgeList, EdgeListReport, IdMap};
pub use store::{read_store, write_store, Dataset};
pub use table::{
    load_node_table, parse_node_table, ColumnSelector, FeatureKind, FeatureSet, NodeSchema,
    NodeTable, Standardizer,
};

pub(crate) use table::csv_error;

use crate::error::{Error, Result};
use std::fmt;
use std::str::FromStr;

/// Dense node identifier.
pub type NodeId = u32;

/// Which adjacency a neighborhood query follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Direction {
    Out,
    In,
    #[default]
    Both,
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "out" => Ok(Direction::Out),
            "in" => Ok(Direction::In),
            "both" | "union" => Ok(Direction::Both),
            other => Err(Error::Usage(format!(
                "unknown direction '{other}' (expected out, in or both)"
            ))),
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Out => "out",
            Direction::In => "in",
            Direction::Both => "both",
        })
    }
}

/// Immutable simple directed graph without self-loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedGraph {
    out: Csr,
    inc: Csr,
    both: Csr,
}

impl DirectedGraph {
    /// Build from `(src, dst)` pairs over `node_count` dense ids.
    ///
    /// Self-loops are dropped and duplicate edges collapsed. Returns the graph
    /// together with `(self_loops, duplicates)` counts.
    pub fn from_edges<I>(node_count: usize, edges: I) -> Result<(Self, usize, usize)>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut pairs = Vec::new();
        let mut self_loops = 0;
        for (s, d) in edges {
            if s as usize >= node_count || d as usize >= node_count {
                return Err(Error::data(format!(
                    "edge ({s}, {d}) references a node outside 0..{node_count}"
                )));
            }
            if s == d {
                self_loops += 1;
            } else {
                pairs.push((s, d));
            }
        }
        let before = pairs.len();
        pairs.sort_unstable();
        pairs.dedup();
        let duplicates = before - pairs.len();
        Ok((Self::from_sorted_unique(node_count, &pairs), self_loops, duplicates))
    }

    /// `pairs` must be sorted, deduplicated and loop-free.
    fn from_sorted_unique(node_count: usize, pairs: &[(NodeId, NodeId)]) -> Self {
        let out = Csr::from_sorted_pairs(node_count, pairs.iter().copied());
        let inc = out.transpose();
        let both = out.union(&inc);
        Self { out, inc, both }
    }

    /// Graph with no edges.
    pub fn empty(node_count: usize) -> Self {
        Self::from_sorted_unique(node_count, &[])
    }

    pub fn node_count(&self) -> usize {
        self.out.row_count()
    }

    pub fn edge_count(&self) -> usize {
        self.out.nnz()
    }

    pub fn out_neighbors(&self, v: NodeId) -> &[NodeId] {
        self.out.row(v as usize)
    }

    pub fn in_neighbors(&self, v: NodeId) -> &[NodeId] {
        self.inc.row(v as usize)
    }

    pub fn out_degree(&self, v: NodeId) -> usize {
        self.out.row(v as usize).len()
    }

    pub fn in_degree(&self, v: NodeId) -> usize {
        self.inc.row(v as usize).len()
    }

    /// CSR for the requested direction.
    pub fn adjacency(&self, direction: Direction) -> &Csr {
        match direction {
            Direction::Out => &self.out,
            Direction::In => &self.inc,
            Direction::Both => &self.both,
        }
    }

    /// Sorted neighbor slice without range checking (panics when out of range).
    pub fn neighbor_slice(&self, v: NodeId, direction: Direction) -> &[NodeId] {
        self.adjacency(direction).row(v as usize)
    }

    /// Sorted, deduplicated neighbors of `v` in the given direction.
    pub fn neighbors(&self, v: NodeId, direction: Direction) -> Result<Vec<NodeId>> {
        self.check_node(v)?;
        Ok(self.neighbor_slice(v, direction).to_vec())
    }

    pub fn has_edge(&self, src: NodeId, dst: NodeId) -> bool {
        (src as usize) < self.node_count() && self.out_neighbors(src).binary_search(&dst).is_ok()
    }

    pub fn check_node(&self, v: NodeId) -> Result<()> {
        if (v as usize) < self.node_count() {
            Ok(())
        } else {
            Err(Error::data(format!(
                "node {v} out of range (graph has {} nodes)",
                self.node_count()
            )))
        }
    }

    /// All edges in `(src, dst)` order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        (0..self.node_count()).flat_map(move |s| {
            self.out
                .row(s)
                .iter()
                .map(move |&d| (s as NodeId, d))
        })
    }

    /// Reverse every edge.
    pub fn transpose(&self) -> Self {
        Self {
            out: self.inc.clone(),
            inc: self.out.clone(),
            both: self.both.clone(),
        }
    }

    /// Same edges plus `extra` isolated nodes appended at the end of the id range.
    pub fn with_isolated_nodes(&self, extra: usize) -> Self {
        Self {
            out: self.out.extend_rows(extra),
            inc: self.inc.extend_rows(extra),
            both: self.both.extend_rows(extra),
        }
    }

    pub(crate) fn from_out_csr(out: Csr) -> Result<Self> {
        for v in 0..out.row_count() {
            let row = out.row(v);
            if row.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::data(format!("adjacency row {v} is not strictly sorted")));
            }
            if row.iter().any(|&u| u as usize == v || u as usize >= out.row_count()) {
                return Err(Error::data(format!("adjacency row {v} has an invalid target")));
            }
        }
        let inc = out.transpose();
        let both = out.union(&inc);
        Ok(Self { out, inc, both })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, edges: &[(u32, u32)]) -> DirectedGraph {
        DirectedGraph::from_edges(n, edges.iter().copied()).unwrap().0
    }

    #[test]
    fn self_loops_and_duplicates_dropped() {
        let (g, loops, dups) =
            DirectedGraph::from_edges(3, [(0, 1), (1, 2), (2, 2), (0, 1)]).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(loops, 1);
        assert_eq!(dups, 1);
    }

    #[test]
    fn both_is_union() {
        let g = graph(3, &[(0, 1), (2, 0)]);
        assert_eq!(g.neighbors(0, Direction::Both).unwrap(), vec![1, 2]);
        assert_eq!(g.neighbors(1, Direction::Out).unwrap(), Vec::<u32>::new());
        assert_eq!(g.neighbors(1, Direction::In).unwrap(), vec![0]);
    }

    #[test]
    fn isolated_and_out_of_range() {
        let g = graph(4, &[(0, 1)]);
        assert!(g.neighbors(3, Direction::Both).unwrap().is_empty());
        assert!(g.neighbors(4, Direction::Out).is_err());
    }

    #[test]
    fn reciprocal_edges_appear_once_in_union() {
        let g = graph(2, &[(0, 1), (1, 0)]);
        assert_eq!(g.neighbor_slice(0, Direction::Both), &[1]);
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn transpose_twice_is_identity() {
        let g = graph(5, &[(0, 1), (1, 2), (4, 0), (3, 1)]);
        let t = g.transpose();
        assert!(t.has_edge(1, 0) && t.has_edge(0, 4));
        assert_eq!(t.transpose(), g);
    }

    #[test]
    fn isolated_extension_keeps_edges() {
        let g = graph(2, &[(0, 1)]);
        let h = g.with_isolated_nodes(2);
        assert_eq!(h.node_count(), 4);
        assert_eq!(h.edges().collect::<Vec<_>>(), vec![(0, 1)]);
        assert!(h.neighbors(3, Direction::Both).unwrap().is_empty());
    }

    #[test]
    fn direction_parse() {
        assert_eq!("BOTH".parse::<Direction>().unwrap(), Direction::Both);
        assert!("sideways".parse::<Direction>().is_err());
    }
}
