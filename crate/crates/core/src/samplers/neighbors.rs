use crate::error::{Error, Result};
use crate::graph::{Direction, DirectedGraph, NodeId};
use crate::rng::RngStream;
use std::collections::HashMap;

/// Per-hop sample sizes, seeds first.
pub const DEFAULT_FANOUTS: [usize; 2] = [25, 10];

/// Sampled neighbors of one layer's nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hop {
    /// `offsets[i]..offsets[i + 1]` are the rows of node `i` of the layer.
    pub offsets: Vec<usize>,
    /// Positions into the next layer's node list.
    pub neighbors: Vec<usize>,
}

/// Computation graph for a minibatch.
///
/// `layer_nodes[0]` are the seeds; `layer_nodes[l + 1]` starts with
/// `layer_nodes[l]` (so a node's own row at the deeper layer has the same
/// position) followed by newly sampled nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampledBlock {
    pub layer_nodes: Vec<Vec<NodeId>>,
    pub hops: Vec<Hop>,
    pub fanouts: Vec<usize>,
}

impl SampledBlock {
    pub fn layers(&self) -> usize {
        self.hops.len()
    }

    pub fn seeds(&self) -> &[NodeId] {
        &self.layer_nodes[0]
    }

    /// Nodes whose input features the block needs.
    pub fn input_nodes(&self) -> &[NodeId] {
        self.layer_nodes.last().expect("at least the seed layer")
    }

    /// Graph ids of the sampled neighbors of the `i`-th node at `layer`.
    pub fn sampled_neighbors(&self, layer: usize, i: usize) -> impl Iterator<Item = NodeId> + '_ {
        let hop = &self.hops[layer];
        hop.neighbors[hop.offsets[i]..hop.offsets[i + 1]]
            .iter()
            .map(move |&p| self.layer_nodes[layer + 1][p])
    }
}

/// Sample up to `fanouts[l]` distinct neighbors per node at hop `l`, uniformly
/// without replacement. Nodes whose degree does not exceed the fanout keep
/// their full (sorted) neighbor list and consume no randomness.
pub fn sample_neighbors(
    graph: &DirectedGraph,
    seeds: &[NodeId],
    fanouts: &[usize],
    direction: Direction,
    rng: RngStream,
) -> Result<SampledBlock> {
    if seeds.is_empty() {
        return Err(Error::data("neighbor sampling needs at least one seed"));
    }
    if fanouts.is_empty() || fanouts.contains(&0) {
        return Err(Error::Usage(format!("fanouts must be non-empty and positive, got {fanouts:?}")));
    }
    for &s in seeds {
        graph.check_node(s)?;
    }
    let mut rng = rng.rng();
    let mut layer_nodes = vec![seeds.to_vec()];
    let mut hops = Vec::with_capacity(fanouts.len());
    for &fanout in fanouts {
        let current = layer_nodes.last().unwrap();
        let mut next = current.clone();
        let mut position: HashMap<NodeId, usize> = HashMap::with_capacity(current.len() * 2);
        for (i, &v) in current.iter().enumerate() {
            position.entry(v).or_insert(i);
        }
        let mut offsets = Vec::with_capacity(current.len() + 1);
        let mut neighbors = Vec::new();
        offsets.push(0);
        for &v in current {
            let nbrs = graph.neighbor_slice(v, direction);
            let mut take = |u: NodeId| {
                let p = *position.entry(u).or_insert_with(|| {
                    next.push(u);
                    next.len() - 1
                });
                neighbors.push(p);
            };
            if nbrs.len() <= fanout {
                nbrs.iter().for_each(|&u| take(u));
            } else {
                let mut picked = rand::seq::index::sample(&mut rng, nbrs.len(), fanout).into_vec();
                picked.sort_unstable();
                picked.into_iter().for_each(|k| take(nbrs[k]));
            }
            offsets.push(neighbors.len());
        }
        hops.push(Hop { offsets, neighbors });
        layer_nodes.push(next);
    }
    Ok(SampledBlock {
        layer_nodes,
        hops,
        fanouts: fanouts.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star(leaves: u32) -> DirectedGraph {
        DirectedGraph::from_edges(leaves as usize + 1, (1..=leaves).map(|l| (0, l)))
            .unwrap()
            .0
    }

    #[test]
    fn small_degree_takes_all() {
        let g = star(3);
        let b = sample_neighbors(&g, &[0], &[10], Direction::Out, RngStream::new(0, 0)).unwrap();
        assert_eq!(b.sampled_neighbors(0, 0).collect::<Vec<_>>(), vec![1, 2, 3]);
    }

    #[test]
    fn large_degree_capped_distinct() {
        let g = star(100);
        let b = sample_neighbors(&g, &[0], &[10], Direction::Out, RngStream::new(0, 0)).unwrap();
        let mut got: Vec<_> = b.sampled_neighbors(0, 0).collect();
        assert_eq!(got.len(), 10);
        got.dedup();
        assert_eq!(got.len(), 10);
        assert!(got.iter().all(|&u| g.has_edge(0, u)));
    }

    #[test]
    fn deterministic() {
        let g = star(100);
        let a = sample_neighbors(&g, &[0, 5], &[10, 3], Direction::Both, RngStream::new(9, 2)).unwrap();
        let b = sample_neighbors(&g, &[0, 5], &[10, 3], Direction::Both, RngStream::new(9, 2)).unwrap();
        assert_eq!(a, b);
        let c = sample_neighbors(&g, &[0, 5], &[10, 3], Direction::Both, RngStream::new(9, 3)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn prefix_layout() {
        let g = star(4);
        let b = sample_neighbors(&g, &[2], &[5, 5], Direction::Both, RngStream::new(0, 0)).unwrap();
        assert_eq!(b.layer_nodes[0], vec![2]);
        assert_eq!(b.layer_nodes[1], vec![2, 0]);
        assert_eq!(b.layer_nodes[2], vec![2, 0, 1, 3, 4]);
        assert_eq!(b.hops[1].offsets, vec![0, 1, 5]);
    }

    #[test]
    fn errors() {
        let g = star(2);
        assert!(sample_neighbors(&g, &[], &[2], Direction::Out, RngStream::new(0, 0)).is_err());
        assert!(sample_neighbors(&g, &[0], &[], Direction::Out, RngStream::new(0, 0)).is_err());
        assert!(sample_neighbors(&g, &[0], &[0], Direction::Out, RngStream::new(0, 0)).is_err());
        assert!(sample_neighbors(&g, &[7], &[1], Direction::Out, RngStream::new(0, 0)).is_err());
    }
}
