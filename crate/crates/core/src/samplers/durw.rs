//! Directed Unbiased Random Walk.
//!
//! The walker only learns a node's out-edges when it visits the node. Each
//! revealed edge `u → x` is also made traversable backwards from `x`, so the
//! walk runs on the undirected closure of the edges seen so far. At node `v`
//! it jumps to a uniformly random node with probability `w / (w + d(v))`,
//! where `d(v)` is the number of known neighbors of `v`, and otherwise moves
//! to a uniformly random known neighbor.

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, NodeId};
use crate::rng::RngStream;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DurwSample {
    /// Distinct visited nodes in first-visit order.
    pub nodes: Vec<NodeId>,
    /// Visit counts aligned with `nodes`; the start counts once.
    pub visits: Vec<u64>,
    pub steps: usize,
    /// False when the step cap was hit before the budget was reached.
    pub complete: bool,
}

struct Walker<'g> {
    graph: &'g DirectedGraph,
    jump_weight: f64,
    position: Vec<usize>,
    revealed_in: Vec<Vec<NodeId>>,
    known: Vec<NodeId>,
    sample: DurwSample,
    current: NodeId,
}

impl<'g> Walker<'g> {
    fn new(graph: &'g DirectedGraph, start: NodeId, jump_weight: f64) -> Result<Self> {
        graph.check_node(start)?;
        if !(jump_weight >= 0.0 && jump_weight.is_finite()) {
            return Err(Error::Usage(format!("jump weight must be finite and ≥ 0, got {jump_weight}")));
        }
        let n = graph.node_count();
        let mut w = Self {
            graph,
            jump_weight,
            position: vec![usize::MAX; n],
            revealed_in: vec![Vec::new(); n],
            known: Vec::new(),
            sample: DurwSample {
                nodes: Vec::new(),
                visits: Vec::new(),
                steps: 0,
                complete: false,
            },
            current: start,
        };
        w.visit(start);
        Ok(w)
    }

    fn visit(&mut self, v: NodeId) {
        let p = self.position[v as usize];
        if p != usize::MAX {
            self.sample.visits[p] += 1;
            return;
        }
        self.position[v as usize] = self.sample.nodes.len();
        self.sample.nodes.push(v);
        self.sample.visits.push(1);
        for &x in self.graph.out_neighbors(v) {
            let list = &mut self.revealed_in[x as usize];
            if let Err(i) = list.binary_search(&v) {
                list.insert(i, v);
            }
        }
    }

    /// Sorted union of out-neighbors and revealed in-neighbors of `current`.
    fn refresh_known(&mut self) {
        self.known.clear();
        let (a, b) = (
            self.graph.out_neighbors(self.current),
            &self.revealed_in[self.current as usize],
        );
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            match (a.get(i), b.get(j)) {
                (Some(&x), Some(&y)) if x == y => {
                    self.known.push(x);
                    i += 1;
                    j += 1;
                }
                (Some(&x), Some(&y)) if x < y => {
                    self.known.push(x);
                    i += 1;
                }
                (Some(_), Some(&y)) | (None, Some(&y)) => {
                    self.known.push(y);
                    j += 1;
                }
                (Some(&x), None) => {
                    self.known.push(x);
                    i += 1;
                }
                (None, None) => unreachable!(),
            }
        }
    }

    fn step(&mut self, rng: &mut ChaCha8Rng) {
        self.refresh_known();
        let d = self.known.len() as f64;
        let jump = d == 0.0 || {
            let p = self.jump_weight / (self.jump_weight + d);
            p > 0.0 && rng.gen::<f64>() < p
        };
        let next = if jump {
            rng.gen_range(0..self.graph.node_count()) as NodeId
        } else {
            self.known[rng.gen_range(0..self.known.len())]
        };
        self.current = next;
        self.sample.steps += 1;
        self.visit(next);
    }
}

/// Walk until `budget` distinct nodes are visited or `100 × budget` steps
/// have been taken (then `complete` is false).
pub fn durw_sample(
    graph: &DirectedGraph,
    start: NodeId,
    jump_weight: f64,
    budget: usize,
    rng: RngStream,
) -> Result<DurwSample> {
    if budget == 0 || budget > graph.node_count() {
        return Err(Error::Usage(format!(
            "budget must be in 1..={}, got {budget}",
            graph.node_count()
        )));
    }
    let mut walker = Walker::new(graph, start, jump_weight)?;
    let mut rng = rng.rng();
    let cap = budget.saturating_mul(100);
    while walker.sample.nodes.len() < budget && walker.sample.steps < cap {
        walker.step(&mut rng);
    }
    walker.sample.complete = walker.sample.nodes.len() >= budget;
    Ok(walker.sample)
}

/// Walk a fixed number of steps with no node budget; visit counts then
/// estimate the walk's stationary distribution.
pub fn durw_walk(
    graph: &DirectedGraph,
    start: NodeId,
    jump_weight: f64,
    steps: usize,
    rng: RngStream,
) -> Result<DurwSample> {
    let mut walker = Walker::new(graph, start, jump_weight)?;
    let mut rng = rng.rng();
    for _ in 0..steps {
        walker.step(&mut rng);
    }
    walker.sample.complete = true;
    Ok(walker.sample)
}
