use super::{build, init_params, ModelConfig, ModelKind};
use crate::error::Result;
use crate::graph::DirectedGraph;
use crate::ndiff::{grad_check, GradCheckReport, Tensor};
use crate::rng::RngStream;
use crate::samplers::sample_neighbors;
use rand::Rng;
use rand_distr::StandardNormal;

/// Nodes in the random graph used by [`check_model_gradients`].
const PROBE_NODES: usize = 8;

/// Finite-difference check of a model's loss gradient at one random point:
/// a random 8-node graph, random features, Glorot weights with random
/// biases, three labeled
/// seeds and a class-weighted logistic loss.
pub fn check_model_gradients(
    config: &ModelConfig,
    input_dim: usize,
    point: RngStream,
    eps: f64,
) -> Result<GradCheckReport> {
    let mut params = init_params(config, input_dim, point.derive(1))?;
    let mut rng = point.derive(0).rng();
    // zero biases would put relu inputs of all-dead rows exactly on the kink
    for (name, t) in params.tensors.iter_mut() {
        if name.ends_with("bias") {
            t.data_mut().iter_mut().for_each(|b| *b = 0.5 * rng.sample::<f64, _>(StandardNormal));
        }
    }
    let mut edges = Vec::new();
    for u in 0..PROBE_NODES as u32 {
        for v in 0..PROBE_NODES as u32 {
            if u != v && rng.gen::<f64>() < 0.3 {
                edges.push((u, v));
            }
        }
    }
    let (graph, _, _) = DirectedGraph::from_edges(PROBE_NODES, edges)?;
    let seeds = [0, 3, 5];
    let labels = [1.0, 0.0, 1.0];
    let block = match config.kind {
        ModelKind::Sage => Some(sample_neighbors(
            &graph,
            &seeds,
            &config.fanouts,
            config.direction,
            point.derive(2),
        )?),
        _ => None,
    };
    let rows = block.as_ref().map_or(seeds.len(), |b| b.input_nodes().len());
    let x = Tensor::matrix(
        rows,
        input_dim,
        (0..rows * input_dim).map(|_| rng.sample(StandardNormal)).collect(),
    )?;
    grad_check(
        |tape, vars| {
            let xv = tape.leaf(x.clone())?;
            let (logits, _) = build(tape, config, vars, xv, block.as_ref(), None)?;
            tape.weighted_bce(logits, &labels, 1.5)
        },
        &params.tensors,
        eps,
    )
}
