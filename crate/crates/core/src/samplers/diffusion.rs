use crate::error::{Error, Result};
use crate::graph::{Direction, DirectedGraph, NodeId};
use crate::rng::RngStream;

/// Damped propagation of seed scores over the undirected closure:
///
/// `p ← α · P(p) + (1 − α) · p₀`, where `P` hands each node's score out in
/// equal shares to its neighbors (the transpose of the row-normalized
/// adjacency). Nodes without neighbors keep their own score. Total mass is
/// conserved by `P`.
pub fn diffusion_scores(
    graph: &DirectedGraph,
    seed_scores: &[f64],
    alpha: f64,
    iterations: usize,
) -> Result<Vec<f64>> {
    let n = graph.node_count();
    if seed_scores.len() != n {
        return Err(Error::data(format!(
            "{} seed scores for {n} nodes",
            seed_scores.len()
        )));
    }
    if let Some(i) = seed_scores.iter().position(|s| !(s.is_finite() && *s >= 0.0)) {
        return Err(Error::data(format!(
            "seed score for node {i} must be finite and non-negative, got {}",
            seed_scores[i]
        )));
    }
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::Usage(format!("alpha must be in [0, 1), got {alpha}")));
    }
    let adj = graph.adjacency(Direction::Both);
    let mut p = seed_scores.to_vec();
    let mut pushed = vec![0.0; n];
    for _ in 0..iterations {
        pushed.iter_mut().for_each(|x| *x = 0.0);
        for u in 0..n {
            let nbrs = adj.row(u);
            if nbrs.is_empty() {
                pushed[u] += p[u];
            } else {
                let share = p[u] / nbrs.len() as f64;
                for &v in nbrs {
                    pushed[v as usize] += share;
                }
            }
        }
        for v in 0..n {
            p[v] = alpha * pushed[v] + (1.0 - alpha) * seed_scores[v];
        }
    }
    Ok(p)
}

/// Share of a user's messages that contain a lexicon term (0 when the user
/// has no messages).
pub fn lexicon_seed_scores(lexicon_hits: &[u64], messages: &[u64]) -> Result<Vec<f64>> {
    if lexicon_hits.len() != messages.len() {
        return Err(Error::data("lexicon hit and message counts differ in length"));
    }
    lexicon_hits
        .iter()
        .zip(messages)
        .enumerate()
        .map(|(i, (&h, &m))| match (h, m) {
            (_, 0) => Ok(0.0),
            (h, m) if h <= m => Ok(h as f64 / m as f64),
            _ => Err(Error::data(format!("node {i}: {h} lexicon hits exceed {m} messages"))),
        })
        .collect()
}

/// Split nodes into `strata` equal-count score-quantile bins (ties broken by
/// node id) and draw `per_stratum` nodes uniformly from each. Output is grouped
/// by stratum, lowest scores first, ascending ids within a stratum.
pub fn select_candidates(
    scores: &[f64],
    strata: usize,
    per_stratum: usize,
    rng: RngStream,
) -> Result<Vec<NodeId>> {
    if strata == 0 {
        return Err(Error::Usage("strata must be at least 1".into()));
    }
    if scores.iter().any(|s| s.is_nan()) {
        return Err(Error::data("scores contain NaN"));
    }
    let n = scores.len();
    let mut order: Vec<NodeId> = (0..n as NodeId).collect();
    order.sort_by(|&a, &b| {
        scores[a as usize]
            .total_cmp(&scores[b as usize])
            .then(a.cmp(&b))
    });
    let bounds: Vec<usize> = (0..=strata).map(|b| b * n / strata).collect();
    let deficient: Vec<String> = (0..strata)
        .filter(|&b| bounds[b + 1] - bounds[b] < per_stratum)
        .map(|b| format!("{b} ({} nodes)", bounds[b + 1] - bounds[b]))
        .collect();
    if !deficient.is_empty() {
        return Err(Error::data(format!(
            "strata smaller than {per_stratum}: {}",
            deficient.join(", ")
        )));
    }
    let mut rng = rng.rng();
    let mut out = Vec::with_capacity(strata * per_stratum);
    for b in 0..strata {
        let bin = &order[bounds[b]..bounds[b + 1]];
        let mut picked: Vec<NodeId> = rand::seq::index::sample(&mut rng, bin.len(), per_stratum)
            .into_iter()
            .map(|i| bin[i])
            .collect();
        picked.sort_unstable();
        out.extend(picked);
    }
    Ok(out)
}
