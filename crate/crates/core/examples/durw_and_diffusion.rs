//! Crawl a graph with DURW, then spread lexicon seed scores to pick
//! annotation candidates stratified by diffusion score.

use sagefair::samplers::{diffusion_scores, durw_sample, lexicon_seed_scores, select_candidates};
use sagefair::synth::{planted_partition, PlantedPartition};
use sagefair::RngStream;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let data = planted_partition(&PlantedPartition::default(), RngStream::new(3, 0))?;
    let g = &data.graph;

    for w in [0.0, 1.0, 10.0] {
        let s = durw_sample(g, 0, w, 40, RngStream::new(4, 0))?;
        let hateful = s.nodes.iter().filter(|&&v| v >= 50).count();
        println!("w = {w:>4}: {} users in {} steps, {hateful} from the second block", s.nodes.len(), s.steps);
    }

    // a handful of users whose tweets hit the lexicon
    let n = g.node_count();
    let mut hits = vec![0u64; n];
    let mut messages = vec![200u64; n];
    for v in [55, 60, 72, 90] {
        hits[v] = 30;
    }
    messages[0] = 0;
    let seeds = lexicon_seed_scores(&hits, &messages)?;
    let scores = diffusion_scores(g, &seeds, 0.85, 20)?;
    let block_mass: f64 = scores[50..].iter().sum::<f64>() / scores.iter().sum::<f64>();
    println!("share of diffused score on the second block: {block_mass:.2}");

    let picked = select_candidates(&scores, 4, 5, RngStream::new(5, 0))?;
    for (k, stratum) in picked.chunks(5).enumerate() {
        println!("stratum {k}: {stratum:?}");
    }
    Ok(())
}
