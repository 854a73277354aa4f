//! Draw a two-hop GraphSAGE sampling block around a few seed users.

use sagefair::graph::Direction;
use sagefair::samplers::sample_neighbors;
use sagefair::synth::{planted_partition, PlantedPartition};
use sagefair::RngStream;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let data = planted_partition(&PlantedPartition::default(), RngStream::new(1, 0))?;
    let seeds = [0, 51, 99];
    let fanouts = [5, 3];
    let block = sample_neighbors(&data.graph, &seeds, &fanouts, Direction::Both, RngStream::new(2, 0))?;

    for (l, nodes) in block.layer_nodes.iter().enumerate() {
        println!("layer {l}: {} nodes", nodes.len());
    }
    for (i, &s) in block.seeds().iter().enumerate() {
        let degree = data.graph.neighbor_slice(s, Direction::Both).len();
        let hop1: Vec<u32> = block.sampled_neighbors(0, i).collect();
        println!("seed {s} (degree {degree}) -> {hop1:?}");
    }
    println!("features needed for {} input nodes", block.input_nodes().len());
    Ok(())
}
