use proptest::prelude::*;
use sagefair::graph::{DirectedGraph, Direction};
use std::collections::BTreeSet;

fn edge_lists() -> impl Strategy<Value = (usize, Vec<(u32, u32)>)> {
    (1usize..12).prop_flat_map(|n| (Just(n), prop::collection::vec((0..n as u32, 0..n as u32), 0..60)))
}

proptest! {
    #[test]
    fn neighbors_match_dense_adjacency((n, edges) in edge_lists()) {
        let (g, _, _) = DirectedGraph::from_edges(n, edges.iter().copied()).unwrap();
        let mut dense = vec![vec![false; n]; n];
        for &(s, d) in &edges {
            if s != d {
                dense[s as usize][d as usize] = true;
            }
        }
        let expected_edges: usize = dense.iter().map(|r| r.iter().filter(|&&x| x).count()).sum();
        prop_assert_eq!(g.edge_count(), expected_edges);
        for v in 0..n {
            let out: Vec<u32> = (0..n as u32).filter(|&u| dense[v][u as usize]).collect();
            let inn: Vec<u32> = (0..n as u32).filter(|&u| dense[u as usize][v]).collect();
            let both: Vec<u32> = (0..n as u32).filter(|&u| dense[v][u as usize] || dense[u as usize][v]).collect();
            prop_assert_eq!(g.neighbors(v as u32, Direction::Out).unwrap(), out);
            prop_assert_eq!(g.neighbors(v as u32, Direction::In).unwrap(), inn);
            prop_assert_eq!(g.neighbors(v as u32, Direction::Both).unwrap(), both);
        }
    }

    #[test]
    fn transpose_swaps_directions((n, edges) in edge_lists()) {
        let (g, _, _) = DirectedGraph::from_edges(n, edges.iter().copied()).unwrap();
        let t = g.transpose();
        for v in 0..n as u32 {
            prop_assert_eq!(t.out_neighbors(v), g.in_neighbors(v));
            prop_assert_eq!(t.in_neighbors(v), g.out_neighbors(v));
        }
        let original: BTreeSet<_> = g.edges().collect();
        let back: BTreeSet<_> = t.transpose().edges().collect();
        prop_assert_eq!(original, back);
    }
}
