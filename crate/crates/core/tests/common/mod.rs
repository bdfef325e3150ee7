#![allow(dead_code)]

use netctl_core::{DirectedGraph, NodeId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Each ordered pair, self-loops included, is an edge with probability `p`.
pub fn random_digraph(n: usize, p: f64, seed: u64) -> DirectedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges: Vec<(NodeId, NodeId)> = (0..n)
        .flat_map(|u| (0..n).map(move |v| (u, v)))
        .filter(|_| rng.gen_bool(p))
        .collect();
    DirectedGraph::from_edges(n, edges).unwrap()
}

/// The small-graph corpus: sizes uniform in 2..=8, density 0.3.
pub fn corpus(count: u64) -> impl Iterator<Item = (u64, DirectedGraph)> {
    (0..count).map(|seed| {
        let n = ChaCha8Rng::seed_from_u64(seed ^ 0xa5a5).gen_range(2..=8);
        (seed, random_digraph(n, 0.3, seed))
    })
}
