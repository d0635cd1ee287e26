//! Fixed, seeded workloads shared by the benchmarks.

use probetree::gen::{random_graph, random_marked_tree, random_tree_structure};
use probetree::{Graph, TernaryStructure};
use rand::rngs::StdRng;
use rand::SeedableRng;

/// Betweenness structures of random marked trees with up to `nodes` nodes.
pub fn tree_structures(seed: u64, count: usize, nodes: usize) -> Vec<TernaryStructure> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count)
        .map(|_| random_marked_tree(&mut rng, nodes, true, 0.4).betweenness())
        .collect()
}

/// Random restrictions of tree structures to `n` elements, small enough for
/// the brute-force oracle.
pub fn oracle_inputs(seed: u64, count: usize, n: usize) -> Vec<TernaryStructure> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count)
        .map(|_| random_tree_structure(&mut rng, n, 12, true))
        .collect()
}

pub fn graphs(seed: u64, count: usize, n: usize, p: f64) -> Vec<Graph> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count).map(|_| random_graph(&mut rng, n, p)).collect()
}
