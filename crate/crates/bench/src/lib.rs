//! Fixture graphs shared by the criterion benches.

use netctl_core::generation::{self, GeneratorConfig};
use netctl_core::DirectedGraph;

/// Static-model scale-free graph with `gamma = 3`.
pub fn scale_free(n: usize, k: f64, seed: u64) -> DirectedGraph {
    generation::generate(&GeneratorConfig::scale_free(n, k, 3.0, seed)).expect("valid bench config")
}

pub fn uniform(n: usize, k: f64, seed: u64) -> DirectedGraph {
    generation::generate(&GeneratorConfig::uniform(n, k, seed)).expect("valid bench config")
}
