//! Seeded synthetic digraphs.
//!
//! All randomness comes from `ChaCha8Rng::seed_from_u64(seed)`, which is
//! portable across platforms and word sizes, so a config always produces the
//! same edge list.
//!
//! The scale-free generator follows the static model: node `i` gets weight
//! `(i + 1)^(-alpha)` with `alpha = 1 / (gamma - 1)`, separately for the out
//! and in side. Each edge picks its source from the out-weights and its target
//! from the in-weights; self-loops and repeats are rejected until exactly
//! `ceil(k * n / 2)` edges exist.

use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::DirectedGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    StaticScaleFree,
    UniformRandom,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub n: usize,
    /// Target average total degree `2L / n`.
    pub k: f64,
    pub gamma_in: f64,
    pub gamma_out: f64,
    pub seed: u64,
    pub model: Model,
}

impl GeneratorConfig {
    pub fn scale_free(n: usize, k: f64, gamma: f64, seed: u64) -> Self {
        Self {
            n,
            k,
            gamma_in: gamma,
            gamma_out: gamma,
            seed,
            model: Model::StaticScaleFree,
        }
    }

    pub fn uniform(n: usize, k: f64, seed: u64) -> Self {
        Self {
            n,
            k,
            gamma_in: 0.0,
            gamma_out: 0.0,
            seed,
            model: Model::UniformRandom,
        }
    }

    /// `ceil(k * n / 2)`, ignoring float noise below 1e-9.
    pub fn target_edges(&self) -> usize {
        let exact = self.k * self.n as f64 / 2.0;
        let rounded = exact.round();
        if (exact - rounded).abs() < 1e-9 {
            rounded as usize
        } else {
            exact.ceil() as usize
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::ConfigInvalid(format!("n = {} (need at least 2)", self.n)));
        }
        if !(self.k.is_finite() && self.k > 0.0) {
            return Err(Error::ConfigInvalid(format!("k = {} (need k > 0)", self.k)));
        }
        if self.model == Model::StaticScaleFree {
            for (name, gamma) in [("gamma_in", self.gamma_in), ("gamma_out", self.gamma_out)] {
                if !(gamma.is_finite() && gamma > 2.0) {
                    return Err(Error::ConfigInvalid(format!("{name} = {gamma} (need > 2)")));
                }
            }
        }
        let slots = self.n * (self.n - 1);
        if self.target_edges() > slots {
            return Err(Error::ConfigInvalid(format!(
                "{} edges requested but only {slots} fit",
                self.target_edges()
            )));
        }
        Ok(())
    }
}

/// Weight exponent `1 / (gamma - 1)` of the static model.
pub fn weight_exponent(gamma: f64) -> f64 {
    1.0 / (gamma - 1.0)
}

pub fn generate(config: &GeneratorConfig) -> Result<DirectedGraph> {
    match config.model {
        Model::StaticScaleFree => scale_free_digraph(config),
        Model::UniformRandom => uniform_random_digraph(config),
    }
}

pub fn scale_free_digraph(config: &GeneratorConfig) -> Result<DirectedGraph> {
    if config.model != Model::StaticScaleFree {
        return Err(Error::ConfigInvalid("model is not static scale-free".into()));
    }
    config.validate()?;
    let n = config.n;
    let target = config.target_edges();
    let weights = |gamma: f64| {
        let alpha = weight_exponent(gamma);
        (0..n).map(move |i| ((i + 1) as f64).powf(-alpha))
    };
    let out_dist = WeightedIndex::new(weights(config.gamma_out)).expect("positive weights");
    let in_dist = WeightedIndex::new(weights(config.gamma_in)).expect("positive weights");

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut graph = DirectedGraph::new(n);
    let budget = (target as u64).saturating_mul(100).max(10_000);
    let mut attempts = 0u64;
    while graph.edge_count() < target {
        if attempts == budget {
            return Err(Error::SaturationFailure {
                target,
                placed: graph.edge_count(),
                attempts,
            });
        }
        attempts += 1;
        let from = out_dist.sample(&mut rng);
        let to = in_dist.sample(&mut rng);
        if from != to && !graph.has_edge(from, to) {
            graph.add_edge(from, to)?;
        }
    }
    Ok(graph)
}

pub fn uniform_random_digraph(config: &GeneratorConfig) -> Result<DirectedGraph> {
    if config.model != Model::UniformRandom {
        return Err(Error::ConfigInvalid("model is not uniform random".into()));
    }
    config.validate()?;
    let n = config.n;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut edges: Vec<(usize, usize)> =
        rand::seq::index::sample(&mut rng, n * (n - 1), config.target_edges())
            .into_iter()
            .map(|slot| {
                let from = slot / (n - 1);
                let rest = slot % (n - 1);
                (from, if rest < from { rest } else { rest + 1 })
            })
            .collect();
    edges.sort_unstable();
    DirectedGraph::from_edges(n, edges)
}
