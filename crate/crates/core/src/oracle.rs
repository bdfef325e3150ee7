//! Exhaustive ground truth for small graphs.
//!
//! Enumerates every maximum matching of the bipartite view by depth-first
//! search over out-copies and derives input nodes straight from their
//! definition: a node is an input node when some maximum matching leaves its
//! in-copy unmatched. Nothing here uses the fast matching or reachability
//! code, so it can check them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, NodeId};

/// Search-tree nodes visited before giving up.
pub const DEFAULT_BUDGET: u64 = 5_000_000;

/// Matchings kept in the result list.
pub const DEFAULT_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleResult {
    pub max_size: usize,
    /// Maximum matchings as sorted `(from, to)` pairs, in lexicographic order.
    pub matchings: Vec<Vec<(NodeId, NodeId)>>,
    /// Number of maximum matchings found, including any beyond the cap.
    pub total: u64,
    /// Nodes left unmatched on the in side by at least one maximum matching.
    pub input_nodes: Vec<NodeId>,
    /// More than `cap` maximum matchings exist; `matchings` is a prefix.
    /// `input_nodes` is still exact.
    pub truncated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleClassification {
    pub input: Vec<NodeId>,
    pub redundant: Vec<NodeId>,
    pub n_d: usize,
}

struct Search<'a> {
    graph: &'a DirectedGraph,
    cap: usize,
    budget: u64,
    steps: u64,
    in_used: Vec<bool>,
    current: Vec<(NodeId, NodeId)>,
    best: usize,
    found: Vec<Vec<(NodeId, NodeId)>>,
    total: u64,
    unmatched_union: Vec<bool>,
}

impl Search<'_> {
    fn run(&mut self, u: NodeId) -> Result<()> {
        self.steps += 1;
        if self.steps > self.budget {
            return Err(Error::TooLarge(format!(
                "more than {} search steps ({} nodes, {} edges)",
                self.budget,
                self.graph.node_count(),
                self.graph.edge_count()
            )));
        }
        let n = self.graph.node_count();
        if self.current.len() + (n - u) < self.best {
            return Ok(());
        }
        if u == n {
            self.record();
            return Ok(());
        }
        for &v in self.graph.out_neighbors(u) {
            if self.in_used[v] {
                continue;
            }
            self.in_used[v] = true;
            self.current.push((u, v));
            self.run(u + 1)?;
            self.current.pop();
            self.in_used[v] = false;
        }
        self.run(u + 1)
    }

    fn record(&mut self) {
        let size = self.current.len();
        if size > self.best {
            self.best = size;
            self.found.clear();
            self.total = 0;
            self.unmatched_union.iter_mut().for_each(|x| *x = false);
        }
        self.total += 1;
        for (v, used) in self.in_used.iter().enumerate() {
            if !used {
                self.unmatched_union[v] = true;
            }
        }
        if self.found.len() < self.cap {
            self.found.push(self.current.clone());
        }
    }
}

pub fn enumerate_maximum_matchings(graph: &DirectedGraph, cap: usize) -> Result<OracleResult> {
    enumerate_with_budget(graph, cap, DEFAULT_BUDGET)
}

pub fn enumerate_with_budget(graph: &DirectedGraph, cap: usize, budget: u64) -> Result<OracleResult> {
    let n = graph.node_count();
    let mut search = Search {
        graph,
        cap,
        budget,
        steps: 0,
        in_used: vec![false; n],
        current: Vec::new(),
        best: 0,
        found: Vec::new(),
        total: 0,
        unmatched_union: vec![false; n],
    };
    search.run(0)?;
    let mut matchings = search.found;
    matchings.sort();
    Ok(OracleResult {
        max_size: search.best,
        truncated: search.total > matchings.len() as u64,
        matchings,
        total: search.total,
        input_nodes: (0..n).filter(|&v| search.unmatched_union[v]).collect(),
    })
}

pub fn oracle_classification(graph: &DirectedGraph) -> Result<OracleClassification> {
    oracle_classification_with_budget(graph, DEFAULT_BUDGET)
}

pub fn oracle_classification_with_budget(graph: &DirectedGraph, budget: u64) -> Result<OracleClassification> {
    let result = enumerate_with_budget(graph, 0, budget)?;
    let n = graph.node_count();
    let mut is_input = vec![false; n];
    for &v in &result.input_nodes {
        is_input[v] = true;
    }
    Ok(OracleClassification {
        input: result.input_nodes,
        redundant: (0..n).filter(|&v| !is_input[v]).collect(),
        n_d: (n - result.max_size).max(1),
    })
}
