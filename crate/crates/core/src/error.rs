use thiserror::Error;

use crate::graph::NodeId;
use crate::matching::Copy;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: duplicate edge {from} -> {to}")]
    DuplicateEdge { line: usize, from: String, to: String },

    #[error("edge {0} -> {1} not found")]
    EdgeNotFound(NodeId, NodeId),

    #[error("edge {0} -> {1} already exists")]
    EdgeAlreadyExists(NodeId, NodeId),

    #[error("node {node} out of range for graph with {node_count} nodes")]
    NodeOutOfRange { node: NodeId, node_count: usize },

    #[error("{labels} labels given for a graph with {node_count} nodes")]
    LabelCount { labels: usize, node_count: usize },

    #[error("graph has no nodes")]
    EmptyGraph,

    #[error("invalid matching: {0}")]
    InvalidMatching(String),

    #[error("matching is not maximum; augmenting path {witness:?}")]
    NotMaximum { witness: Vec<Copy> },

    #[error("no input component: every alternating component is matched")]
    NoInputComponent,

    #[error("node {0} is not a driver of the target component")]
    NotADriver(NodeId),

    #[error("post-condition violated for nodes {0:?}")]
    PostConditionViolation(Vec<NodeId>),

    #[error("reports were computed on different graphs ({0} vs {1} nodes)")]
    MismatchedGraphs(usize, usize),

    #[error("invalid generator config: {0}")]
    ConfigInvalid(String),

    #[error("could not place {target} edges after {attempts} attempts ({placed} placed)")]
    SaturationFailure {
        target: usize,
        placed: usize,
        attempts: u64,
    },

    #[error("instance too large for exhaustive search ({0})")]
    TooLarge(String),
}
