//! Directed graph storage, SNAP-style edge-list I/O and edge mutation.
//!
//! Node ids are dense (`0..node_count`). Both adjacency directions are kept
//! sorted ascending so every traversal in the crate visits neighbours in a
//! fixed order, which is what makes matchings and reports reproducible.
//! Self-loops are allowed; parallel edges are not.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::{self, BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type NodeId = usize;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DirectedGraph {
    out_adj: Vec<Vec<NodeId>>,
    in_adj: Vec<Vec<NodeId>>,
    edge_count: usize,
    /// External label of each dense id, when the graph was parsed from text.
    labels: Option<Vec<String>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeOpKind {
    Add,
    Remove,
    Reverse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EdgeOp {
    pub kind: EdgeOpKind,
    pub from: NodeId,
    pub to: NodeId,
}

impl EdgeOp {
    pub fn add(from: NodeId, to: NodeId) -> Self {
        Self {
            kind: EdgeOpKind::Add,
            from,
            to,
        }
    }

    pub fn remove(from: NodeId, to: NodeId) -> Self {
        Self {
            kind: EdgeOpKind::Remove,
            from,
            to,
        }
    }

    pub fn reverse(from: NodeId, to: NodeId) -> Self {
        Self {
            kind: EdgeOpKind::Reverse,
            from,
            to,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ParseOptions {
    /// Merge repeated edges instead of rejecting them.
    pub dedup: bool,
}

impl DirectedGraph {
    /// Graph with `node_count` isolated nodes.
    pub fn new(node_count: usize) -> Self {
        Self {
            out_adj: vec![Vec::new(); node_count],
            in_adj: vec![Vec::new(); node_count],
            edge_count: 0,
            labels: None,
        }
    }

    /// Builds a graph from dense-id edges. Repeated edges are an error.
    pub fn from_edges<I>(node_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut graph = Self::new(node_count);
        for (from, to) in edges {
            graph.add_edge(from, to)?;
        }
        Ok(graph)
    }

    pub fn node_count(&self) -> usize {
        self.out_adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.out_adj.is_empty()
    }

    pub fn nodes(&self) -> std::ops::Range<NodeId> {
        0..self.node_count()
    }

    /// Successors of `node`, ascending.
    pub fn out_neighbors(&self, node: NodeId) -> &[NodeId] {
        &self.out_adj[node]
    }

    /// Predecessors of `node`, ascending.
    pub fn in_neighbors(&self, node: NodeId) -> &[NodeId] {
        &self.in_adj[node]
    }

    pub fn out_degree(&self, node: NodeId) -> usize {
        self.out_adj[node].len()
    }

    pub fn in_degree(&self, node: NodeId) -> usize {
        self.in_adj[node].len()
    }

    pub fn has_edge(&self, from: NodeId, to: NodeId) -> bool {
        from < self.node_count() && self.out_adj[from].binary_search(&to).is_ok()
    }

    /// All edges in ascending `(from, to)` order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.out_adj
            .iter()
            .enumerate()
            .flat_map(|(from, succ)| succ.iter().map(move |&to| (from, to)))
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// External label of `node`, falling back to the dense id.
    pub fn label(&self, node: NodeId) -> String {
        match &self.labels {
            Some(labels) => labels[node].clone(),
            None => node.to_string(),
        }
    }

    pub fn set_labels(&mut self, labels: Option<Vec<String>>) -> Result<()> {
        if let Some(labels) = &labels {
            if labels.len() != self.node_count() {
                return Err(Error::LabelCount {
                    labels: labels.len(),
                    node_count: self.node_count(),
                });
            }
        }
        self.labels = labels;
        Ok(())
    }

    /// Maps external labels to dense ids.
    pub fn label_map(&self) -> HashMap<&str, NodeId> {
        match &self.labels {
            Some(labels) => labels
                .iter()
                .enumerate()
                .map(|(id, label)| (label.as_str(), id))
                .collect(),
            None => HashMap::new(),
        }
    }

    fn check_node(&self, node: NodeId) -> Result<()> {
        if node < self.node_count() {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange {
                node,
                node_count: self.node_count(),
            })
        }
    }

    pub fn add_edge(&mut self, from: NodeId, to: NodeId) -> Result<()> {
        self.check_node(from)?;
        self.check_node(to)?;
        let pos = match self.out_adj[from].binary_search(&to) {
            Ok(_) => return Err(Error::EdgeAlreadyExists(from, to)),
            Err(pos) => pos,
        };
        self.out_adj[from].insert(pos, to);
        let pos = self.in_adj[to].binary_search(&from).unwrap_err();
        self.in_adj[to].insert(pos, from);
        self.edge_count += 1;
        Ok(())
    }

    pub fn remove_edge(&mut self, from: NodeId, to: NodeId) -> Result<()> {
        if from >= self.node_count() || to >= self.node_count() {
            return Err(Error::EdgeNotFound(from, to));
        }
        let pos = self.out_adj[from]
            .binary_search(&to)
            .map_err(|_| Error::EdgeNotFound(from, to))?;
        self.out_adj[from].remove(pos);
        let pos = self.in_adj[to]
            .binary_search(&from)
            .expect("in/out adjacency out of sync");
        self.in_adj[to].remove(pos);
        self.edge_count -= 1;
        Ok(())
    }

    /// Replaces `from -> to` with `to -> from`. A self-loop is left untouched.
    pub fn reverse_edge(&mut self, from: NodeId, to: NodeId) -> Result<()> {
        if !self.has_edge(from, to) {
            return Err(Error::EdgeNotFound(from, to));
        }
        if from == to {
            return Ok(());
        }
        if self.has_edge(to, from) {
            return Err(Error::EdgeAlreadyExists(to, from));
        }
        self.remove_edge(from, to)?;
        self.add_edge(to, from)
    }

    /// Applies `op`. On error the graph is unchanged.
    pub fn apply(&mut self, op: EdgeOp) -> Result<()> {
        match op.kind {
            EdgeOpKind::Add => self.add_edge(op.from, op.to),
            EdgeOpKind::Remove => self.remove_edge(op.from, op.to),
            EdgeOpKind::Reverse => self.reverse_edge(op.from, op.to),
        }
    }

    /// Mean total degree `2L / N`.
    pub fn average_degree(&self) -> Result<f64> {
        if self.is_empty() {
            return Err(Error::EmptyGraph);
        }
        Ok(2.0 * self.edge_count as f64 / self.node_count() as f64)
    }

    /// Edge list as `"<from>\t<to>\n"` lines over dense ids, sorted.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::with_capacity(self.edge_count * 8);
        for (from, to) in self.edges() {
            let _ = writeln!(out, "{from}\t{to}");
        }
        out
    }

    /// Writes the edge list, using external labels when present and
    /// `use_labels` is set. Lines stay in dense-id order.
    pub fn write_edge_list<W: Write>(&self, mut writer: W, use_labels: bool) -> io::Result<()> {
        match (&self.labels, use_labels) {
            (Some(labels), true) => {
                for (from, to) in self.edges() {
                    writeln!(writer, "{}\t{}", labels[from], labels[to])?;
                }
            }
            _ => {
                for (from, to) in self.edges() {
                    writeln!(writer, "{from}\t{to}")?;
                }
            }
        }
        writer.flush()
    }

    /// Parses a SNAP-style edge list. External ids are relabeled densely in
    /// order of first appearance.
    pub fn parse_edge_list<R: BufRead>(reader: R, options: ParseOptions) -> Result<Self> {
        let mut ids: HashMap<String, NodeId> = HashMap::new();
        let mut labels: Vec<String> = Vec::new();
        let mut pending: Vec<(NodeId, NodeId, usize)> = Vec::new();

        let mut intern = |token: &str| -> NodeId {
            if let Some(&id) = ids.get(token) {
                return id;
            }
            let id = labels.len();
            labels.push(token.to_owned());
            ids.insert(token.to_owned(), id);
            id
        };

        for (index, line) in reader.lines().enumerate() {
            let line_no = index + 1;
            let line = line.map_err(|e| Error::Parse {
                line: line_no,
                message: e.to_string(),
            })?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let mut tokens = trimmed.split_whitespace();
            let (Some(from), Some(to), None) = (tokens.next(), tokens.next(), tokens.next()) else {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected two tokens, got {trimmed:?}"),
                });
            };
            let from = intern(from);
            let to = intern(to);
            pending.push((from, to, line_no));
        }

        let mut graph = Self::new(labels.len());
        for (from, to, line) in pending {
            match graph.add_edge(from, to) {
                Ok(()) => {}
                Err(Error::EdgeAlreadyExists(..)) if options.dedup => {}
                Err(Error::EdgeAlreadyExists(..)) => {
                    return Err(Error::DuplicateEdge {
                        line,
                        from: labels[from].clone(),
                        to: labels[to].clone(),
                    })
                }
                Err(e) => return Err(e),
            }
        }
        graph.labels = Some(labels);
        Ok(graph)
    }

    pub fn parse_str(text: &str, options: ParseOptions) -> Result<Self> {
        Self::parse_edge_list(text.as_bytes(), options)
    }

    /// Recomputes the structural invariants. Used by tests and debug checks.
    pub fn check_consistency(&self) -> bool {
        let out_sum: usize = self.out_adj.iter().map(Vec::len).sum();
        let in_sum: usize = self.in_adj.iter().map(Vec::len).sum();
        if out_sum != self.edge_count || in_sum != self.edge_count {
            return false;
        }
        let sorted = |adj: &[Vec<NodeId>]| adj.iter().all(|v| v.windows(2).all(|w| w[0] < w[1]));
        if !sorted(&self.out_adj) || !sorted(&self.in_adj) {
            return false;
        }
        self.edges()
            .all(|(from, to)| self.in_adj[to].binary_search(&from).is_ok())
    }
}
