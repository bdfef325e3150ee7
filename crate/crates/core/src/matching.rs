//! Maximum matching on the bipartite view of a digraph.
//!
//! Every node `v` is split into an out-copy `v_out` and an in-copy `v_in`;
//! each edge `u -> v` becomes the bipartite edge `(u_out, v_in)`. Nodes whose
//! in-copy stays unmatched are the drivers, nodes whose out-copy stays
//! unmatched are unsaturated.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, NodeId};

/// One side of a split node in the bipartite view.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Copy {
    In(NodeId),
    Out(NodeId),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    /// `in_partner[v] = Some(u)` when `(u_out, v_in)` is matched.
    in_partner: Vec<Option<NodeId>>,
    /// Inverse of `in_partner`.
    out_partner: Vec<Option<NodeId>>,
    size: usize,
}

impl Matching {
    pub fn empty(node_count: usize) -> Self {
        Self {
            in_partner: vec![None; node_count],
            out_partner: vec![None; node_count],
            size: 0,
        }
    }

    /// Builds a matching from `(from, to)` pairs without checking it against
    /// any graph. Reused endpoints are rejected; use
    /// [`verify_maximum_matching`] for the full check.
    pub fn from_pairs<I>(node_count: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut m = Self::empty(node_count);
        for (u, v) in pairs {
            if u >= node_count || v >= node_count {
                return Err(Error::InvalidMatching(format!("pair ({u}, {v}) out of range")));
            }
            if m.out_partner[u].is_some() {
                return Err(Error::InvalidMatching(format!(
                    "out-copy {u} used twice (pair ({u}, {v}))"
                )));
            }
            if m.in_partner[v].is_some() {
                return Err(Error::InvalidMatching(format!(
                    "in-copy {v} used twice (pair ({u}, {v}))"
                )));
            }
            m.out_partner[u] = Some(v);
            m.in_partner[v] = Some(u);
            m.size += 1;
        }
        Ok(m)
    }

    pub fn node_count(&self) -> usize {
        self.in_partner.len()
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// The `u` whose out-copy is matched to `v_in`.
    pub fn in_partner(&self, v: NodeId) -> Option<NodeId> {
        self.in_partner[v]
    }

    /// The `v` whose in-copy is matched to `u_out`.
    pub fn out_partner(&self, u: NodeId) -> Option<NodeId> {
        self.out_partner[u]
    }

    pub fn is_driver(&self, v: NodeId) -> bool {
        self.in_partner[v].is_none()
    }

    pub fn is_unsaturated(&self, u: NodeId) -> bool {
        self.out_partner[u].is_none()
    }

    pub fn is_matched_edge(&self, from: NodeId, to: NodeId) -> bool {
        self.out_partner[from] == Some(to)
    }

    /// Matched pairs `(u, v)` for `(u_out, v_in)`, ascending by `u`.
    pub fn pairs(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.out_partner
            .iter()
            .enumerate()
            .filter_map(|(u, v)| v.map(|v| (u, v)))
    }

    pub fn is_perfect(&self) -> bool {
        self.size == self.node_count()
    }
}

/// Maximum matching by Hopcroft–Karp, scanning adjacency in ascending id
/// order so the result is a fixed function of the graph.
pub fn maximum_matching(graph: &DirectedGraph) -> Matching {
    let order: Vec<NodeId> = graph.nodes().collect();
    hopcroft_karp(graph.node_count(), |u| graph.out_neighbors(u), &order)
}

/// Maximum matching with shuffled scan orders. Different RNG states yield
/// different (equally maximum) matchings.
pub fn maximum_matching_randomized<R: Rng + ?Sized>(graph: &DirectedGraph, rng: &mut R) -> Matching {
    let mut order: Vec<NodeId> = graph.nodes().collect();
    order.shuffle(rng);
    let adj: Vec<Vec<NodeId>> = graph
        .nodes()
        .map(|u| {
            let mut succ = graph.out_neighbors(u).to_vec();
            succ.shuffle(rng);
            succ
        })
        .collect();
    hopcroft_karp(graph.node_count(), |u| &adj[u], &order)
}

const UNREACHED: usize = usize::MAX;

fn hopcroft_karp<'a, F>(n: usize, succ: F, order: &[NodeId]) -> Matching
where
    F: Fn(NodeId) -> &'a [NodeId],
{
    let mut m = Matching::empty(n);
    let mut dist = vec![UNREACHED; n];
    let mut next = vec![0usize; n];
    let mut queue = VecDeque::new();
    let mut stack: Vec<NodeId> = Vec::new();

    loop {
        // Layer the free out-copies and everything reachable from them.
        queue.clear();
        for &u in order {
            if m.out_partner[u].is_none() {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = UNREACHED;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in succ(u) {
                match m.in_partner[v] {
                    None => found = true,
                    Some(w) if dist[w] == UNREACHED => {
                        dist[w] = dist[u] + 1;
                        queue.push_back(w);
                    }
                    Some(_) => {}
                }
            }
        }
        if !found {
            break;
        }

        // Vertex-disjoint augmenting paths along the layering, iteratively.
        next.iter_mut().for_each(|p| *p = 0);
        for &root in order {
            if m.out_partner[root].is_some() || dist[root] != 0 {
                continue;
            }
            stack.clear();
            stack.push(root);
            while let Some(&u) = stack.last() {
                let adj = succ(u);
                if next[u] == adj.len() {
                    dist[u] = UNREACHED;
                    stack.pop();
                    if let Some(&parent) = stack.last() {
                        next[parent] += 1;
                    }
                    continue;
                }
                let v = adj[next[u]];
                match m.in_partner[v] {
                    None => {
                        // Flip the path: each stacked u takes the in-copy it points at.
                        for &x in stack.iter().rev() {
                            let target = succ(x)[next[x]];
                            m.out_partner[x] = Some(target);
                            m.in_partner[target] = Some(x);
                            dist[x] = UNREACHED;
                        }
                        m.size += 1;
                        break;
                    }
                    Some(w) if dist[w] != UNREACHED && dist[w] == dist[u] + 1 => {
                        stack.push(w);
                    }
                    Some(_) => next[u] += 1,
                }
            }
        }
    }
    m
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingDiagnostics {
    pub size: usize,
    pub valid: bool,
    pub maximum: bool,
}

/// Checks that `m` is a matching of `graph` and that no augmenting path
/// exists. Fails with the violated pair or a witness path.
pub fn verify_maximum_matching(graph: &DirectedGraph, m: &Matching) -> Result<MatchingDiagnostics> {
    check_valid(graph, m)?;
    if let Some(witness) = find_augmenting_path(graph, m) {
        return Err(Error::NotMaximum { witness });
    }
    Ok(MatchingDiagnostics {
        size: m.size,
        valid: true,
        maximum: true,
    })
}

pub(crate) fn check_valid(graph: &DirectedGraph, m: &Matching) -> Result<()> {
    let n = graph.node_count();
    if m.in_partner.len() != n || m.out_partner.len() != n {
        return Err(Error::InvalidMatching(format!(
            "matching covers {} nodes, graph has {n}",
            m.in_partner.len()
        )));
    }
    let mut count = 0;
    for u in 0..n {
        if let Some(v) = m.out_partner[u] {
            if v >= n || m.in_partner[v] != Some(u) {
                return Err(Error::InvalidMatching(format!(
                    "pair ({u}, {v}) is not mutually inverse"
                )));
            }
            if !graph.has_edge(u, v) {
                return Err(Error::InvalidMatching(format!("pair ({u}, {v}) is not an edge")));
            }
            count += 1;
        }
    }
    for v in 0..n {
        if let Some(u) = m.in_partner[v] {
            if u >= n || m.out_partner[u] != Some(v) {
                return Err(Error::InvalidMatching(format!(
                    "pair ({u}, {v}) is not mutually inverse"
                )));
            }
        }
    }
    if count != m.size {
        return Err(Error::InvalidMatching(format!(
            "recorded size {} but {count} pairs",
            m.size
        )));
    }
    Ok(())
}

/// Alternating BFS from the unmatched in-copies; returns the first path that
/// ends on an unmatched out-copy, as `[v_in, u_out, v'_in, u'_out, ...]`.
fn find_augmenting_path(graph: &DirectedGraph, m: &Matching) -> Option<Vec<Copy>> {
    let n = graph.node_count();
    let mut seen_in = vec![false; n];
    let mut seen_out = vec![false; n];
    let mut via_in_of_out = vec![usize::MAX; n];
    let mut via_out_of_in = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for (v, seen) in seen_in.iter_mut().enumerate() {
        if m.in_partner[v].is_none() {
            *seen = true;
            queue.push_back(v);
        }
    }
    while let Some(v) = queue.pop_front() {
        for &u in graph.in_neighbors(v) {
            if seen_out[u] || m.out_partner[u] == Some(v) {
                continue;
            }
            seen_out[u] = true;
            via_in_of_out[u] = v;
            match m.out_partner[u] {
                None => {
                    let mut path = vec![Copy::Out(u)];
                    let mut cur_in = v;
                    loop {
                        path.push(Copy::In(cur_in));
                        let back = via_out_of_in[cur_in];
                        if back == usize::MAX {
                            break;
                        }
                        path.push(Copy::Out(back));
                        cur_in = via_in_of_out[back];
                    }
                    path.reverse();
                    return Some(path);
                }
                Some(w) => {
                    if !seen_in[w] {
                        seen_in[w] = true;
                        via_out_of_in[w] = u;
                        queue.push_back(w);
                    }
                }
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Unmatched {
    /// Nodes whose in-copy is unmatched.
    pub drivers: Vec<NodeId>,
    /// Nodes whose out-copy is unmatched.
    pub unsaturated: Vec<NodeId>,
    /// Number of control inputs: at least one, even for a perfect matching.
    pub n_d: usize,
}

pub fn extract_unmatched(graph: &DirectedGraph, m: &Matching) -> Result<Unmatched> {
    check_valid(graph, m)?;
    let drivers: Vec<NodeId> = graph.nodes().filter(|&v| m.is_driver(v)).collect();
    let unsaturated: Vec<NodeId> = graph.nodes().filter(|&u| m.is_unsaturated(u)).collect();
    let n_d = drivers.len().max(1);
    Ok(Unmatched {
        drivers,
        unsaturated,
        n_d,
    })
}

/// Driver count with the perfect-matching convention `max(1, N - |M|)`.
pub fn driver_count(m: &Matching) -> usize {
    (m.node_count() - m.size).max(1)
}
