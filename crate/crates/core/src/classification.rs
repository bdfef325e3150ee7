//! Input/redundant node classification and alternating components.
//!
//! A node is an input node exactly when its in-copy is unmatched under some
//! maximum matching. Relative to one fixed maximum matching `M` that is the
//! case when the in-copy is unmatched in `M` or can be reached from an
//! unmatched in-copy by an even alternating path
//! (`v_in -non-matched- u_out =matched= w_in`, repeated). Every other node is
//! redundant, whatever maximum matching was used.
//!
//! Alternating components group in-copies joined by such moves. Components
//! holding a driver are input components; their members are all input nodes.
//! In-copies that no driver reaches form matched components among
//! themselves, so a move from a redundant in-copy into driver-reachable
//! territory does not join the two.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, NodeId};
use crate::matching::{self, Matching};
use crate::unionfind::UnionFind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ReachSide {
    /// Start at unmatched in-copies (drivers).
    FromUnmatchedIn,
    /// Start at unmatched out-copies (unsaturated nodes).
    FromUnmatchedOut,
}

/// Copies visited by a multi-source alternating traversal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlternatingReach {
    pub side: ReachSide,
    /// Unmatched copies the traversal started from.
    pub sources: Vec<NodeId>,
    /// Visited in-copies, sources excluded.
    pub in_copies: Vec<NodeId>,
    /// Visited out-copies, sources excluded.
    pub out_copies: Vec<NodeId>,
}

/// Visited flags including sources.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct ReachMask {
    pub in_copies: Vec<bool>,
    pub out_copies: Vec<bool>,
}

pub(crate) fn reach_mask(graph: &DirectedGraph, m: &Matching, side: ReachSide) -> ReachMask {
    let n = graph.node_count();
    let mut in_seen = vec![false; n];
    let mut out_seen = vec![false; n];
    let mut queue = VecDeque::new();
    match side {
        ReachSide::FromUnmatchedIn => {
            for v in graph.nodes().filter(|&v| m.is_driver(v)) {
                in_seen[v] = true;
                queue.push_back(v);
            }
            while let Some(v) = queue.pop_front() {
                for &u in graph.in_neighbors(v) {
                    if out_seen[u] || m.is_matched_edge(u, v) {
                        continue;
                    }
                    out_seen[u] = true;
                    if let Some(w) = m.out_partner(u) {
                        if !in_seen[w] {
                            in_seen[w] = true;
                            queue.push_back(w);
                        }
                    }
                }
            }
        }
        ReachSide::FromUnmatchedOut => {
            for u in graph.nodes().filter(|&u| m.is_unsaturated(u)) {
                out_seen[u] = true;
                queue.push_back(u);
            }
            while let Some(u) = queue.pop_front() {
                for &v in graph.out_neighbors(u) {
                    if in_seen[v] || m.is_matched_edge(u, v) {
                        continue;
                    }
                    in_seen[v] = true;
                    if let Some(w) = m.in_partner(v) {
                        if !out_seen[w] {
                            out_seen[w] = true;
                            queue.push_back(w);
                        }
                    }
                }
            }
        }
    }
    ReachMask {
        in_copies: in_seen,
        out_copies: out_seen,
    }
}

pub fn alternating_reach(graph: &DirectedGraph, m: &Matching, side: ReachSide) -> Result<AlternatingReach> {
    matching::check_valid(graph, m)?;
    let mask = reach_mask(graph, m, side);
    let is_source_in = |v: NodeId| side == ReachSide::FromUnmatchedIn && m.is_driver(v);
    let is_source_out = |u: NodeId| side == ReachSide::FromUnmatchedOut && m.is_unsaturated(u);
    let sources = graph
        .nodes()
        .filter(|&x| is_source_in(x) || is_source_out(x))
        .collect();
    Ok(AlternatingReach {
        side,
        sources,
        in_copies: graph
            .nodes()
            .filter(|&v| mask.in_copies[v] && !is_source_in(v))
            .collect(),
        out_copies: graph
            .nodes()
            .filter(|&u| mask.out_copies[u] && !is_source_out(u))
            .collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeClass {
    Input,
    Redundant,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ControlClassification {
    pub labels: Vec<NodeClass>,
    pub is_driver: Vec<bool>,
    /// In-copies reachable from drivers, drivers excluded.
    pub reach_in: Vec<NodeId>,
    /// Out-copies reachable from unsaturated out-copies, sources excluded.
    pub reach_out: Vec<NodeId>,
}

impl ControlClassification {
    pub fn input_nodes(&self) -> Vec<NodeId> {
        self.nodes_with(NodeClass::Input)
    }

    pub fn redundant_nodes(&self) -> Vec<NodeId> {
        self.nodes_with(NodeClass::Redundant)
    }

    pub fn input_count(&self) -> usize {
        self.labels.iter().filter(|&&c| c == NodeClass::Input).count()
    }

    fn nodes_with(&self, class: NodeClass) -> Vec<NodeId> {
        (0..self.labels.len())
            .filter(|&v| self.labels[v] == class)
            .collect()
    }
}

pub fn classify_nodes(graph: &DirectedGraph, m: &Matching) -> Result<ControlClassification> {
    let from_in = alternating_reach(graph, m, ReachSide::FromUnmatchedIn)?;
    let from_out = alternating_reach(graph, m, ReachSide::FromUnmatchedOut)?;
    let n = graph.node_count();
    let mut labels = vec![NodeClass::Redundant; n];
    for &v in from_in.sources.iter().chain(&from_in.in_copies) {
        labels[v] = NodeClass::Input;
    }
    Ok(ControlClassification {
        labels,
        is_driver: graph.nodes().map(|v| m.is_driver(v)).collect(),
        reach_in: from_in.in_copies,
        reach_out: from_out.out_copies,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComponentKind {
    Input,
    Matched,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlternatingComponent {
    pub id: usize,
    /// Nodes whose in-copy belongs to the component, ascending.
    pub members: Vec<NodeId>,
    /// Nodes whose out-copy has an edge into a member's in-copy, ascending.
    pub out_span: Vec<NodeId>,
    pub kind: ComponentKind,
    /// Members with an unmatched in-copy.
    pub drivers: Vec<NodeId>,
}

impl AlternatingComponent {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn is_driver(&self, v: NodeId) -> bool {
        self.drivers.binary_search(&v).is_ok()
    }

    pub fn spans_out(&self, u: NodeId) -> bool {
        self.out_span.binary_search(&u).is_ok()
    }
}

/// Partitions the in-copies into alternating components, ordered by their
/// smallest member.
pub fn alternating_components(graph: &DirectedGraph, m: &Matching) -> Result<Vec<AlternatingComponent>> {
    matching::check_valid(graph, m)?;
    let mask = reach_mask(graph, m, ReachSide::FromUnmatchedIn);
    let reached = &mask.in_copies;
    let n = graph.node_count();
    let mut sets = UnionFind::new(n);
    for v in graph.nodes() {
        for &u in graph.in_neighbors(v) {
            if m.is_matched_edge(u, v) {
                continue;
            }
            if let Some(w) = m.out_partner(u) {
                // v -> w is one alternating move; reached sets are closed under it.
                if reached[v] == reached[w] {
                    sets.union(v, w);
                }
            }
        }
    }

    let mut slot_of_root = vec![usize::MAX; n];
    let mut members: Vec<Vec<NodeId>> = Vec::new();
    for v in graph.nodes() {
        let root = sets.find(v);
        if slot_of_root[root] == usize::MAX {
            slot_of_root[root] = members.len();
            members.push(Vec::new());
        }
        members[slot_of_root[root]].push(v);
    }

    let mut span_mark = vec![usize::MAX; n];
    let components = members
        .into_iter()
        .enumerate()
        .map(|(id, members)| {
            let mut out_span = Vec::new();
            for &v in &members {
                for &u in graph.in_neighbors(v) {
                    if span_mark[u] != id {
                        span_mark[u] = id;
                        out_span.push(u);
                    }
                }
            }
            out_span.sort_unstable();
            let drivers: Vec<NodeId> = members.iter().copied().filter(|&v| m.is_driver(v)).collect();
            let kind = if drivers.is_empty() {
                ComponentKind::Matched
            } else {
                ComponentKind::Input
            };
            AlternatingComponent {
                id,
                members,
                out_span,
                kind,
                drivers,
            }
        })
        .collect();
    Ok(components)
}

/// The input component with the most members; ties go to the smallest
/// minimum member id.
pub fn largest_input_component(components: &[AlternatingComponent]) -> Result<&AlternatingComponent> {
    components
        .iter()
        .filter(|c| c.kind == ComponentKind::Input)
        .fold(None::<&AlternatingComponent>, |best, c| match best {
            Some(b) if b.len() > c.len() || (b.len() == c.len() && b.members[0] <= c.members[0]) => Some(b),
            _ => Some(c),
        })
        .ok_or(Error::NoInputComponent)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ControlMode {
    Distributed,
    Centralized,
    Neutral,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReportOptions {
    /// Input fraction above which a network counts as distributed.
    pub mode_threshold: f64,
    /// Include per-node labels in the report.
    pub include_labels: bool,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self {
            mode_threshold: 0.5,
            include_labels: false,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentHistogram {
    /// Component size -> number of input components of that size.
    pub input: BTreeMap<usize, usize>,
    /// Component size -> number of matched components of that size.
    pub matched: BTreeMap<usize, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeLabel {
    pub node: String,
    pub class: NodeClass,
    pub driver: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControlReport {
    pub n: usize,
    pub l: usize,
    /// Driver count, at least one.
    pub n_d: usize,
    pub driver_count: usize,
    pub input_count: usize,
    pub in_fraction: f64,
    /// Size of the largest input component over `n`; 0 without one.
    pub ic_max: f64,
    pub ic_max_size: usize,
    /// The largest alternating component overall is an input component.
    pub largest_is_input: bool,
    pub perfect_matching: bool,
    pub mode: ControlMode,
    pub component_sizes: ComponentHistogram,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub labels: Option<Vec<NodeLabel>>,
}

/// Matching, classification and components of one graph state.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub matching: Matching,
    pub classification: ControlClassification,
    pub components: Vec<AlternatingComponent>,
}

impl Analysis {
    pub fn new(graph: &DirectedGraph) -> Self {
        let matching = matching::maximum_matching(graph);
        Self::with_matching(graph, matching).expect("freshly computed matching is valid")
    }

    pub fn with_matching(graph: &DirectedGraph, matching: Matching) -> Result<Self> {
        let classification = classify_nodes(graph, &matching)?;
        let components = alternating_components(graph, &matching)?;
        Ok(Self {
            matching,
            classification,
            components,
        })
    }

    pub fn largest_input_component(&self) -> Option<&AlternatingComponent> {
        largest_input_component(&self.components).ok()
    }

    pub fn report(&self, graph: &DirectedGraph, options: &ReportOptions) -> ControlReport {
        let n = graph.node_count();
        let input_count = self.classification.input_count();
        let in_fraction = if n == 0 {
            0.0
        } else {
            input_count as f64 / n as f64
        };
        let ic_max_size = self.largest_input_component().map_or(0, |c| c.len());
        let ic_max = if n == 0 {
            0.0
        } else {
            ic_max_size as f64 / n as f64
        };
        let largest_matched = self
            .components
            .iter()
            .filter(|c| c.kind == ComponentKind::Matched)
            .map(|c| c.len())
            .max()
            .unwrap_or(0);

        let mut component_sizes = ComponentHistogram::default();
        for c in &self.components {
            let hist = match c.kind {
                ComponentKind::Input => &mut component_sizes.input,
                ComponentKind::Matched => &mut component_sizes.matched,
            };
            *hist.entry(c.len()).or_insert(0) += 1;
        }

        let mode = if in_fraction > options.mode_threshold {
            ControlMode::Distributed
        } else if in_fraction < options.mode_threshold {
            ControlMode::Centralized
        } else {
            ControlMode::Neutral
        };

        let labels = options.include_labels.then(|| {
            graph
                .nodes()
                .map(|v| NodeLabel {
                    node: graph.label(v),
                    class: self.classification.labels[v],
                    driver: self.classification.is_driver[v],
                })
                .collect()
        });

        ControlReport {
            n,
            l: graph.edge_count(),
            n_d: matching::driver_count(&self.matching),
            driver_count: n - self.matching.size(),
            input_count,
            in_fraction,
            ic_max,
            ic_max_size,
            largest_is_input: ic_max_size > 0 && ic_max_size >= largest_matched,
            perfect_matching: self.matching.is_perfect(),
            mode,
            component_sizes,
            labels,
        }
    }
}

pub fn control_report(graph: &DirectedGraph, m: &Matching) -> Result<ControlReport> {
    control_report_with(graph, m, &ReportOptions::default())
}

pub fn control_report_with(
    graph: &DirectedGraph,
    m: &Matching,
    options: &ReportOptions,
) -> Result<ControlReport> {
    let analysis = Analysis::with_matching(graph, m.clone())?;
    Ok(analysis.report(graph, options))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::maximum_matching;

    fn graph(n: usize, edges: &[(NodeId, NodeId)]) -> DirectedGraph {
        DirectedGraph::from_edges(n, edges.iter().copied()).unwrap()
    }

    fn summary(components: &[AlternatingComponent]) -> Vec<(Vec<NodeId>, ComponentKind)> {
        components.iter().map(|c| (c.members.clone(), c.kind)).collect()
    }

    #[test]
    fn reach_from_drivers_through_star() {
        let g = graph(3, &[(0, 1), (0, 2)]);
        let m = Matching::from_pairs(3, [(0, 1)]).unwrap();
        let r = alternating_reach(&g, &m, ReachSide::FromUnmatchedIn).unwrap();
        assert_eq!(r.sources, vec![0, 2]);
        assert_eq!(r.in_copies, vec![1]);
        assert_eq!(r.out_copies, vec![0]);
    }

    #[test]
    fn reach_on_path_is_empty() {
        let g = graph(3, &[(0, 1), (1, 2)]);
        let m = maximum_matching(&g);
        let r = alternating_reach(&g, &m, ReachSide::FromUnmatchedIn).unwrap();
        assert_eq!(r.sources, vec![0]);
        assert!(r.in_copies.is_empty() && r.out_copies.is_empty());
    }

    #[test]
    fn reach_on_perfect_matching_has_no_sources() {
        let g = graph(2, &[(0, 1), (1, 0)]);
        let m = maximum_matching(&g);
        for side in [ReachSide::FromUnmatchedIn, ReachSide::FromUnmatchedOut] {
            let r = alternating_reach(&g, &m, side).unwrap();
            assert!(r.sources.is_empty() && r.in_copies.is_empty() && r.out_copies.is_empty());
        }
    }

    #[test]
    fn reach_from_unsaturated_side() {
        // 0->2, 1->2 with (0,2) matched: 1_out is free, reaches 2_in then 0_out.
        let g = graph(3, &[(0, 2), (1, 2)]);
        let m = Matching::from_pairs(3, [(0, 2)]).unwrap();
        let r = alternating_reach(&g, &m, ReachSide::FromUnmatchedOut).unwrap();
        assert_eq!(r.sources, vec![1, 2]);
        assert_eq!(r.in_copies, vec![2]);
        assert_eq!(r.out_copies, vec![0]);
    }

    #[test]
    fn classification_examples() {
        let g = graph(3, &[(0, 1), (1, 2)]);
        let c = classify_nodes(&g, &maximum_matching(&g)).unwrap();
        assert_eq!(c.input_nodes(), vec![0]);
        assert_eq!(c.redundant_nodes(), vec![1, 2]);

        let g = graph(3, &[(0, 1), (0, 2)]);
        let c = classify_nodes(&g, &maximum_matching(&g)).unwrap();
        assert_eq!(c.input_nodes(), vec![0, 1, 2]);

        let g = graph(2, &[(0, 1), (1, 0)]);
        let c = classify_nodes(&g, &maximum_matching(&g)).unwrap();
        assert!(c.input_nodes().is_empty());
        assert_eq!(c.redundant_nodes(), vec![0, 1]);
    }

    #[test]
    fn rejects_invalid_matching() {
        let g = graph(3, &[(0, 1)]);
        let m = Matching::from_pairs(3, [(1, 2)]).unwrap();
        assert!(matches!(classify_nodes(&g, &m), Err(Error::InvalidMatching(_))));
    }

    #[test]
    fn component_examples() {
        let g = graph(3, &[(0, 1), (0, 2)]);
        let m = Matching::from_pairs(3, [(0, 1)]).unwrap();
        let cs = alternating_components(&g, &m).unwrap();
        assert_eq!(
            summary(&cs),
            vec![
                (vec![0], ComponentKind::Input),
                (vec![1, 2], ComponentKind::Input)
            ]
        );
        assert_eq!(cs[1].drivers, vec![2]);
        assert_eq!(cs[1].out_span, vec![0]);

        let g = graph(3, &[(0, 1), (1, 2)]);
        let cs = alternating_components(&g, &maximum_matching(&g)).unwrap();
        assert_eq!(
            summary(&cs),
            vec![
                (vec![0], ComponentKind::Input),
                (vec![1], ComponentKind::Matched),
                (vec![2], ComponentKind::Matched)
            ]
        );

        let g = graph(3, &[(0, 2), (1, 2)]);
        let m = Matching::from_pairs(3, [(0, 2)]).unwrap();
        let cs = alternating_components(&g, &m).unwrap();
        assert_eq!(
            summary(&cs),
            vec![
                (vec![0], ComponentKind::Input),
                (vec![1], ComponentKind::Input),
                (vec![2], ComponentKind::Matched)
            ]
        );
    }

    #[test]
    fn redundant_in_copy_does_not_join_input_component() {
        // u=0 -> {1 (driver), 2, 3}, z=4 -> 3. With M = {(0,2), (4,3)} node 3
        // is always matched, although the move 3_in -> 0_out -> 2_in exists.
        let g = graph(5, &[(0, 1), (0, 2), (0, 3), (4, 3)]);
        let m = Matching::from_pairs(5, [(0, 2), (4, 3)]).unwrap();
        let cs = alternating_components(&g, &m).unwrap();
        let big = largest_input_component(&cs).unwrap();
        assert_eq!(big.members, vec![1, 2]);
        let c = classify_nodes(&g, &m).unwrap();
        assert_eq!(c.labels[3], NodeClass::Redundant);
        let three = cs.iter().find(|c| c.contains(3)).unwrap();
        assert_eq!(three.kind, ComponentKind::Matched);
    }

    #[test]
    fn largest_component_selection() {
        let g = graph(3, &[(0, 1), (0, 2)]);
        let m = Matching::from_pairs(3, [(0, 1)]).unwrap();
        let cs = alternating_components(&g, &m).unwrap();
        let big = largest_input_component(&cs).unwrap();
        assert_eq!(big.members, vec![1, 2]);
        assert_eq!(big.drivers, vec![2]);

        let g = graph(3, &[(0, 2), (1, 2)]);
        let m = Matching::from_pairs(3, [(0, 2)]).unwrap();
        let cs = alternating_components(&g, &m).unwrap();
        assert_eq!(largest_input_component(&cs).unwrap().members, vec![0]);

        let g = graph(2, &[(0, 1), (1, 0)]);
        let cs = alternating_components(&g, &maximum_matching(&g)).unwrap();
        assert_eq!(largest_input_component(&cs), Err(Error::NoInputComponent));
    }

    #[test]
    fn report_examples() {
        let g = graph(3, &[(0, 1), (0, 2)]);
        let r = control_report(&g, &maximum_matching(&g)).unwrap();
        assert_eq!(r.in_fraction, 1.0);
        assert_eq!(r.n_d, 2);
        assert_eq!(r.ic_max, 2.0 / 3.0);
        assert_eq!(r.mode, ControlMode::Distributed);

        let g = graph(3, &[(0, 1), (1, 2)]);
        let r = control_report(&g, &maximum_matching(&g)).unwrap();
        assert_eq!(r.in_fraction, 1.0 / 3.0);
        assert_eq!(r.mode, ControlMode::Centralized);

        let g = graph(2, &[(0, 1), (1, 0)]);
        let r = control_report(&g, &maximum_matching(&g)).unwrap();
        assert_eq!(r.in_fraction, 0.0);
        assert_eq!(r.n_d, 1);
        assert_eq!(r.ic_max, 0.0);
        assert!(r.perfect_matching);
        assert_eq!(r.mode, ControlMode::Centralized);
    }

    #[test]
    fn neutral_mode_and_threshold() {
        // 0->1: drivers {0}; input {0}; N=2 -> exactly one half.
        let g = graph(2, &[(0, 1)]);
        let m = maximum_matching(&g);
        assert_eq!(control_report(&g, &m).unwrap().mode, ControlMode::Neutral);
        let opts = ReportOptions {
            mode_threshold: 0.4,
            include_labels: true,
        };
        let r = control_report_with(&g, &m, &opts).unwrap();
        assert_eq!(r.mode, ControlMode::Distributed);
        let labels = r.labels.unwrap();
        assert_eq!(
            labels[0],
            NodeLabel {
                node: "0".into(),
                class: NodeClass::Input,
                driver: true
            }
        );
    }

    #[test]
    fn report_json_keys() {
        let g = graph(3, &[(0, 1), (0, 2)]);
        let r = control_report(&g, &maximum_matching(&g)).unwrap();
        let json = serde_json::to_value(&r).unwrap();
        for key in [
            "n",
            "l",
            "n_d",
            "in_fraction",
            "ic_max",
            "mode",
            "component_sizes",
        ] {
            assert!(json.get(key).is_some(), "missing {key}");
        }
        assert!(json.get("labels").is_none());
        assert_eq!(json["mode"], "distributed");
        assert_eq!(json["component_sizes"]["input"]["2"], 1);
    }
}
