//! Distributed-to-centralized rewiring by reversing in-edges of drivers.
//!
//! The largest input component `N` of a network owes its input status to
//! its drivers `D_N`. Every in-edge `m -> n` of a driver `n ∈ D_N` is removed
//! and, when safe, re-added as `n -> m`. Once all drivers of `N` have no
//! in-edges they reach nothing, so the remaining members of `N` become
//! redundant. The maximum matching computed up front is never touched:
//! in-edges of drivers are never matched, and a reversed edge `(n_out, m_in)`
//! is only added when `m_in` is matched and not reachable from any driver.
//! Under that guard the new edge cannot sit on an augmenting path (those
//! traverse non-matched edges from a driver-reachable in-copy) and cannot
//! extend driver reach, so the matching stays maximum and the driver count
//! is unchanged.
//!
//! The guard needs a superset of the current driver-reachable set. Removals
//! only shrink that set and guarded additions never grow it, so any earlier
//! snapshot is a valid (more conservative) stand-in; [`ReachRefresh`]
//! selects how often the snapshot is taken.

use serde::{Deserialize, Serialize};

use crate::classification::{
    reach_mask, AlternatingComponent, Analysis, ControlReport, NodeClass, ReachMask, ReachSide, ReportOptions,
};
use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, EdgeOp, EdgeOpKind, NodeId};
use crate::matching::{self, Matching};

/// Reversal cases for an in-edge `m -> n` of a driver `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CaseTag {
    /// `m` is outside the component and `n_out` has no edge into it.
    Case1,
    /// Both ends touch the component; `n_out` is not reachable from an unsaturated out-copy.
    Case2,
    /// Both ends touch the component; `n_out` is unsaturated or reachable from one.
    Case3,
    /// `m_in` is unmatched or driver-reachable: the edge is removed, not reversed.
    Case4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RewireStep {
    pub op: EdgeOp,
    pub case: CaseTag,
}

/// When the driver-reachable snapshot used by the add guard is recomputed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReachRefresh {
    /// Remove every in-edge of `D_N` first, take one snapshot, then add the
    /// guarded reversals. Linear time; the snapshot is exact for the final graph.
    #[default]
    Deferred,
    /// Snapshot at the start of each driver, processing drivers in order.
    PerDriver,
    /// Snapshot after every removal. Quadratic; for cross-checking.
    PerEdge,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RewireOptions {
    pub refresh: ReachRefresh,
    pub report: ReportOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RewireOutcome {
    pub ops: Vec<RewireStep>,
    pub report_before: ControlReport,
    pub report_after: ControlReport,
    /// The largest input component before rewiring, if any.
    pub target_component: Option<AlternatingComponent>,
    pub num_modified: usize,
    pub num_reversed: usize,
    pub num_removed: usize,
    /// Target members that went from input to redundant.
    pub flipped_members: usize,
    pub metrics: RewireMetrics,
}

/// One row of the per-network summary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RewireMetrics {
    pub n: usize,
    pub l: usize,
    pub ic_max_before: f64,
    /// Modified edges over `l`.
    pub p_m: f64,
    /// Reversed edges over modified edges; 0 when nothing was modified.
    pub p_r: f64,
    /// Drop in input-node count over `n`.
    pub delta_nd: f64,
    /// Flipped target members over target size; 0 without a target.
    pub delta_ic: f64,
}

/// Operation counts and target bookkeeping feeding [`rewire_metrics`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RewireCounts {
    pub modified: usize,
    pub reversed: usize,
    pub flipped_members: usize,
    pub target_size: usize,
}

pub fn rewire_metrics(
    before: &ControlReport,
    after: &ControlReport,
    counts: RewireCounts,
) -> Result<RewireMetrics> {
    if before.n != after.n {
        return Err(Error::MismatchedGraphs(before.n, after.n));
    }
    let ratio = |num: usize, den: usize| if den == 0 { 0.0 } else { num as f64 / den as f64 };
    let delta_nd = if before.n == 0 {
        0.0
    } else {
        (before.input_count as f64 - after.input_count as f64) / before.n as f64
    };
    Ok(RewireMetrics {
        n: before.n,
        l: before.l,
        ic_max_before: before.ic_max,
        p_m: ratio(counts.modified, before.l),
        p_r: ratio(counts.reversed, counts.modified),
        delta_nd,
        delta_ic: ratio(counts.flipped_members, counts.target_size),
    })
}

/// True when adding `(n_out, source_in)` must be skipped: the source in-copy
/// is unmatched or reachable from a driver in the current graph.
pub fn skip_add_condition(graph: &DirectedGraph, m: &Matching, source: NodeId) -> Result<bool> {
    matching::check_valid(graph, m)?;
    let mask = reach_mask(graph, m, ReachSide::FromUnmatchedIn);
    Ok(skip_add(m, &mask, source))
}

fn skip_add(m: &Matching, reach_in: &ReachMask, source: NodeId) -> bool {
    m.is_driver(source) || reach_in.in_copies[source]
}

/// Case of reversing `source -> driver`, judged on the graph with that edge
/// removed. Purely diagnostic apart from the Case4 / not-Case4 split.
pub fn classify_reversal_case(
    graph: &DirectedGraph,
    m: &Matching,
    component: &AlternatingComponent,
    source: NodeId,
    driver: NodeId,
) -> Result<CaseTag> {
    if !component.is_driver(driver) || !m.is_driver(driver) {
        return Err(Error::NotADriver(driver));
    }
    if !graph.has_edge(source, driver) {
        return Err(Error::EdgeNotFound(source, driver));
    }
    let mut after = graph.clone();
    after.remove_edge(source, driver)?;
    matching::check_valid(&after, m)?;
    let reach_in = reach_mask(&after, m, ReachSide::FromUnmatchedIn);
    let reach_out = reach_mask(&after, m, ReachSide::FromUnmatchedOut);
    Ok(case_of(
        &after, m, component, source, driver, &reach_in, &reach_out,
    ))
}

fn case_of(
    graph: &DirectedGraph,
    m: &Matching,
    component: &AlternatingComponent,
    source: NodeId,
    driver: NodeId,
    reach_in: &ReachMask,
    reach_out: &ReachMask,
) -> CaseTag {
    if skip_add(m, reach_in, source) {
        return CaseTag::Case4;
    }
    let touches = graph.out_neighbors(driver).iter().any(|&x| component.contains(x));
    if !component.contains(source) && !touches {
        CaseTag::Case1
    } else if m.is_unsaturated(driver) || reach_out.out_copies[driver] {
        CaseTag::Case3
    } else {
        CaseTag::Case2
    }
}

struct Snapshot {
    reach_in: ReachMask,
    reach_out: ReachMask,
}

impl Snapshot {
    fn take(graph: &DirectedGraph, m: &Matching) -> Self {
        Self {
            reach_in: reach_mask(graph, m, ReachSide::FromUnmatchedIn),
            reach_out: reach_mask(graph, m, ReachSide::FromUnmatchedOut),
        }
    }
}

/// Removes `source -> driver` and re-adds it reversed unless guarded.
fn settle_edge(
    graph: &mut DirectedGraph,
    m: &Matching,
    component: &AlternatingComponent,
    source: NodeId,
    driver: NodeId,
    snapshot: &Snapshot,
) -> Result<RewireStep> {
    let case = case_of(
        graph,
        m,
        component,
        source,
        driver,
        &snapshot.reach_in,
        &snapshot.reach_out,
    );
    if case == CaseTag::Case4 || graph.has_edge(driver, source) {
        return Ok(RewireStep {
            op: EdgeOp::remove(source, driver),
            case: CaseTag::Case4,
        });
    }
    graph.add_edge(driver, source)?;
    Ok(RewireStep {
        op: EdgeOp::reverse(source, driver),
        case,
    })
}

/// Detaches one driver of `component`: every in-edge, in ascending source
/// order, is removed and re-added reversed unless the add guard forbids it.
/// The reachable set is snapshotted once, before the first removal.
pub fn detach_driver(
    graph: &mut DirectedGraph,
    m: &Matching,
    component: &AlternatingComponent,
    driver: NodeId,
) -> Result<Vec<RewireStep>> {
    detach_driver_with(graph, m, component, driver, ReachRefresh::PerDriver)
}

fn detach_driver_with(
    graph: &mut DirectedGraph,
    m: &Matching,
    component: &AlternatingComponent,
    driver: NodeId,
    refresh: ReachRefresh,
) -> Result<Vec<RewireStep>> {
    if driver >= graph.node_count() || !component.is_driver(driver) || !m.is_driver(driver) {
        return Err(Error::NotADriver(driver));
    }
    let sources = graph.in_neighbors(driver).to_vec();
    let mut snapshot = Snapshot::take(graph, m);
    let mut steps = Vec::with_capacity(sources.len());
    for source in sources {
        graph.remove_edge(source, driver)?;
        if refresh == ReachRefresh::PerEdge {
            snapshot = Snapshot::take(graph, m);
        }
        steps.push(settle_edge(graph, m, component, source, driver, &snapshot)?);
    }
    Ok(steps)
}

fn detach_all_deferred(
    graph: &mut DirectedGraph,
    m: &Matching,
    component: &AlternatingComponent,
) -> Result<Vec<RewireStep>> {
    let mut pending = Vec::new();
    for &driver in &component.drivers {
        for source in graph.in_neighbors(driver).to_vec() {
            graph.remove_edge(source, driver)?;
            pending.push((source, driver));
        }
    }
    let snapshot = Snapshot::take(graph, m);
    pending
        .into_iter()
        .map(|(source, driver)| settle_edge(graph, m, component, source, driver, &snapshot))
        .collect()
}

pub fn alter_to_centralized(graph: &mut DirectedGraph) -> Result<RewireOutcome> {
    alter_to_centralized_with(graph, &RewireOptions::default())
}

/// Rewires `graph` in place so that the largest input component loses all
/// of its drivers' in-edges, then checks the result from scratch.
pub fn alter_to_centralized_with(
    graph: &mut DirectedGraph,
    options: &RewireOptions,
) -> Result<RewireOutcome> {
    if graph.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let before = Analysis::new(graph);
    let report_before = before.report(graph, &options.report);
    let Some(target) = before.largest_input_component().cloned() else {
        let metrics = rewire_metrics(&report_before, &report_before, RewireCounts::default())?;
        return Ok(RewireOutcome {
            ops: Vec::new(),
            report_after: report_before.clone(),
            report_before,
            target_component: None,
            num_modified: 0,
            num_reversed: 0,
            num_removed: 0,
            flipped_members: 0,
            metrics,
        });
    };
    let m = before.matching;

    let ops = match options.refresh {
        ReachRefresh::Deferred => detach_all_deferred(graph, &m, &target)?,
        refresh => {
            let mut ops = Vec::new();
            for &driver in &target.drivers {
                ops.extend(detach_driver_with(graph, &m, &target, driver, refresh)?);
            }
            ops
        }
    };

    check_post_condition(graph, &m, &target)?;
    let after = Analysis::with_matching(graph, m)?;
    let report_after = after.report(graph, &options.report);

    let num_modified = ops.len();
    let num_reversed = ops.iter().filter(|s| s.op.kind == EdgeOpKind::Reverse).count();
    let flipped_members = target
        .members
        .iter()
        .filter(|&&v| {
            before.classification.labels[v] == NodeClass::Input
                && after.classification.labels[v] == NodeClass::Redundant
        })
        .count();
    let metrics = rewire_metrics(
        &report_before,
        &report_after,
        RewireCounts {
            modified: num_modified,
            reversed: num_reversed,
            flipped_members,
            target_size: target.len(),
        },
    )?;
    Ok(RewireOutcome {
        ops,
        report_before,
        report_after,
        target_component: Some(target),
        num_modified,
        num_reversed,
        num_removed: num_modified - num_reversed,
        flipped_members,
        metrics,
    })
}

/// Checks the rewired graph: the original matching is still maximum, every
/// non-driver member of the target is redundant under a fresh matching, and
/// every target driver has no in-edges.
pub fn check_post_condition(
    graph: &DirectedGraph,
    m: &Matching,
    target: &AlternatingComponent,
) -> Result<()> {
    if let Err(e) = matching::verify_maximum_matching(graph, m) {
        let nodes = match e {
            Error::NotMaximum { witness } => witness
                .into_iter()
                .map(|c| match c {
                    matching::Copy::In(v) | matching::Copy::Out(v) => v,
                })
                .collect(),
            _ => Vec::new(),
        };
        return Err(Error::PostConditionViolation(nodes));
    }
    let fresh = Analysis::new(graph);
    let mut offending: Vec<NodeId> = target
        .members
        .iter()
        .copied()
        .filter(|&v| {
            if target.is_driver(v) {
                graph.in_degree(v) != 0 || fresh.classification.labels[v] != NodeClass::Input
            } else {
                fresh.classification.labels[v] != NodeClass::Redundant
            }
        })
        .collect();
    if !offending.is_empty() {
        offending.sort_unstable();
        return Err(Error::PostConditionViolation(offending));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classification::{alternating_components, largest_input_component};

    fn graph(n: usize, edges: &[(NodeId, NodeId)]) -> DirectedGraph {
        DirectedGraph::from_edges(n, edges.iter().copied()).unwrap()
    }

    fn target(g: &DirectedGraph, m: &Matching) -> AlternatingComponent {
        let cs = alternating_components(g, m).unwrap();
        largest_input_component(&cs).unwrap().clone()
    }

    #[test]
    fn skip_when_source_in_copy_unmatched() {
        // {0->1, 0->2} after removing 0->2.
        let g = graph(3, &[(0, 1)]);
        let m = Matching::from_pairs(3, [(0, 1)]).unwrap();
        assert!(skip_add_condition(&g, &m, 0).unwrap());
    }

    #[test]
    fn add_allowed_when_source_matched_and_unreached() {
        // {0->1, 0->2, 3->0} after removing 0->2.
        let g = graph(4, &[(0, 1), (3, 0)]);
        let m = Matching::from_pairs(4, [(0, 1), (3, 0)]).unwrap();
        assert!(!skip_add_condition(&g, &m, 0).unwrap());
        // Confirm: adding 2->0 keeps the matching maximum.
        let mut h = g.clone();
        h.add_edge(2, 0).unwrap();
        assert!(matching::verify_maximum_matching(&h, &m).is_ok());
    }

    #[test]
    fn self_loop_source_is_skipped() {
        let g = graph(2, &[(0, 1)]);
        let m = Matching::from_pairs(2, [(0, 1)]).unwrap();
        assert!(skip_add_condition(&g, &m, 0).unwrap());
    }

    #[test]
    fn case_examples() {
        let g = graph(3, &[(0, 1), (0, 2)]);
        let m = Matching::from_pairs(3, [(0, 1)]).unwrap();
        let n = target(&g, &m);
        assert_eq!(n.members, vec![1, 2]);
        assert_eq!(classify_reversal_case(&g, &m, &n, 0, 2).unwrap(), CaseTag::Case4);

        let g = graph(4, &[(0, 1), (0, 2), (3, 0)]);
        let m = Matching::from_pairs(4, [(0, 1), (3, 0)]).unwrap();
        let n = target(&g, &m);
        assert_eq!(n.members, vec![1, 2]);
        assert_eq!(n.drivers, vec![2]);
        assert_eq!(classify_reversal_case(&g, &m, &n, 0, 2).unwrap(), CaseTag::Case1);
    }

    #[test]
    fn self_loop_is_case4() {
        // 2 -> 2 with 2_out matched to 1_in leaves driver 2 holding a self-loop.
        let g = graph(4, &[(0, 2), (0, 3), (2, 1), (2, 2)]);
        let m = Matching::from_pairs(4, [(2, 1), (0, 3)]).unwrap();
        assert!(matching::verify_maximum_matching(&g, &m).is_ok());
        let n = target(&g, &m);
        assert_eq!(n.members, vec![1, 2, 3]);
        assert_eq!(classify_reversal_case(&g, &m, &n, 2, 2).unwrap(), CaseTag::Case4);
    }

    #[test]
    fn case_errors() {
        let g = graph(3, &[(0, 1), (0, 2)]);
        let m = Matching::from_pairs(3, [(0, 1)]).unwrap();
        let n = target(&g, &m);
        assert_eq!(
            classify_reversal_case(&g, &m, &n, 0, 1),
            Err(Error::NotADriver(1))
        );
        assert_eq!(
            classify_reversal_case(&g, &m, &n, 1, 2),
            Err(Error::EdgeNotFound(1, 2))
        );
    }

    #[test]
    fn detach_examples() {
        let mut g = graph(3, &[(0, 1), (0, 2)]);
        let m = Matching::from_pairs(3, [(0, 1)]).unwrap();
        let n = target(&g, &m);
        let steps = detach_driver(&mut g, &m, &n, 2).unwrap();
        assert_eq!(
            steps,
            vec![RewireStep {
                op: EdgeOp::remove(0, 2),
                case: CaseTag::Case4
            }]
        );
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1)]);

        let mut g = graph(4, &[(0, 1), (0, 2), (3, 0)]);
        let m = Matching::from_pairs(4, [(0, 1), (3, 0)]).unwrap();
        let n = target(&g, &m);
        let steps = detach_driver(&mut g, &m, &n, 2).unwrap();
        assert_eq!(
            steps,
            vec![RewireStep {
                op: EdgeOp::reverse(0, 2),
                case: CaseTag::Case1
            }]
        );
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (2, 0), (3, 0)]);
        assert!(matching::verify_maximum_matching(&g, &m).is_ok());
    }

    #[test]
    fn detach_source_driver_is_noop() {
        let mut g = graph(3, &[(0, 1), (1, 2)]);
        let m = matching::maximum_matching(&g);
        let n = target(&g, &m);
        assert_eq!(n.members, vec![0]);
        assert!(detach_driver(&mut g, &m, &n, 0).unwrap().is_empty());
    }

    #[test]
    fn detach_rejects_non_driver() {
        let mut g = graph(3, &[(0, 1), (0, 2)]);
        let m = Matching::from_pairs(3, [(0, 1)]).unwrap();
        let n = target(&g, &m);
        assert_eq!(detach_driver(&mut g, &m, &n, 1), Err(Error::NotADriver(1)));
    }

    #[test]
    fn duplicate_reversal_becomes_removal() {
        // Same shape as the Case1 example, but 2 -> 0 already exists.
        let mut g = graph(4, &[(0, 1), (0, 2), (2, 0), (3, 0)]);
        let m = Matching::from_pairs(4, [(0, 1), (3, 0)]).unwrap();
        assert!(matching::verify_maximum_matching(&g, &m).is_ok());
        let n = target(&g, &m);
        assert_eq!(n.drivers, vec![2]);
        let steps = detach_driver(&mut g, &m, &n, 2).unwrap();
        assert_eq!(
            steps,
            vec![RewireStep {
                op: EdgeOp::remove(0, 2),
                case: CaseTag::Case4
            }]
        );
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (2, 0), (3, 0)]);
    }

    #[test]
    fn alter_star() {
        let mut g = graph(3, &[(0, 1), (0, 2)]);
        let out = alter_to_centralized(&mut g).unwrap();
        assert_eq!(
            out.ops,
            vec![RewireStep {
                op: EdgeOp::remove(0, 2),
                case: CaseTag::Case4
            }]
        );
        assert_eq!(out.report_before.in_fraction, 1.0);
        assert_eq!(out.report_after.in_fraction, 2.0 / 3.0);
        assert_eq!(out.num_modified, 1);
        assert_eq!(out.metrics.p_m, 0.5);
        assert_eq!(out.metrics.p_r, 0.0);
        assert_eq!(out.metrics.delta_nd, 1.0 / 3.0);
        assert_eq!(out.metrics.delta_ic, 0.5);
        assert_eq!(out.metrics.ic_max_before, 2.0 / 3.0);
        assert_eq!((out.metrics.n, out.metrics.l), (3, 2));
    }

    #[test]
    fn alter_with_case1_reversal() {
        for refresh in [
            ReachRefresh::Deferred,
            ReachRefresh::PerDriver,
            ReachRefresh::PerEdge,
        ] {
            let mut g = graph(4, &[(0, 1), (0, 2), (3, 0)]);
            let opts = RewireOptions {
                refresh,
                ..Default::default()
            };
            let out = alter_to_centralized_with(&mut g, &opts).unwrap();
            assert_eq!(
                out.ops,
                vec![RewireStep {
                    op: EdgeOp::reverse(0, 2),
                    case: CaseTag::Case1
                }]
            );
            assert_eq!(out.report_before.input_count, 3);
            assert_eq!(out.report_after.input_count, 2);
            assert_eq!(out.metrics.p_m, 1.0 / 3.0);
            assert_eq!(out.metrics.p_r, 1.0);
            assert_eq!(out.metrics.delta_nd, 0.25);
            assert_eq!(out.metrics.delta_ic, 0.5);
            assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (2, 0), (3, 0)]);
        }
    }

    #[test]
    fn alter_noop_when_target_has_no_in_edges() {
        let mut g = graph(3, &[(0, 1), (1, 2)]);
        let out = alter_to_centralized(&mut g).unwrap();
        assert!(out.ops.is_empty());
        assert_eq!(out.report_before, out.report_after);
        assert_eq!(out.metrics.p_m, 0.0);
        assert_eq!(out.metrics.delta_ic, 0.0);
    }

    #[test]
    fn alter_without_input_component() {
        let mut g = graph(2, &[(0, 1), (1, 0)]);
        let out = alter_to_centralized(&mut g).unwrap();
        assert!(out.ops.is_empty() && out.target_component.is_none());
        assert_eq!(out.report_before, out.report_after);
        assert_eq!(
            (
                out.metrics.p_m,
                out.metrics.p_r,
                out.metrics.delta_nd,
                out.metrics.delta_ic
            ),
            (0.0, 0.0, 0.0, 0.0)
        );
    }

    #[test]
    fn metrics_reject_mismatched_reports() {
        let g3 = graph(3, &[(0, 1)]);
        let g2 = graph(2, &[(0, 1)]);
        let r3 = Analysis::new(&g3).report(&g3, &ReportOptions::default());
        let r2 = Analysis::new(&g2).report(&g2, &ReportOptions::default());
        assert_eq!(
            rewire_metrics(&r3, &r2, RewireCounts::default()),
            Err(Error::MismatchedGraphs(3, 2))
        );
    }
}
