//! JSON views that carry external node labels instead of dense ids.

use serde::Serialize;

use netctl_core::{CaseTag, ControlReport, DirectedGraph, EdgeOpKind, RewireOutcome};

#[derive(Debug, Clone, Serialize)]
pub struct OpRecord {
    pub op: EdgeOpKind,
    pub from: String,
    pub to: String,
    pub case: CaseTag,
}

#[derive(Debug, Clone, Serialize)]
pub struct TargetSummary {
    pub size: usize,
    pub drivers: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RewireJson {
    pub n: usize,
    pub l: usize,
    pub ic_max_before: f64,
    pub p_m: f64,
    pub p_r: f64,
    pub delta_nd: f64,
    pub delta_ic: f64,
    pub num_modified: usize,
    pub num_reversed: usize,
    pub num_removed: usize,
    pub flipped_members: usize,
    pub target_component: Option<TargetSummary>,
    pub report_before: ControlReport,
    pub report_after: ControlReport,
    pub ops: Vec<OpRecord>,
}

impl RewireJson {
    /// `graph` supplies the labels; any state of the rewired graph will do.
    pub fn new(graph: &DirectedGraph, outcome: &RewireOutcome) -> Self {
        let m = &outcome.metrics;
        Self {
            n: m.n,
            l: m.l,
            ic_max_before: m.ic_max_before,
            p_m: m.p_m,
            p_r: m.p_r,
            delta_nd: m.delta_nd,
            delta_ic: m.delta_ic,
            num_modified: outcome.num_modified,
            num_reversed: outcome.num_reversed,
            num_removed: outcome.num_removed,
            flipped_members: outcome.flipped_members,
            target_component: outcome.target_component.as_ref().map(|c| TargetSummary {
                size: c.len(),
                drivers: c.drivers.iter().map(|&d| graph.label(d)).collect(),
            }),
            report_before: outcome.report_before.clone(),
            report_after: outcome.report_after.clone(),
            ops: outcome
                .ops
                .iter()
                .map(|s| OpRecord {
                    op: s.op.kind,
                    from: graph.label(s.op.from),
                    to: graph.label(s.op.to),
                    case: s.case,
                })
                .collect(),
        }
    }
}
