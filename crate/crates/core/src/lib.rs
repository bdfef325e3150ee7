//! Structural controllability of directed networks.
//!
//! Driver nodes come from a maximum matching of the bipartite view
//! ([`matching`]); nodes split into input and redundant ones by alternating
//! reachability from the drivers ([`classification`]); and [`rewiring`]
//! turns a network with a giant input component into a centralized one by
//! reversing, or where needed removing, the in-edges of that component's
//! drivers. [`generation`] builds seeded synthetic networks and [`oracle`]
//! provides brute-force ground truth for small graphs.

pub mod classification;
pub mod error;
pub mod generation;
pub mod graph;
pub mod matching;
pub mod oracle;
pub mod rewiring;
mod unionfind;

pub use classification::{
    alternating_components, alternating_reach, classify_nodes, control_report, control_report_with,
    largest_input_component, AlternatingComponent, AlternatingReach, Analysis, ComponentKind,
    ControlClassification, ControlMode, ControlReport, NodeClass, ReachSide, ReportOptions,
};
pub use error::{Error, Result};
pub use generation::{GeneratorConfig, Model};
pub use graph::{DirectedGraph, EdgeOp, EdgeOpKind, NodeId, ParseOptions};
pub use matching::{
    extract_unmatched, maximum_matching, maximum_matching_randomized, verify_maximum_matching, Matching,
    MatchingDiagnostics, Unmatched,
};
pub use oracle::{enumerate_maximum_matchings, oracle_classification, OracleClassification, OracleResult};
pub use rewiring::{
    alter_to_centralized, alter_to_centralized_with, classify_reversal_case, detach_driver, rewire_metrics,
    skip_add_condition, CaseTag, ReachRefresh, RewireCounts, RewireMetrics, RewireOptions, RewireOutcome,
    RewireStep,
};
