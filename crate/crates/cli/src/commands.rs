use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use serde::Serialize;

use netctl_core::generation::{self, GeneratorConfig, Model};
use netctl_core::{
    alter_to_centralized_with, classify_nodes, maximum_matching, oracle, verify_maximum_matching, Analysis,
    DirectedGraph, NodeClass, ParseOptions, ReachRefresh, ReportOptions, RewireOptions,
};

use crate::output::RewireJson;
use crate::sweep::{run_experiment_sweep, RowResult, SweepConfig};

/// Failure with the process exit code it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub error: anyhow::Error,
}

pub const EXIT_USAGE: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_VERIFY: u8 = 3;

impl CliError {
    pub fn usage(error: impl Into<anyhow::Error>) -> Self {
        Self {
            code: EXIT_USAGE,
            error: error.into(),
        }
    }

    pub fn input(error: impl Into<anyhow::Error>) -> Self {
        Self {
            code: EXIT_INPUT,
            error: error.into(),
        }
    }

    pub fn verify(error: impl Into<anyhow::Error>) -> Self {
        Self {
            code: EXIT_VERIFY,
            error: error.into(),
        }
    }
}

pub type CliResult<T = ()> = Result<T, CliError>;

pub fn load_graph(path: &Path, dedup: bool) -> CliResult<DirectedGraph> {
    let file = File::open(path)
        .with_context(|| format!("opening {}", path.display()))
        .map_err(CliError::input)?;
    DirectedGraph::parse_edge_list(BufReader::new(file), ParseOptions { dedup })
        .with_context(|| format!("parsing {}", path.display()))
        .map_err(CliError::input)
}

fn write_json<T: Serialize>(value: &T, path: Option<&Path>) -> CliResult {
    let mut text = serde_json::to_string_pretty(value).map_err(CliError::input)?;
    text.push('\n');
    match path {
        Some(path) => fs::write(path, text)
            .with_context(|| format!("writing {}", path.display()))
            .map_err(CliError::input),
        None => io::stdout().write_all(text.as_bytes()).map_err(CliError::input),
    }
}

fn write_graph(graph: &DirectedGraph, path: &Path) -> CliResult {
    let file = File::create(path)
        .with_context(|| format!("creating {}", path.display()))
        .map_err(CliError::input)?;
    graph
        .write_edge_list(BufWriter::new(file), true)
        .with_context(|| format!("writing {}", path.display()))
        .map_err(CliError::input)
}

#[derive(Debug, Clone)]
pub struct GenerateArgs {
    pub model: Model,
    pub nodes: usize,
    pub k: f64,
    pub gamma_in: f64,
    pub gamma_out: f64,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

pub fn generate(args: &GenerateArgs) -> CliResult {
    let config = GeneratorConfig {
        n: args.nodes,
        k: args.k,
        gamma_in: args.gamma_in,
        gamma_out: args.gamma_out,
        seed: args.seed,
        model: args.model,
    };
    let graph = generation::generate(&config).map_err(CliError::usage)?;
    match &args.out {
        Some(path) => {
            let file = File::create(path)
                .with_context(|| format!("creating {}", path.display()))
                .map_err(CliError::input)?;
            graph
                .write_edge_list(BufWriter::new(file), false)
                .map_err(CliError::input)?;
            let mut sidecar = path.clone().into_os_string();
            sidecar.push(".json");
            write_json(&config, Some(Path::new(&sidecar)))
        }
        None => graph
            .write_edge_list(BufWriter::new(io::stdout().lock()), false)
            .map_err(CliError::input),
    }
}

#[derive(Debug, Clone)]
pub struct AnalyzeArgs {
    pub graph: PathBuf,
    pub labels: bool,
    pub json: Option<PathBuf>,
    pub dedup: bool,
    pub mode_threshold: f64,
}

pub fn analyze(args: &AnalyzeArgs) -> CliResult {
    let graph = load_graph(&args.graph, args.dedup)?;
    let options = ReportOptions {
        mode_threshold: args.mode_threshold,
        include_labels: args.labels,
    };
    let report = Analysis::new(&graph).report(&graph, &options);
    write_json(&report, args.json.as_deref())
}

#[derive(Debug, Clone)]
pub struct RewireArgs {
    pub graph: PathBuf,
    pub out_graph: Option<PathBuf>,
    pub json: Option<PathBuf>,
    pub dry_run: bool,
    pub dedup: bool,
    pub refresh: ReachRefresh,
    pub mode_threshold: f64,
}

pub fn rewire(args: &RewireArgs) -> CliResult {
    let mut graph = load_graph(&args.graph, args.dedup)?;
    let original = graph.clone();
    let options = RewireOptions {
        refresh: args.refresh,
        report: ReportOptions {
            mode_threshold: args.mode_threshold,
            include_labels: false,
        },
    };
    let outcome = alter_to_centralized_with(&mut graph, &options).map_err(|e| match e {
        netctl_core::Error::PostConditionViolation(_) => CliError::verify(e),
        other => CliError::input(other),
    })?;
    write_json(&RewireJson::new(&original, &outcome), args.json.as_deref())?;
    if let (Some(path), false) = (&args.out_graph, args.dry_run) {
        write_graph(&graph, path)?;
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct VerifyArgs {
    pub graph: PathBuf,
    pub budget: u64,
    pub dedup: bool,
}

/// Checks the fast path against the exhaustive oracle and prints
/// `oracle agreement: OK` on success.
pub fn verify(args: &VerifyArgs) -> CliResult<String> {
    let graph = load_graph(&args.graph, args.dedup)?;
    let truth = oracle::oracle_classification_with_budget(&graph, args.budget).map_err(CliError::input)?;
    let m = maximum_matching(&graph);
    verify_maximum_matching(&graph, &m).map_err(CliError::verify)?;
    let n_d = netctl_core::matching::driver_count(&m);
    if n_d != truth.n_d {
        return Err(CliError::verify(anyhow!(
            "driver count {n_d} disagrees with oracle {}",
            truth.n_d
        )));
    }
    let classes = classify_nodes(&graph, &m).map_err(CliError::verify)?;
    let input = classes.input_nodes();
    if input != truth.input {
        let label = |v: &Vec<usize>| v.iter().map(|&x| graph.label(x)).collect::<Vec<_>>();
        return Err(CliError::verify(anyhow!(
            "input nodes {:?} disagree with oracle {:?}",
            label(&input),
            label(&truth.input)
        )));
    }
    let mut rewired = graph.clone();
    alter_to_centralized_with(&mut rewired, &RewireOptions::default()).map_err(CliError::verify)?;
    let summary = format!(
        "oracle agreement: OK ({} nodes, {} edges, {} input, {} redundant, n_d {})",
        graph.node_count(),
        graph.edge_count(),
        input.len(),
        classes
            .labels
            .iter()
            .filter(|&&c| c == NodeClass::Redundant)
            .count(),
        n_d
    );
    Ok(summary)
}

#[derive(Debug, Clone)]
pub struct SweepArgs {
    pub config: SweepConfig,
    pub csv: Option<PathBuf>,
}

pub fn sweep(args: &SweepArgs) -> CliResult {
    let result = run_experiment_sweep(&args.config).map_err(|e| CliError::usage(anyhow!(e)))?;
    for row in &result.rows {
        if let RowResult::Failed { k, seed, message } = row {
            eprintln!("k={k} seed={seed}: {message}");
        }
    }
    for s in &result.per_k {
        if s.kept < args.config.instances_per_k {
            eprintln!(
                "k={}: kept {} of {} instances after {} attempts",
                s.k, s.kept, args.config.instances_per_k, s.attempts
            );
        }
    }
    match &args.csv {
        Some(path) => {
            let file = File::create(path)
                .with_context(|| format!("creating {}", path.display()))
                .map_err(CliError::input)?;
            result.write_csv(BufWriter::new(file)).map_err(CliError::input)
        }
        None => result.write_csv(io::stdout().lock()).map_err(CliError::input),
    }
}
