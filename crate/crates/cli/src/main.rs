use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use netctl_cli::commands::{self, AnalyzeArgs, CliError, GenerateArgs, RewireArgs, SweepArgs, VerifyArgs};
use netctl_cli::sweep::SweepConfig;
use netctl_core::{oracle, Model, ReachRefresh};

/// Structural controllability analysis and centralizing rewiring of directed networks.
#[derive(Debug, Parser)]
#[command(name = "netctl", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a synthetic network as an edge list.
    Generate(GenerateCmd),
    /// Report driver nodes, input/redundant classes and components.
    Analyze(AnalyzeCmd),
    /// Reverse driver in-edges of the largest input component.
    Rewire(RewireCmd),
    /// Cross-check the fast analysis against exhaustive enumeration (small graphs).
    Verify(VerifyCmd),
    /// Run the degree sweep over scale-free networks and write CSV.
    Sweep(SweepCmd),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModelArg {
    /// Static-model scale-free.
    Sf,
    /// Uniform random (Erdos-Renyi with a fixed edge count).
    Er,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RefreshArg {
    Deferred,
    PerDriver,
    PerEdge,
}

impl From<RefreshArg> for ReachRefresh {
    fn from(value: RefreshArg) -> Self {
        match value {
            RefreshArg::Deferred => ReachRefresh::Deferred,
            RefreshArg::PerDriver => ReachRefresh::PerDriver,
            RefreshArg::PerEdge => ReachRefresh::PerEdge,
        }
    }
}

#[derive(Debug, Args)]
struct GenerateCmd {
    #[arg(long, value_enum, default_value = "sf")]
    model: ModelArg,
    #[arg(long)]
    nodes: usize,
    /// Average total degree 2L/N.
    #[arg(long)]
    k: f64,
    #[arg(long, default_value_t = 3.0)]
    gamma: f64,
    #[arg(long)]
    gamma_in: Option<f64>,
    #[arg(long)]
    gamma_out: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output edge list; a `<out>.json` file records the config. Stdout if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct AnalyzeCmd {
    #[arg(long)]
    graph: PathBuf,
    /// Include per-node classes in the report.
    #[arg(long)]
    labels: bool,
    /// Write the report here instead of stdout.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Drop duplicate edges instead of rejecting them.
    #[arg(long)]
    dedup: bool,
    #[arg(long, default_value_t = 0.5)]
    threshold: f64,
}

#[derive(Debug, Args)]
struct RewireCmd {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    out_graph: Option<PathBuf>,
    #[arg(long)]
    json: Option<PathBuf>,
    /// Report the operations without writing the rewired graph.
    #[arg(long)]
    dry_run: bool,
    #[arg(long)]
    dedup: bool,
    #[arg(long, value_enum, default_value = "deferred")]
    refresh: RefreshArg,
    #[arg(long, default_value_t = 0.5)]
    threshold: f64,
}

#[derive(Debug, Args)]
struct VerifyCmd {
    #[arg(long)]
    graph: PathBuf,
    /// Search steps allowed for the exhaustive enumeration.
    #[arg(long, default_value_t = oracle::DEFAULT_BUDGET)]
    budget: u64,
    #[arg(long)]
    dedup: bool,
}

#[derive(Debug, Args)]
struct SweepCmd {
    #[arg(long, default_value_t = 10_000)]
    nodes: usize,
    #[arg(long, default_value_t = 5.0)]
    k_min: f64,
    #[arg(long, default_value_t = 20.0)]
    k_max: f64,
    #[arg(long, default_value_t = 0.1)]
    k_step: f64,
    /// Rows per k.
    #[arg(long, default_value_t = 20)]
    instances: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 3.0)]
    gamma: f64,
    /// Keep only instances whose largest component is an input component.
    #[arg(long)]
    filter_input_largest: bool,
    /// Attempts per k when filtering, as a multiple of --instances.
    #[arg(long, default_value_t = 20)]
    attempts_factor: usize,
    #[arg(long, value_enum, default_value = "deferred")]
    refresh: RefreshArg,
    /// Output CSV; stdout if omitted.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Generate(c) => commands::generate(&GenerateArgs {
            model: match c.model {
                ModelArg::Sf => Model::StaticScaleFree,
                ModelArg::Er => Model::UniformRandom,
            },
            nodes: c.nodes,
            k: c.k,
            gamma_in: c.gamma_in.unwrap_or(c.gamma),
            gamma_out: c.gamma_out.unwrap_or(c.gamma),
            seed: c.seed,
            out: c.out,
        }),
        Command::Analyze(c) => commands::analyze(&AnalyzeArgs {
            graph: c.graph,
            labels: c.labels,
            json: c.json,
            dedup: c.dedup,
            mode_threshold: c.threshold,
        }),
        Command::Rewire(c) => commands::rewire(&RewireArgs {
            graph: c.graph,
            out_graph: c.out_graph,
            json: c.json,
            dry_run: c.dry_run,
            dedup: c.dedup,
            refresh: c.refresh.into(),
            mode_threshold: c.threshold,
        }),
        Command::Verify(c) => {
            let summary = commands::verify(&VerifyArgs {
                graph: c.graph,
                budget: c.budget,
                dedup: c.dedup,
            })?;
            println!("{summary}");
            Ok(())
        }
        Command::Sweep(c) => {
            if c.threads > 0 {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(c.threads)
                    .build_global()
                    .map_err(CliError::usage)?;
            }
            commands::sweep(&SweepArgs {
                config: SweepConfig {
                    n: c.nodes,
                    k_min: c.k_min,
                    k_max: c.k_max,
                    k_step: c.k_step,
                    instances_per_k: c.instances,
                    base_seed: c.seed,
                    gamma: c.gamma,
                    filter_input_largest: c.filter_input_largest,
                    attempts_factor: c.attempts_factor,
                    refresh: c.refresh.into(),
                },
                csv: c.csv,
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(commands::EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {:#}", e.error);
            ExitCode::from(e.code)
        }
    }
}
