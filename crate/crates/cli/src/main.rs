//! `tilegraph`: build, inspect and serve tile pyramids of laid-out graphs.
//!
//! Exit codes: 0 success, 1 other failure, 2 missing input, 3 corrupt tile
//! data, 4 port already in use.

mod commands;
mod serve;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tilegraph_core::graph::InputFormat;
use tilegraph_core::router::RoutingMode;
use tilegraph_core::tiler::output::OutputError;

#[derive(Debug, Parser)]
#[command(name = "tilegraph", version, about = "Tile pyramids with routed edges for large laid-out graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Route all edges and write manifest.json plus tiles/{z}/{x}/{y}.json.
    Build(BuildArgs),
    /// Route all edges and print the routes with search statistics.
    Route(RouteArgs),
    /// Print pyramid statistics recomputed from a tile directory.
    Stats(StatsArgs),
    /// Serve a tile directory over HTTP.
    Serve(ServeArgs),
    /// Compare route lengths against the visibility-graph optimum.
    BenchQuality(BenchArgs),
}

#[derive(Debug, Args)]
struct InputArgs {
    /// Laid-out graph (JSON document or DOT subset).
    input: PathBuf,
    #[arg(long, env = "TILEGRAPH_FORMAT", default_value = "json")]
    format: InputFormat,
    /// Obstacle padding around node boxes; defaults to an eighth of the mean node height.
    #[arg(long, env = "TILEGRAPH_PADDING")]
    padding: Option<f64>,
    /// Worker threads; 0 uses every core.
    #[arg(long, env = "TILEGRAPH_THREADS", default_value_t = 0)]
    threads: usize,
}

#[derive(Debug, Args)]
struct BuildArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Output directory.
    #[arg(short, long, env = "TILEGRAPH_OUT")]
    out: PathBuf,
    /// Maximum elements per tile.
    #[arg(long, env = "TILEGRAPH_CAPACITY", default_value_t = 500)]
    capacity: usize,
    /// Memory budget in bytes, charged at 200 bytes per element.
    #[arg(long, env = "TILEGRAPH_MEMORY_BUDGET", default_value_t = 4 << 30)]
    memory_budget: u64,
    /// Smallest tile side, in average node sizes.
    #[arg(long, env = "TILEGRAPH_MIN_TILE_FACTOR", default_value_t = 10.0)]
    min_tile_factor: f64,
    #[arg(long, env = "TILEGRAPH_MODE", default_value = "vc_dijkstra")]
    mode: RoutingMode,
    /// Leave out arrowheads (undirected rendering).
    #[arg(long, env = "TILEGRAPH_NO_ARROWHEADS")]
    no_arrowheads: bool,
}

#[derive(Debug, Args)]
struct RouteArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, env = "TILEGRAPH_MODE", default_value = "vc_dijkstra")]
    mode: RoutingMode,
    /// Run all three modes and print the comparison table instead of routes.
    #[arg(long)]
    compare: bool,
    /// Write the routes here instead of stdout.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct StatsArgs {
    dir: PathBuf,
    /// Print JSON instead of a table.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct ServeArgs {
    dir: PathBuf,
    #[arg(long, env = "TILEGRAPH_PORT", default_value_t = 8080)]
    port: u16,
    #[arg(long, env = "TILEGRAPH_HOST", default_value = "127.0.0.1")]
    host: String,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// Graph to measure; without it a seeded random suite is used.
    input: Option<PathBuf>,
    #[arg(long, env = "TILEGRAPH_FORMAT", default_value = "json")]
    format: InputFormat,
    #[arg(long, env = "TILEGRAPH_PADDING")]
    padding: Option<f64>,
    #[arg(long, env = "TILEGRAPH_MODE", default_value = "vc_dijkstra")]
    mode: RoutingMode,
    /// Random instances when no input is given.
    #[arg(long, default_value_t = 100)]
    instances: usize,
    #[arg(long, env = "TILEGRAPH_SEED", default_value_t = 1)]
    seed: u64,
    /// Write the per-edge JSON report here.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("input file {} not found", .0.display())]
    MissingInput(PathBuf),
    #[error(transparent)]
    Output(#[from] OutputError),
    #[error("port {0} is already in use")]
    PortInUse(u16),
    #[error("{0}")]
    Other(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::MissingInput(_) | CliError::Output(OutputError::Missing { .. }) => 2,
            CliError::Output(OutputError::CorruptTile { .. } | OutputError::CorruptManifest { .. }) => 3,
            CliError::PortInUse(_) => 4,
            _ => 1,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Build(a) => commands::build(a),
        Command::Route(a) => commands::route(a),
        Command::Stats(a) => commands::stats(a),
        Command::Serve(a) => serve::run(a),
        Command::BenchQuality(a) => commands::bench_quality(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("tilegraph: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
