use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use tilegraph_core::graph::{default_padding, parse_document, LaidOutGraph, ParseOptions};
use tilegraph_core::oracle::quality_ratios;
use tilegraph_core::router::{route_all, Route, RouteKind, RouteOptions, RoutingMode, RoutingScene, RoutingStats};
use tilegraph_core::testgen::desk_suite;
use tilegraph_core::tiler::output::{read_stats, write_pyramid, OutputError};
use tilegraph_core::tiler::{build_pyramid, TilerConfig};

use crate::{BenchArgs, BuildArgs, CliError, InputArgs, RouteArgs, StatsArgs};

struct Loaded {
    graph: LaidOutGraph,
    parse_seconds: f64,
    ingest_seconds: f64,
}

fn load(path: &Path, format: tilegraph_core::graph::InputFormat) -> Result<Loaded, CliError> {
    let started = Instant::now();
    let bytes = match fs::read(path) {
        Ok(b) => b,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Err(CliError::MissingInput(path.to_path_buf())),
        Err(e) => return Err(CliError::Other(format!("{}: {e}", path.display()))),
    };
    let (doc, warnings) =
        parse_document(&bytes, format).map_err(|e| CliError::Other(format!("{}: {e}", path.display())))?;
    let parse_seconds = started.elapsed().as_secs_f64();
    for w in warnings {
        eprintln!("warning: {}", w.message);
    }
    let started = Instant::now();
    let graph = LaidOutGraph::from_document(doc, &ParseOptions::default())
        .map_err(|e| CliError::Other(format!("{}: {e}", path.display())))?;
    Ok(Loaded {
        graph,
        parse_seconds,
        ingest_seconds: started.elapsed().as_secs_f64(),
    })
}

fn padding_for(g: &LaidOutGraph, padding: Option<f64>) -> Result<f64, CliError> {
    match padding {
        Some(p) if !(p > 0.0 && p.is_finite()) => Err(CliError::Other("--padding must be positive".into())),
        Some(p) => Ok(p),
        None => Ok(default_padding(g)),
    }
}

fn scene_for(g: &LaidOutGraph, padding: f64) -> Result<RoutingScene, CliError> {
    RoutingScene::for_graph(g, padding).map_err(|e| CliError::Other(e.to_string()))
}

fn edge_pairs(g: &LaidOutGraph) -> Vec<(usize, usize)> {
    g.edges.iter().map(|e| (e.source, e.target)).collect()
}

pub fn build(args: BuildArgs) -> Result<(), CliError> {
    let total = Instant::now();
    let InputArgs {
        input,
        format,
        padding,
        threads,
    } = args.input;
    if args.capacity == 0 {
        return Err(CliError::Other("--capacity must be positive".into()));
    }
    if args.min_tile_factor.is_nan() || args.min_tile_factor <= 0.0 || args.memory_budget == 0 {
        return Err(CliError::Other("--min-tile-factor and --memory-budget must be positive".into()));
    }
    let loaded = load(&input, format)?;
    let g = &loaded.graph;
    let config = TilerConfig {
        capacity: args.capacity,
        min_tile_factor: args.min_tile_factor,
        memory_budget: args.memory_budget,
        padding: Some(padding_for(g, padding)?),
        routing: RouteOptions {
            mode: args.mode,
            threads,
            ..RouteOptions::default()
        },
        arrowheads: !args.no_arrowheads,
    };
    let (pyramid, report) = build_pyramid(g, &config).map_err(|e| CliError::Other(e.to_string()))?;
    let files = write_pyramid(&args.out, g, &pyramid)?;
    let failures: usize = report.levels.iter().map(|l| l.routing.failures).sum();

    let mut out = io::stdout().lock();
    let s = &report.stats;
    let _ = writeln!(
        out,
        "{}: {} nodes, {} edges -> {} levels, max {} elements per tile (level {}), stopped by {:?}, {} files",
        input.display(),
        g.nodes.len(),
        g.edges.len(),
        s.levels,
        s.max_per_tile,
        s.max_tile_level,
        report.stop,
        files
    );
    let _ = writeln!(out, "{:>5} {:>7} {:>9} {:>7} {:>8} {:>7}", "level", "tiles", "max/tile", "nodes", "dropped", "edges");
    for l in &report.levels {
        let _ = writeln!(
            out,
            "{:>5} {:>7} {:>9} {:>7} {:>8} {:>7}",
            l.z, l.tiles, l.max_per_tile, l.nodes, l.dropped, l.edges
        );
    }
    if failures > 0 {
        let _ = writeln!(out, "warning: {failures} edges fell back to straight segments");
    }
    let _ = writeln!(out, "{:<14} {:>10}", "stage", "seconds");
    for (stage, secs) in [
        ("parse", loaded.parse_seconds),
        ("layout-ingest", loaded.ingest_seconds),
        ("routing", report.routing_seconds),
        ("tiling", report.tiling_seconds),
        ("total", total.elapsed().as_secs_f64()),
    ] {
        let _ = writeln!(out, "{stage:<14} {secs:>10.3}");
    }
    Ok(())
}

#[derive(Serialize)]
struct RouteJson<'a> {
    source: &'a str,
    target: &'a str,
    kind: RouteKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    cost: Option<f64>,
    stub: bool,
    path: Vec<[f64; 2]>,
}

#[derive(Serialize)]
struct RoutesJson<'a> {
    mode: RoutingMode,
    stats: &'a RoutingStats,
    routes: Vec<RouteJson<'a>>,
}

fn run_mode(scene: &RoutingScene, edges: &[(usize, usize)], mode: RoutingMode, threads: usize) -> (Vec<Route>, RoutingStats) {
    let options = RouteOptions {
        mode,
        threads,
        ..RouteOptions::default()
    };
    route_all(scene, edges, &options)
}

pub fn route(args: RouteArgs) -> Result<(), CliError> {
    let loaded = load(&args.input.input, args.input.format)?;
    let g = &loaded.graph;
    let scene = scene_for(g, padding_for(g, args.input.padding)?)?;
    let edges = edge_pairs(g);
    if args.compare {
        return compare(g, &scene, &edges, args.input.threads, &args.input.input);
    }
    let (routes, stats) = run_mode(&scene, &edges, args.mode, args.input.threads);
    let doc = RoutesJson {
        mode: args.mode,
        stats: &stats,
        routes: routes
            .iter()
            .map(|r| {
                let (source, target) = g.edge_ids(r.edge);
                RouteJson {
                    source,
                    target,
                    kind: r.kind,
                    cost: r.cost,
                    stub: r.stub,
                    path: r.path.vertices.iter().map(|p| [p.x, p.y]).collect(),
                }
            })
            .collect(),
    };
    let text = serde_json::to_string(&doc).map_err(|e| CliError::Other(e.to_string()))?;
    match &args.out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Other(format!("{}: {e}", path.display())))?,
        None => println!("{text}"),
    }
    eprintln!(
        "{} edges: {} straight, {} fallbacks, {} searches, {} expansions",
        stats.edges, stats.probe_hits, stats.failures, stats.roots_launched, stats.expansions
    );
    Ok(())
}

fn same_cost(a: Option<f64>, b: Option<f64>) -> bool {
    match (a, b) {
        (Some(x), Some(y)) => (x - y).abs() <= 1e-9 * x.abs().max(y.abs()).max(1.0),
        (None, None) => true,
        _ => false,
    }
}

fn compare(g: &LaidOutGraph, scene: &RoutingScene, edges: &[(usize, usize)], threads: usize, input: &Path) -> Result<(), CliError> {
    let runs: Vec<(RoutingMode, Vec<Route>, RoutingStats)> = RoutingMode::ALL
        .iter()
        .map(|&m| {
            let (routes, stats) = run_mode(scene, edges, m, threads);
            (m, routes, stats)
        })
        .collect();
    let mismatches = (0..edges.len())
        .filter(|&i| {
            let c = runs[0].1[i].cost;
            runs[1..].iter().any(|r| !same_cost(c, r.1[i].cost))
        })
        .count();
    let secs = |k: usize| runs[k].2.search_seconds;
    let gain = |slow: f64, fast: f64| if slow > 0.0 { 100.0 * (slow - fast) / slow } else { 0.0 };
    let name = input.file_stem().and_then(|s| s.to_str()).unwrap_or("graph");
    println!(
        "{:<16} {:>7} {:>7} {:>9} {:>9} {:>9} {:>7} {:>7}",
        "graph", "srcs", "vc", "astar_s", "dj_s", "vc_dj_s", "dj/a*", "vc/dj"
    );
    println!(
        "{:<16} {:>7} {:>7} {:>9.3} {:>9.3} {:>9.3} {:>+6.0}% {:>+6.0}%",
        name,
        runs[1].2.distinct_sources,
        runs[2].2.roots_launched,
        secs(0),
        secs(1),
        secs(2),
        gain(secs(0), secs(1)),
        gain(secs(1), secs(2))
    );
    println!("{:<12} {:>12} {:>8}", "mode", "expansions", "trees");
    for (m, _, s) in &runs {
        println!("{:<12} {:>12} {:>8}", m.as_str(), s.expansions, s.roots_launched);
    }
    println!(
        "{} nodes, {} edges, {} straight; per-edge costs identical across modes: {}",
        g.nodes.len(),
        edges.len(),
        runs[0].2.probe_hits,
        if mismatches == 0 { "yes".to_string() } else { format!("no ({mismatches} edges differ)") }
    );
    if mismatches > 0 {
        return Err(CliError::Other(format!("{mismatches} edges have mode-dependent costs")));
    }
    Ok(())
}

pub fn stats(args: StatsArgs) -> Result<(), CliError> {
    let (manifest, stats) = read_stats(&args.dir)?;
    if stats != manifest.stats {
        return Err(OutputError::CorruptManifest {
            path: args.dir.join("manifest.json"),
            message: "statistics do not match the tile files".into(),
        }
        .into());
    }
    if args.json {
        println!("{}", serde_json::to_string(&stats).map_err(|e| CliError::Other(e.to_string()))?);
        return Ok(());
    }
    let name = args
        .dir
        .file_name()
        .and_then(|s| s.to_str())
        .unwrap_or("pyramid");
    println!("{:<16} {:>8} {:>13} {:>16}", "graph", "levels", "max per tile", "max tile level");
    println!(
        "{:<16} {:>8} {:>13} {:>16}",
        name, stats.levels, stats.max_per_tile, stats.max_tile_level
    );
    println!("{:>5} {:>7} {:>10} {:>9}", "level", "tiles", "elements", "max/tile");
    for z in 0..stats.levels {
        println!(
            "{:>5} {:>7} {:>10} {:>9}",
            z, stats.tiles_per_level[z], stats.elements_per_level[z], stats.max_per_level[z]
        );
    }
    Ok(())
}

#[derive(Serialize)]
struct QualityRow {
    instance: usize,
    source: String,
    target: String,
    route: f64,
    optimum: f64,
    ratio: f64,
}

#[derive(Serialize)]
struct QualityReport {
    edges: usize,
    mean: f64,
    max: f64,
    over_bound: usize,
    rows: Vec<QualityRow>,
}

/// Worst-case stretch of a taut sleeve path against the visibility optimum.
const STRETCH_BOUND: f64 = 2.42;

pub fn bench_quality(args: BenchArgs) -> Result<(), CliError> {
    let graphs = match &args.input {
        Some(path) => vec![load(path, args.format)?.graph],
        None => desk_suite(args.instances, args.seed),
    };
    let mut rows = Vec::new();
    for (k, g) in graphs.iter().enumerate() {
        let scene = scene_for(g, padding_for(g, args.padding)?)?;
        let edges = edge_pairs(g);
        let (routes, _) = run_mode(&scene, &edges, args.mode, 0);
        let ratios = quality_ratios(&scene, &edges, &routes);
        for (r, ratio) in routes.iter().zip(ratios) {
            let (s, t) = g.edge_ids(r.edge);
            rows.push(QualityRow {
                instance: k,
                source: s.to_string(),
                target: t.to_string(),
                route: r.center_length,
                optimum: r.center_length / ratio,
                ratio,
            });
        }
    }
    let n = rows.len();
    let mean = if n > 0 { rows.iter().map(|r| r.ratio).sum::<f64>() / n as f64 } else { 0.0 };
    let max = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    let over_bound = rows.iter().filter(|r| r.ratio.is_nan() || r.ratio > STRETCH_BOUND).count();
    let mut out = io::stdout().lock();
    let _ = writeln!(
        out,
        "{:>8} {:>12} {:>12} {:>14} {:>14} {:>8}",
        "instance", "source", "target", "route", "optimum", "ratio"
    );
    for r in &rows {
        let _ = writeln!(
            out,
            "{:>8} {:>12} {:>12} {:>14.6} {:>14.6} {:>8.4}",
            r.instance, r.source, r.target, r.route, r.optimum, r.ratio
        );
    }
    let _ = writeln!(out, "edges {n}  mean {mean:.4}  max {max:.4}  over {STRETCH_BOUND}: {over_bound}");
    if let Some(path) = &args.json {
        let report = QualityReport {
            edges: n,
            mean,
            max,
            over_bound,
            rows,
        };
        let text = serde_json::to_string(&report).map_err(|e| CliError::Other(e.to_string()))?;
        fs::write(path, text).map_err(|e| CliError::Other(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}
