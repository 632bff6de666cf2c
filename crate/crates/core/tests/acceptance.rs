//! Acceptance run: one PASS/FAIL line per criterion, followed by indented
//! details. Benchmark graphs are read from `$TILEGRAPH_DATA_DIR` (default
//! `<workspace>/data`) as `gameofthrones.json` and `composers.json` in the
//! JSON input format. A part that needs a missing file fails with "dataset
//! missing"; a clearly labelled run on a seeded graph of the same size is
//! printed next to it for information. The exit status is non-zero only
//! when a check that could run here fails.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use tilegraph_core::geometry::{polyline_length, Point, Rect};
use tilegraph_core::graph::{default_padding, parse_graph, InputFormat, LaidOutGraph, ParseOptions};
use tilegraph_core::oracle::{polygon_geodesic, quality_ratios, reference_dual_cost};
use tilegraph_core::ranking::{prefix_len, scale_about, SpatialHash};
use tilegraph_core::router::{funnel, greedy_vertex_cover, route_all, RouteOptions, RoutingMode, RoutingScene};
use tilegraph_core::testgen::{desk_suite, random_graph, LayoutSpec};
use tilegraph_core::tiler::clip::{meets_boundary_only_at_endpoints, split_by_midlines};
use tilegraph_core::tiler::output::write_pyramid;
use tilegraph_core::tiler::{build_pyramid, pyramid_stats, BuildReport, StopReason, TileId, TilePyramid, TilerConfig};

const SUITE_SIZE: usize = 500;
const SUITE_SEED: u64 = 1;
const STRETCH_BOUND: f64 = 2.42;

enum Part {
    Ok(String),
    Fail(String),
    Missing(String),
    Info(String),
}

#[derive(Default)]
struct Run {
    hard_failure: bool,
}

impl Run {
    fn report(&mut self, id: u32, title: &str, limit_s: Option<f64>, started: Instant, parts: Vec<Part>) {
        let secs = started.elapsed().as_secs_f64();
        let slow = limit_s.is_some_and(|l| secs >= l);
        let failed = slow || parts.iter().any(|p| matches!(p, Part::Fail(_) | Part::Missing(_)));
        let time = match limit_s {
            Some(l) => format!("{secs:.1} s, limit {l:.0} s"),
            None => format!("{secs:.1} s"),
        };
        println!("{} [{id}] {title} ({time})", if failed { "FAIL" } else { "PASS" });
        for p in &parts {
            match p {
                Part::Ok(s) => println!("       ok       {s}"),
                Part::Fail(s) => println!("       FAIL     {s}"),
                Part::Missing(s) => println!("       FAIL     (dataset missing: {s})"),
                Part::Info(s) => println!("       info     {s}"),
            }
        }
        if slow {
            println!("       FAIL     over the time limit");
        }
        if slow || parts.iter().any(|p| matches!(p, Part::Fail(_))) {
            self.hard_failure = true;
        }
    }
}

fn check(ok: bool, text: String) -> Part {
    if ok {
        Part::Ok(text)
    } else {
        Part::Fail(text)
    }
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

fn data_dir() -> PathBuf {
    match std::env::var_os("TILEGRAPH_DATA_DIR") {
        Some(d) => PathBuf::from(d),
        None => Path::new(env!("CARGO_MANIFEST_DIR")).ancestors().nth(2).expect("workspace root").join("data"),
    }
}

/// `Ok(None)` when the file is absent.
fn load(name: &str) -> Result<Option<LaidOutGraph>, String> {
    let path = data_dir().join(format!("{name}.json"));
    let Ok(bytes) = std::fs::read(&path) else {
        return Ok(None);
    };
    parse_graph(&bytes, InputFormat::Json, &ParseOptions::default())
        .map(|(g, _)| Some(g))
        .map_err(|e| format!("{}: {e}", path.display()))
}

fn missing(name: &str) -> String {
    data_dir().join(format!("{name}.json")).display().to_string()
}

fn edges_of(g: &LaidOutGraph) -> Vec<(usize, usize)> {
    g.edges.iter().map(|e| (e.source, e.target)).collect()
}

fn scene(g: &LaidOutGraph) -> RoutingScene {
    RoutingScene::for_graph(g, default_padding(g)).expect("triangulation")
}

fn searched(mode: RoutingMode) -> RouteOptions {
    RouteOptions {
        mode,
        straight_probe: false,
        keep_sleeves: true,
        ..Default::default()
    }
}

fn substitute(spec: &str, g: &LaidOutGraph) -> String {
    format!("synthetic substitute ({spec}, {} nodes, {} edges, seeded)", g.nodes.len(), g.edges.len())
}

// [1]

fn routing_optimality(suite: &[LaidOutGraph]) -> Vec<Part> {
    let (mut edges_checked, mut cost_bad, mut funnel_bad, mut failures) = (0usize, 0usize, 0usize, 0usize);
    for g in suite {
        let sc = scene(g);
        let edges = edges_of(g);
        for mode in RoutingMode::ALL {
            let (routes, stats) = route_all(&sc, &edges, &searched(mode));
            failures += stats.failures;
            for r in &routes {
                let (s, t) = edges[r.edge];
                edges_checked += 1;
                let reference = reference_dual_cost(&sc, s, t);
                if !matches!((r.cost, reference), (Some(a), Some(b)) if rel_close(a, b, 1e-9)) {
                    cost_bad += 1;
                }
                let Some(sleeve) = r.sleeve.as_ref() else {
                    funnel_bad += 1;
                    continue;
                };
                let (ps, pt) = (sc.center(s), sc.center(t));
                let len = polyline_length(&funnel(sleeve, &sc.cdt.points, ps, pt).vertices);
                let ring = sleeve.corridor(&sc.cdt.points, ps, pt);
                match polygon_geodesic(&ring, ps, pt) {
                    Some((geo, _)) if rel_close(len, geo, 1e-9) => {}
                    _ => funnel_bad += 1,
                }
            }
        }
    }
    vec![
        check(
            cost_bad == 0 && failures == 0,
            format!("{edges_checked} routed edges (3 modes): dual cost = reference Dijkstra to 1e-9 rel, {cost_bad} mismatches, {failures} failures"),
        ),
        check(
            funnel_bad == 0,
            format!("funnel length = in-sleeve geodesic to 1e-9 rel, {funnel_bad} mismatches"),
        ),
    ]
}

// [2]

fn ratios_for(g: &LaidOutGraph) -> Vec<f64> {
    let sc = scene(g);
    let edges = edges_of(g);
    let (routes, _) = route_all(&sc, &edges, &RouteOptions::default());
    quality_ratios(&sc, &edges, &routes)
}

fn ratio_summary(r: &[f64]) -> (f64, f64, usize) {
    let mean = r.iter().sum::<f64>() / r.len().max(1) as f64;
    let max = r.iter().copied().fold(0.0, f64::max);
    let over = r.iter().filter(|&&x| x > STRETCH_BOUND).count();
    (mean, max, over)
}

fn quality(suite: &[LaidOutGraph], got: Option<&LaidOutGraph>) -> Vec<Part> {
    let mut parts = Vec::new();
    let all: Vec<f64> = suite.iter().flat_map(ratios_for).collect();
    let below = all.iter().filter(|&&x| x < 1.0 - 1e-9).count();
    let (mean, max, over) = ratio_summary(&all);
    parts.push(check(
        over == 0 && mean <= 1.10 && below == 0,
        format!(
            "random suite: {} edges, max ratio {max:.4} (<= {STRETCH_BOUND}), {over} over, mean {mean:.4} (<= 1.10), {below} below the optimum",
            all.len()
        ),
    ));
    match got {
        Some(g) => {
            let r = ratios_for(g);
            let (mean, max, over) = ratio_summary(&r);
            parts.push(check(
                over == 0 && mean <= 1.10,
                format!("gameofthrones: {} edges, max ratio {max:.4}, {over} over, mean {mean:.4}", r.len()),
            ));
        }
        None => {
            parts.push(Part::Missing(missing("gameofthrones")));
            let g = random_graph(&LayoutSpec::got_sized(), 0);
            let r = ratios_for(&g);
            let (mean, max, over) = ratio_summary(&r);
            parts.push(Part::Info(format!(
                "{}: max ratio {max:.4}, {over} over {STRETCH_BOUND}, mean {mean:.4}",
                substitute("GoT-sized", &g)
            )));
        }
    }
    parts
}

// [3]

/// (cover size, is a true cover, distinct sources)
fn cover_of(g: &LaidOutGraph) -> (usize, bool, usize) {
    let edges = edges_of(g);
    let cover = greedy_vertex_cover(g.nodes.len(), &edges);
    let mut is_root = vec![false; g.nodes.len()];
    for &r in &cover.roots {
        is_root[r] = true;
    }
    let valid = edges.iter().all(|&(a, b)| a == b || is_root[a] || is_root[b])
        && edges
            .iter()
            .zip(&cover.assignment)
            .all(|(&(a, b), &r)| is_root[r] && (r == a || r == b));
    let mut sources: Vec<usize> = edges.iter().map(|&(a, b)| a.min(b)).collect();
    sources.sort_unstable();
    sources.dedup();
    (cover.len(), valid, sources.len())
}

fn vertex_cover(got: Option<&LaidOutGraph>, composers: Option<&LaidOutGraph>) -> Vec<Part> {
    let mut parts = Vec::new();
    for (name, data, target, spec) in [
        ("gameofthrones", got, 198.0, LayoutSpec::got_sized()),
        ("composers", composers, 1281.0, LayoutSpec::composers_sized()),
    ] {
        match data {
            Some(g) => {
                let (size, valid, sources) = cover_of(g);
                let within = (size as f64 - target).abs() <= 0.1 * target;
                parts.push(check(
                    valid && within,
                    format!("{name}: cover {size} (target {target} +-10%), {sources} distinct sources, valid cover: {valid}"),
                ));
            }
            None => {
                parts.push(Part::Missing(missing(name)));
                let g = random_graph(&spec, 0);
                let (size, valid, sources) = cover_of(&g);
                let text = format!(
                    "{}: cover {size} from {sources} distinct sources, valid cover: {valid}",
                    substitute(&format!("{name}-sized"), &g)
                );
                parts.push(if valid { Part::Info(text) } else { Part::Fail(text) });
            }
        }
    }
    parts
}

// [4]

/// (edges whose cost differs between modes, expansions per mode in
/// `RoutingMode::ALL` order)
fn mode_costs(g: &LaidOutGraph) -> (usize, Vec<(RoutingMode, u64)>) {
    let sc = scene(g);
    let edges = edges_of(g);
    let options = |mode| RouteOptions {
        mode,
        straight_probe: false,
        ..Default::default()
    };
    let runs: Vec<_> = RoutingMode::ALL
        .iter()
        .map(|&m| (m, route_all(&sc, &edges, &options(m))))
        .collect();
    let base = &runs[0].1 .0;
    let mut differing = 0;
    for (_, (routes, _)) in &runs[1..] {
        for (a, b) in base.iter().zip(routes) {
            let same = matches!((a.cost, b.cost), (Some(x), Some(y)) if rel_close(x, y, 1e-9));
            if !same {
                differing += 1;
            }
        }
    }
    (differing, runs.iter().map(|(m, (_, s))| (*m, s.expansions)).collect())
}

fn expansions_text(exp: &[(RoutingMode, u64)]) -> String {
    exp.iter().map(|(m, e)| format!("{m} {e}")).collect::<Vec<_>>().join(", ")
}

fn fewer_than_astar(exp: &[(RoutingMode, u64)]) -> bool {
    let get = |mode| exp.iter().find(|(m, _)| *m == mode).unwrap().1;
    let astar = get(RoutingMode::Astar);
    get(RoutingMode::Dijkstra) < astar && get(RoutingMode::VcDijkstra) < astar
}

fn mode_consistency(got: Option<&LaidOutGraph>, composers: Option<&LaidOutGraph>) -> Vec<Part> {
    let mut parts = Vec::new();
    for (name, data, spec, gate_expansions) in [
        ("gameofthrones", got, LayoutSpec::got_sized(), true),
        ("composers", composers, LayoutSpec::composers_sized(), false),
    ] {
        match data {
            Some(g) => {
                let (differing, exp) = mode_costs(g);
                let fewer = !gate_expansions || fewer_than_astar(&exp);
                parts.push(check(
                    differing == 0 && fewer,
                    format!("{name}: {differing} per-edge cost differences; expansions {}", expansions_text(&exp)),
                ));
            }
            None => {
                parts.push(Part::Missing(missing(name)));
                let g = random_graph(&spec, 0);
                let (differing, exp) = mode_costs(&g);
                let text = format!(
                    "{}: {differing} per-edge cost differences; expansions {}",
                    substitute(&format!("{name}-sized"), &g),
                    expansions_text(&exp)
                );
                parts.push(if differing == 0 { Part::Info(text) } else { Part::Fail(text) });
            }
        }
    }
    parts
}

// [5]

fn build(g: &LaidOutGraph, threads: usize) -> (TilePyramid, BuildReport) {
    let config = TilerConfig {
        routing: RouteOptions {
            threads,
            ..Default::default()
        },
        ..Default::default()
    };
    build_pyramid(g, &config).expect("pyramid build")
}

fn structure_text(p: &TilePyramid, r: &BuildReport) -> String {
    format!(
        "{} levels, stop {:?}, unfiltered finest max {}, rendered max {} at level {}",
        p.levels.len(),
        p.stop,
        p.unfiltered_max,
        r.stats.max_per_tile,
        r.stats.max_tile_level
    )
}

fn pyramid_structure(got: Option<&(LaidOutGraph, TilePyramid, BuildReport)>, substitute_run: &(LaidOutGraph, TilePyramid, BuildReport)) -> Vec<Part> {
    match got {
        Some((_, p, r)) => {
            let levels_ok = p.levels.len() == 5;
            let capacity_ok = p.stop != StopReason::Capacity || p.unfiltered_max <= 500;
            let max = r.stats.max_per_tile as f64;
            let max_ok = (max - 324.0).abs() <= 0.15 * 324.0 && r.stats.max_tile_level == 4;
            vec![
                check(levels_ok, format!("gameofthrones: {} levels (target 5)", p.levels.len())),
                check(capacity_ok, format!("unfiltered finest level max {} (<= 500 under stop {:?})", p.unfiltered_max, p.stop)),
                check(max_ok, format!("rendered max per tile {} at level {} (target 324 +-15% at level 4)", r.stats.max_per_tile, r.stats.max_tile_level)),
            ]
        }
        None => {
            let (g, p, r) = substitute_run;
            let capacity_ok = p.stop != StopReason::Capacity || p.unfiltered_max <= 500;
            let text = format!("{}: {}", substitute("GoT-sized", g), structure_text(p, r));
            vec![
                Part::Missing(missing("gameofthrones")),
                if capacity_ok { Part::Info(text) } else { Part::Fail(text) },
            ]
        }
    }
}

// [6]

fn clip_violations(p: &TilePyramid) -> (usize, usize) {
    let (mut clips, mut bad) = (0, 0);
    for level in &p.levels {
        for (&(x, y), tile) in &level.tiles {
            let rect = p.grid.rect(TileId { z: level.z, x, y });
            for c in &tile.clips {
                clips += 1;
                if !meets_boundary_only_at_endpoints(&c.path, &rect) {
                    bad += 1;
                }
            }
        }
    }
    (clips, bad)
}

fn fixture_sub_clips() -> (bool, String) {
    let p = Point::new;
    let tile = Rect::from_corners(p(0.0, 0.0), p(5.0, 5.0));
    let path = [p(0.5, 3.8), p(1.5, 1.2), p(3.4, 1.7), p(3.7, 3.3), p(4.1, 2.5), p(4.55, 3.3), p(5.0, 3.5)];
    let pieces = split_by_midlines(&path, tile.center());
    let quads: Vec<(u32, u32)> = pieces.iter().map(|(q, _)| *q).collect();
    let audited = pieces.iter().all(|(q, piece)| {
        let min = p(2.5 * q.0 as f64, 2.5 * q.1 as f64);
        meets_boundary_only_at_endpoints(piece, &Rect::from_corners(min, min + p(2.5, 2.5)))
    });
    let ok = quads == [(0, 1), (0, 0), (1, 0), (1, 1), (1, 1)] && audited;
    (ok, format!("fixture re-split: {} sub-clips in quadrants {quads:?}, boundary audit {audited}", pieces.len()))
}

fn clip_invariants(got: Option<&(LaidOutGraph, TilePyramid, BuildReport)>, substitute_run: &(LaidOutGraph, TilePyramid, BuildReport)) -> Vec<Part> {
    let (fixture_ok, fixture_text) = fixture_sub_clips();
    let mut parts = vec![check(fixture_ok, fixture_text)];
    match got {
        Some((_, p, _)) => {
            let (clips, bad) = clip_violations(p);
            parts.push(check(bad == 0, format!("gameofthrones pyramid: {clips} clips, {bad} touch the tile boundary off their endpoints")));
        }
        None => {
            parts.push(Part::Missing(missing("gameofthrones")));
            let (g, p, _) = substitute_run;
            let (clips, bad) = clip_violations(p);
            let text = format!("{}: {clips} clips, {bad} touch the tile boundary off their endpoints", substitute("GoT-sized", g));
            parts.push(if bad == 0 { Part::Info(text) } else { Part::Fail(text) });
        }
    }
    parts
}

// [7]

fn selection_audit(g: &LaidOutGraph, p: &TilePyramid) -> Result<usize, String> {
    let z_max = p.finest();
    for level in &p.levels {
        let depth = z_max - level.z;
        let sel = &level.selection;
        if sel.selected.len() + sel.dropped.len() != prefix_len(g.nodes.len(), depth) {
            return Err(format!("level {}: wrong prefix length", level.z));
        }
        if sel.selected.first().is_some_and(|s| s.1 != 2f64.powi(depth as i32)) {
            return Err(format!("level {}: top scale is not 2^{depth}", level.z));
        }
        if sel.selected.windows(2).any(|w| w[1].1 > w[0].1) {
            return Err(format!("level {}: scales increase", level.z));
        }
        let drawn: Vec<Rect> = sel
            .selected
            .iter()
            .map(|&(v, s)| scale_about(&g.nodes[v].bbox, g.nodes[v].center, s))
            .collect();
        for i in 0..drawn.len() {
            for j in i + 1..drawn.len() {
                if drawn[i].overlaps(&drawn[j]) {
                    return Err(format!("level {}: rendered boxes {i} and {j} overlap", level.z));
                }
            }
        }
    }
    Ok(p.levels.len())
}

fn hash_vs_brute_force() -> (bool, String) {
    use rand::{RngExt, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let boxes: Vec<Rect> = (0..1000)
        .map(|_| {
            let c = Point::new(rng.random_range(0.0..100.0), rng.random_range(0.0..100.0));
            Rect::from_center(c, rng.random_range(0.1..4.0), rng.random_range(0.1..4.0))
        })
        .collect();
    let mut hash = SpatialHash::new(4.0);
    for b in &boxes {
        hash.insert(*b);
    }
    let mut pairs = 0;
    let mut mismatches = 0;
    for q in &boxes {
        let brute: Vec<usize> = (0..boxes.len()).filter(|&i| boxes[i].overlaps(q)).collect();
        pairs += brute.len();
        if hash.overlapping(q) != brute {
            mismatches += 1;
        }
    }
    (
        mismatches == 0,
        format!("spatial hash vs O(n^2) on 1000 random boxes: {pairs} overlaps, {mismatches} differing queries"),
    )
}

fn selection_invariants(got: Option<&(LaidOutGraph, TilePyramid, BuildReport)>, substitute_run: &(LaidOutGraph, TilePyramid, BuildReport)) -> Vec<Part> {
    let mut parts = Vec::new();
    let (label, (g, p, _)) = match got {
        Some(run) => ("gameofthrones pyramid".to_string(), run),
        None => (format!("{} pyramid", substitute("GoT-sized", &substitute_run.0)), substitute_run),
    };
    parts.push(match selection_audit(g, p) {
        Ok(levels) => Part::Ok(format!("{label}: {levels} levels, scales non-increasing, top 2^k, boxes pairwise disjoint (brute force)")),
        Err(e) => Part::Fail(format!("{label}: {e}")),
    });
    let (ok, text) = hash_vs_brute_force();
    parts.push(check(ok, text));
    parts
}

// [8]

fn tree(dir: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in std::fs::read_dir(&d).expect("readable output") {
            let path = entry.expect("dir entry").path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let bytes = std::fs::read(&path).expect("readable file");
                out.insert(path.strip_prefix(dir).unwrap().to_path_buf(), bytes);
            }
        }
    }
    out
}

fn written(g: &LaidOutGraph, threads: usize) -> BTreeMap<PathBuf, Vec<u8>> {
    let (p, _) = build(g, threads);
    let dir = tempfile::tempdir().expect("temp dir");
    write_pyramid(dir.path(), g, &p).expect("write pyramid");
    tree(dir.path())
}

fn determinism_text(g: &LaidOutGraph) -> (bool, String) {
    let a = written(g, 1);
    let b = written(g, 1);
    let c = written(g, 8);
    let ok = a == b && a == c;
    (ok, format!("{} files; run 1 = run 2: {}, threads 8 = threads 1: {}", a.len(), a == b, a == c))
}

fn determinism(got: Option<&LaidOutGraph>) -> Vec<Part> {
    match got {
        Some(g) => {
            let (ok, text) = determinism_text(g);
            vec![check(ok, format!("gameofthrones: {text}"))]
        }
        None => {
            let g = random_graph(&LayoutSpec::got_sized(), 0);
            let (ok, text) = determinism_text(&g);
            let text = format!("{}: {text}", substitute("GoT-sized", &g));
            vec![Part::Missing(missing("gameofthrones")), if ok { Part::Info(text) } else { Part::Fail(text) }]
        }
    }
}

fn main() -> ExitCode {
    let mut run = Run::default();
    let mut datasets = Vec::new();
    for name in ["gameofthrones", "composers"] {
        match load(name) {
            Ok(g) => datasets.push(g),
            Err(e) => {
                println!("cannot read dataset: {e}");
                run.hard_failure = true;
                datasets.push(None);
            }
        }
    }
    let (got, composers) = (datasets[0].as_ref(), datasets[1].as_ref());
    println!("data directory: {}", data_dir().display());

    let started = Instant::now();
    let suite = desk_suite(SUITE_SIZE, SUITE_SEED);
    let parts = routing_optimality(&suite);
    run.report(1, "routing optimality on 500 random desk instances", Some(60.0), started, parts);

    let started = Instant::now();
    let parts = quality(&suite, got);
    run.report(2, "route quality vs visibility optimum", Some(300.0), started, parts);

    let started = Instant::now();
    let parts = vertex_cover(got, composers);
    run.report(3, "vertex cover size", Some(10.0), started, parts);

    let started = Instant::now();
    let parts = mode_consistency(got, composers);
    run.report(4, "mode consistency", None, started, parts);

    let started = Instant::now();
    let got_run = got.map(|g| {
        let (p, r) = build(g, 0);
        (g.clone(), p, r)
    });
    let substitute_run = {
        let g = random_graph(&LayoutSpec::got_sized(), 0);
        let (p, r) = build(&g, 0);
        (g, p, r)
    };
    let parts = pyramid_structure(got_run.as_ref(), &substitute_run);
    run.report(5, "pyramid structure with C = 500", Some(120.0), started, parts);

    let started = Instant::now();
    let parts = clip_invariants(got_run.as_ref(), &substitute_run);
    run.report(6, "clip invariants", None, started, parts);

    let started = Instant::now();
    let parts = selection_invariants(got_run.as_ref(), &substitute_run);
    run.report(7, "selection invariants", None, started, parts);

    let started = Instant::now();
    let parts = determinism(got);
    run.report(8, "determinism", None, started, parts);

    let started = Instant::now();
    let stats = pyramid_stats(&substitute_run.1);
    run.report(
        9,
        "wall-clock times, browser smoothness and layout-specific ratios are not reproduced",
        None,
        started,
        vec![Part::Info(format!(
            "not gated; criteria 1, 2, 6 and 7 cover the same properties (substitute pyramid has {} levels)",
            stats.levels
        ))],
    );

    if run.hard_failure {
        println!("acceptance: a check that runs in this environment failed");
        ExitCode::FAILURE
    } else {
        println!("acceptance: every runnable check passed; FAIL lines above are for missing datasets only");
        ExitCode::SUCCESS
    }
}
