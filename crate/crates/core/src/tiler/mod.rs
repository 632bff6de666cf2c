//! Tile pyramid construction.
//!
//! Growth splits the full-resolution drawing until every tile is under
//! capacity (or a size or memory limit hits). That fixes the finest level
//! `Z`. Every coarser level is then rebuilt from a PageRank prefix of the
//! nodes, drawn at adaptive scales and rerouted among themselves.

pub mod clip;
pub mod output;

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

pub use clip::{bundle_clips, clip_to_rect, meets_boundary_only_at_endpoints, split_by_midlines, EdgeClip, Quadrant};

use crate::cdt::CdtError;
use crate::geometry::{Point, Polyline, Rect};
use crate::graph::{build_obstacles, default_padding, LaidOutGraph};
use crate::ranking::{
    level_prefix, pagerank, rank_order, scale_about, select_with_adaptive_scale, LevelSelection, DAMPING,
    MAX_ITERATIONS, TOLERANCE,
};
use crate::router::{route_all, Route, RouteOptions, RoutingScene, RoutingStats};

/// Memory charged per element by the budget check.
pub const BYTES_PER_ELEMENT: u64 = 200;

/// Safety cap on growth depth; tiles this small are far below any node.
pub const MAX_DEPTH: u32 = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct TileId {
    pub z: u32,
    pub x: u32,
    pub y: u32,
}

/// The root square and the tile geometry below it. Tile `(x, y)` at level
/// `z` spans `[origin + x * side_z, origin + (x + 1) * side_z]`, y up.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TileGrid {
    pub origin: Point,
    pub side: f64,
}

impl TileGrid {
    /// Smallest power-of-two square centered on `bounds`.
    pub fn for_bounds(bounds: &Rect) -> Self {
        let extent = bounds.width().max(bounds.height());
        let side = if extent > 0.0 { 2f64.powi(extent.log2().ceil() as i32) } else { 1.0 };
        // log2 rounding can land one power short.
        let side = if side < extent { side * 2.0 } else { side };
        let c = bounds.center();
        TileGrid {
            origin: Point::new(c.x - 0.5 * side, c.y - 0.5 * side),
            side,
        }
    }

    pub fn root(&self) -> Rect {
        Rect {
            min: self.origin,
            max: Point::new(self.origin.x + self.side, self.origin.y + self.side),
        }
    }

    pub fn tile_side(&self, z: u32) -> f64 {
        self.side * 0.5f64.powi(z as i32)
    }

    fn coord(&self, z: u32, k: u32) -> (f64, f64) {
        let s = self.tile_side(z);
        (self.origin.x + k as f64 * s, self.origin.y + k as f64 * s)
    }

    pub fn rect(&self, id: TileId) -> Rect {
        let s = self.tile_side(id.z);
        let f = |o: f64, k: u32| o + k as f64 * s;
        Rect {
            min: Point::new(f(self.origin.x, id.x), f(self.origin.y, id.y)),
            max: Point::new(f(self.origin.x, id.x + 1), f(self.origin.y, id.y + 1)),
        }
    }

    /// Crossing point of a tile's midlines; equal to its children's shared corner.
    pub fn center(&self, id: TileId) -> Point {
        let (cx, _) = self.coord(id.z + 1, 2 * id.x + 1);
        let (_, cy) = self.coord(id.z + 1, 2 * id.y + 1);
        Point::new(cx, cy)
    }

    /// Tile at level `z` holding `p`, ties toward lower x then lower y.
    /// `None` outside the root square.
    pub fn locate(&self, z: u32, p: Point) -> Option<(u32, u32)> {
        if !self.root().contains(p) {
            return None;
        }
        let (mut x, mut y) = (0u32, 0u32);
        for level in 0..z {
            let q = clip::quadrant_of(p, self.center(TileId { z: level, x, y }));
            x = 2 * x + q.0;
            y = 2 * y + q.1;
        }
        Some((x, y))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodeItem {
    pub node: usize,
    /// Box at the level's display scale.
    pub bbox: Rect,
    pub scale: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LabelOwner {
    Node(usize),
    Edge(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LabelItem {
    pub owner: LabelOwner,
    pub anchor: Point,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArrowItem {
    pub edge: usize,
    pub tip: Point,
    /// Unit vector along the last route segment.
    pub dir: Point,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct TileData {
    pub nodes: Vec<NodeItem>,
    pub clips: Vec<EdgeClip>,
    pub labels: Vec<LabelItem>,
    pub arrowheads: Vec<ArrowItem>,
}

impl TileData {
    pub fn element_count(&self) -> usize {
        self.nodes.len() + self.clips.len() + self.labels.len() + self.arrowheads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.element_count() == 0
    }
}

pub type TileMap = BTreeMap<(u32, u32), TileData>;

/// Everything drawn at one level before it is cut into tiles.
#[derive(Debug, Clone, Default)]
pub struct LevelContent {
    pub nodes: Vec<NodeItem>,
    /// `(edge index, trimmed route)` in edge order.
    pub routes: Vec<(usize, Polyline)>,
    pub labels: Vec<LabelItem>,
    pub arrowheads: Vec<ArrowItem>,
}

/// Anchors node labels at node centers, edge labels at the route's arc
/// length midpoint, and one arrowhead at each route's end.
pub fn place_labels_and_arrowheads(
    g: &LaidOutGraph,
    nodes: &[NodeItem],
    routes: &[(usize, Polyline)],
    arrowheads: bool,
) -> (Vec<LabelItem>, Vec<ArrowItem>) {
    let mut labels = Vec::new();
    for n in nodes {
        if g.nodes[n.node].label.is_some() {
            labels.push(LabelItem {
                owner: LabelOwner::Node(n.node),
                anchor: n.bbox.center(),
            });
        }
    }
    for (e, path) in routes {
        if g.edges[*e].label.is_some() {
            labels.push(LabelItem {
                owner: LabelOwner::Edge(*e),
                anchor: path.midpoint(),
            });
        }
    }
    let mut arrows = Vec::new();
    if arrowheads {
        for (e, path) in routes {
            let v = &path.vertices;
            let tip = v[v.len() - 1];
            let edge = &g.edges[*e];
            let dir = (tip - v[v.len() - 2])
                .normalized()
                .or_else(|| (g.nodes[edge.target].center - g.nodes[edge.source].center).normalized())
                .unwrap_or(Point::new(1.0, 0.0));
            arrows.push(ArrowItem { edge: *e, tip, dir });
        }
    }
    (labels, arrows)
}

/// The single root tile holding everything anchored inside the root square.
pub fn root_tile(content: &LevelContent, grid: &TileGrid, tol: f64) -> TileMap {
    let root = grid.root();
    let mut tile = TileData {
        nodes: content
            .nodes
            .iter()
            .filter(|n| root.contains(n.bbox.center()))
            .cloned()
            .collect(),
        clips: Vec::new(),
        labels: content.labels.iter().filter(|l| root.contains(l.anchor)).cloned().collect(),
        arrowheads: content
            .arrowheads
            .iter()
            .filter(|a| root.contains(a.tip))
            .cloned()
            .collect(),
    };
    for (e, path) in &content.routes {
        for part in clip_to_rect(&path.vertices, &root) {
            tile.clips.push(EdgeClip {
                path: part,
                edges: vec![*e],
            });
        }
    }
    tile.clips = bundle_clips(tile.clips, tol);
    let mut map = TileMap::new();
    if !tile.is_empty() {
        map.insert((0, 0), tile);
    }
    map
}

/// Splits one tile into its four children; empty children are left out.
pub fn split_tile(grid: &TileGrid, id: TileId, data: &TileData, tol: f64) -> Vec<((u32, u32), TileData)> {
    let c = grid.center(id);
    let mut kids: [TileData; 4] = Default::default();
    let slot = |q: Quadrant| (q.1 * 2 + q.0) as usize;
    for n in &data.nodes {
        kids[slot(clip::quadrant_of(n.bbox.center(), c))].nodes.push(n.clone());
    }
    for clip in &data.clips {
        for (q, path) in split_by_midlines(&clip.path, c) {
            kids[slot(q)].clips.push(EdgeClip {
                path,
                edges: clip.edges.clone(),
            });
        }
    }
    for l in &data.labels {
        kids[slot(clip::quadrant_of(l.anchor, c))].labels.push(l.clone());
    }
    for a in &data.arrowheads {
        kids[slot(clip::quadrant_of(a.tip, c))].arrowheads.push(a.clone());
    }
    let mut out = Vec::with_capacity(4);
    for (k, mut kid) in kids.into_iter().enumerate() {
        if kid.is_empty() {
            continue;
        }
        kid.clips = bundle_clips(kid.clips, tol);
        let (qx, qy) = (k as u32 % 2, k as u32 / 2);
        out.push(((2 * id.x + qx, 2 * id.y + qy), kid));
    }
    out
}

/// Next level of `tiles` (at level `z`), one parent at a time in tile order.
fn split_level(grid: &TileGrid, z: u32, tiles: &TileMap, tol: f64) -> Vec<Vec<((u32, u32), TileData)>> {
    let parents: Vec<(&(u32, u32), &TileData)> = tiles.iter().collect();
    parents
        .par_iter()
        .map(|(&(x, y), data)| split_tile(grid, TileId { z, x, y }, data, tol))
        .collect()
}

/// Cuts a level's content into tiles by splitting from the root down to `z`.
pub fn tiles_for_level(content: &LevelContent, grid: &TileGrid, z: u32, tol: f64) -> TileMap {
    let mut tiles = root_tile(content, grid, tol);
    for level in 0..z {
        tiles = split_level(grid, level, &tiles, tol).into_iter().flatten().collect();
    }
    tiles
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    /// Every tile of the finest level is within capacity.
    Capacity,
    /// The next level's tiles would be smaller than the node size threshold.
    MinTileSize,
    /// Building the next level exceeded the memory budget; it was discarded.
    MemoryBudget,
    DepthLimit,
}

#[derive(Debug, Clone)]
pub struct Growth {
    /// Levels `0..=Z` of the unfiltered pyramid.
    pub levels: Vec<TileMap>,
    pub stop: StopReason,
    /// Elements created, including any discarded partial level.
    pub elements_used: u64,
}

/// Splits the full drawing level by level. Stops when all tiles fit within
/// `capacity`, when the next tiles would be smaller than `min_tile`
/// (width and height both), or when the running element total times
/// [`BYTES_PER_ELEMENT`] exceeds `memory_budget`; the last two discard the
/// level in progress.
pub fn grow_pyramid(
    content: &LevelContent,
    grid: &TileGrid,
    capacity: usize,
    min_tile: (f64, f64),
    memory_budget: u64,
) -> Growth {
    let tol = |z: u32| 1e-3 * grid.tile_side(z);
    let level0 = root_tile(content, grid, tol(0));
    let mut used: u64 = level0.values().map(|t| t.element_count() as u64).sum();
    let mut levels = vec![level0];
    let over_budget = |used: u64| used.saturating_mul(BYTES_PER_ELEMENT) > memory_budget;
    let stop = loop {
        let z = (levels.len() - 1) as u32;
        let current = &levels[z as usize];
        if current.values().all(|t| t.element_count() <= capacity) {
            break StopReason::Capacity;
        }
        if z >= MAX_DEPTH {
            break StopReason::DepthLimit;
        }
        let mut next = TileMap::new();
        let mut aborted = false;
        for children in split_level(grid, z, current, tol(z + 1)) {
            used += children.iter().map(|(_, t)| t.element_count() as u64).sum::<u64>();
            if over_budget(used) {
                aborted = true;
                break;
            }
            next.extend(children);
        }
        if aborted {
            break StopReason::MemoryBudget;
        }
        let side = grid.tile_side(z + 1);
        if side < min_tile.0 && side < min_tile.1 {
            break StopReason::MinTileSize;
        }
        levels.push(next);
    };
    Growth {
        levels,
        stop,
        elements_used: used,
    }
}

#[derive(Debug, Clone)]
pub struct TilerConfig {
    pub capacity: usize,
    /// Stop when tiles get smaller than this many average node sizes.
    pub min_tile_factor: f64,
    pub memory_budget: u64,
    /// Obstacle padding; `None` picks the default for the graph.
    pub padding: Option<f64>,
    pub routing: RouteOptions,
    pub arrowheads: bool,
}

impl Default for TilerConfig {
    fn default() -> Self {
        TilerConfig {
            capacity: 500,
            min_tile_factor: 10.0,
            memory_budget: 4 << 30,
            padding: None,
            routing: RouteOptions::default(),
            arrowheads: true,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum TilerError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("triangulating the full graph: {0}")]
    Graph(#[source] CdtError),
    #[error("triangulating level {level}: {source}")]
    Triangulation {
        level: u32,
        #[source]
        source: CdtError,
    },
}

#[derive(Debug, Clone)]
pub struct Level {
    pub z: u32,
    pub tiles: TileMap,
    pub selection: LevelSelection,
    /// Edges drawn at this level, in edge order.
    pub edges: Vec<usize>,
    pub routing: RoutingStats,
}

#[derive(Debug, Clone)]
pub struct TilePyramid {
    pub grid: TileGrid,
    pub capacity: usize,
    pub levels: Vec<Level>,
    pub stop: StopReason,
    /// Largest tile of the unfiltered finest level.
    pub unfiltered_max: usize,
}

impl TilePyramid {
    pub fn finest(&self) -> u32 {
        (self.levels.len() - 1) as u32
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PyramidStats {
    pub levels: usize,
    pub max_per_tile: usize,
    pub max_tile_level: u32,
    pub tiles_per_level: Vec<usize>,
    pub elements_per_level: Vec<usize>,
    pub max_per_level: Vec<usize>,
}

/// Summary over per-level tile element counts; the max tile's level is the
/// lowest level reaching the maximum.
pub fn stats_from_counts(per_level: &[Vec<usize>]) -> PyramidStats {
    let mut s = PyramidStats {
        levels: per_level.len(),
        ..Default::default()
    };
    for (z, counts) in per_level.iter().enumerate() {
        let max = counts.iter().copied().max().unwrap_or(0);
        s.tiles_per_level.push(counts.len());
        s.elements_per_level.push(counts.iter().sum());
        s.max_per_level.push(max);
        if max > s.max_per_tile {
            s.max_per_tile = max;
            s.max_tile_level = z as u32;
        }
    }
    s
}

pub fn pyramid_stats(p: &TilePyramid) -> PyramidStats {
    let counts: Vec<Vec<usize>> = p
        .levels
        .iter()
        .map(|l| l.tiles.values().map(TileData::element_count).collect())
        .collect();
    stats_from_counts(&counts)
}

#[derive(Debug, Clone, Serialize)]
pub struct LevelReport {
    pub z: u32,
    pub tiles: usize,
    pub max_per_tile: usize,
    pub nodes: usize,
    pub dropped: usize,
    pub edges: usize,
    pub routing: RoutingStats,
}

#[derive(Debug, Clone, Serialize)]
pub struct BuildReport {
    pub stats: PyramidStats,
    pub stop: StopReason,
    pub levels: Vec<LevelReport>,
    pub padding: f64,
    /// Full-graph triangulation and search.
    pub routing_seconds: f64,
    /// Growth plus every coarser level's selection, rerouting and splitting.
    pub tiling_seconds: f64,
}

fn install<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    match threads {
        0 => f(),
        n => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool")
            .install(f),
    }
}

/// Full pipeline: route, grow to fix `Z`, then rebuild levels `0..Z`.
pub fn build_pyramid(g: &LaidOutGraph, config: &TilerConfig) -> Result<(TilePyramid, BuildReport), TilerError> {
    if config.capacity == 0 {
        return Err(TilerError::Config("capacity must be positive".into()));
    }
    if config.min_tile_factor.is_nan() || config.min_tile_factor <= 0.0 {
        return Err(TilerError::Config("min tile factor must be positive".into()));
    }
    if let Some(p) = config.padding {
        if !(p > 0.0 && p.is_finite()) {
            return Err(TilerError::Config("padding must be positive".into()));
        }
    }
    install(config.routing.threads, || build_in_pool(g, config))
}

fn build_in_pool(g: &LaidOutGraph, config: &TilerConfig) -> Result<(TilePyramid, BuildReport), TilerError> {
    let padding = config.padding.unwrap_or_else(|| default_padding(g));
    let routing = RouteOptions {
        threads: 0,
        keep_sleeves: false,
        ..config.routing.clone()
    };
    let mut tiling_seconds = 0.0;

    let all_edges: Vec<usize> = (0..g.edges.len()).collect();
    let full_selection = LevelSelection {
        depth: 0,
        selected: (0..g.nodes.len()).map(|v| (v, 1.0)).collect(),
        dropped: Vec::new(),
    };
    let started = Instant::now();
    let (content, full_stats) = level_content(g, &full_selection, &all_edges, padding, &routing, config.arrowheads)
        .map_err(TilerError::Graph)?;
    let routing_seconds = started.elapsed().as_secs_f64();

    let started = Instant::now();
    let bounds = content
        .routes
        .iter()
        .flat_map(|(_, p)| p.vertices.iter().copied())
        .fold(g.bounds, |b, p| b.union(&Rect { min: p, max: p }));
    let grid = TileGrid::for_bounds(if g.nodes.is_empty() { &g.bounds } else { &bounds });
    let (avg_w, avg_h) = g.average_node_size();
    let min_tile = (config.min_tile_factor * avg_w, config.min_tile_factor * avg_h);
    let mut growth = grow_pyramid(&content, &grid, config.capacity, min_tile, config.memory_budget);
    tiling_seconds += started.elapsed().as_secs_f64();

    let finest = (growth.levels.len() - 1) as u32;
    let finest_tiles = growth.levels.pop().expect("level 0 always exists");
    let unfiltered_max = finest_tiles.values().map(TileData::element_count).max().unwrap_or(0);

    let order = if finest > 0 {
        let pairs: Vec<(usize, usize)> = g.edges.iter().map(|e| (e.source, e.target)).collect();
        rank_order(&pagerank(g.nodes.len(), &pairs, DAMPING, TOLERANCE, MAX_ITERATIONS))
    } else {
        Vec::new()
    };
    let boxes: Vec<Rect> = g.nodes.iter().map(|n| n.bbox).collect();
    let centers: Vec<Point> = g.nodes.iter().map(|n| n.center).collect();
    let tol = 1e-3 * grid.tile_side(finest);

    let mut levels = Vec::with_capacity(finest as usize + 1);
    for z in 0..finest {
        let depth = finest - z;
        let started = Instant::now();
        let selection = select_with_adaptive_scale(level_prefix(&order, depth), &boxes, &centers, depth);
        let mut chosen = vec![false; g.nodes.len()];
        for &(v, _) in &selection.selected {
            chosen[v] = true;
        }
        let edges: Vec<usize> = (0..g.edges.len())
            .filter(|&e| chosen[g.edges[e].source] && chosen[g.edges[e].target])
            .collect();
        let (content, stats) = level_content(g, &selection, &edges, padding, &routing, config.arrowheads)
            .map_err(|source| TilerError::Triangulation { level: z, source })?;
        let tiles = tiles_for_level(&content, &grid, z, tol);
        tiling_seconds += started.elapsed().as_secs_f64();
        levels.push(Level {
            z,
            tiles,
            selection,
            edges,
            routing: stats,
        });
    }
    levels.push(Level {
        z: finest,
        tiles: finest_tiles,
        selection: full_selection,
        edges: all_edges,
        routing: full_stats,
    });

    let pyramid = TilePyramid {
        grid,
        capacity: config.capacity,
        levels,
        stop: growth.stop,
        unfiltered_max,
    };
    let stats = pyramid_stats(&pyramid);
    let report = BuildReport {
        levels: pyramid
            .levels
            .iter()
            .map(|l| LevelReport {
                z: l.z,
                tiles: l.tiles.len(),
                max_per_tile: stats.max_per_level[l.z as usize],
                nodes: l.selection.selected.len(),
                dropped: l.selection.dropped.len(),
                edges: l.edges.len(),
                routing: l.routing.clone(),
            })
            .collect(),
        stats,
        stop: pyramid.stop,
        padding,
        routing_seconds,
        tiling_seconds,
    };
    Ok((pyramid, report))
}

/// Routes `edges` among the selected nodes at their scales and collects
/// the level's drawable elements.
fn level_content(
    g: &LaidOutGraph,
    selection: &LevelSelection,
    edges: &[usize],
    padding: f64,
    routing: &RouteOptions,
    arrowheads: bool,
) -> Result<(LevelContent, RoutingStats), CdtError> {
    let mut local = vec![usize::MAX; g.nodes.len()];
    let mut boxes = Vec::with_capacity(selection.selected.len());
    let mut centers = Vec::with_capacity(selection.selected.len());
    let mut ids = Vec::with_capacity(selection.selected.len());
    let mut nodes = Vec::with_capacity(selection.selected.len());
    for (i, &(v, s)) in selection.selected.iter().enumerate() {
        let n = &g.nodes[v];
        local[v] = i;
        let bbox = if s == 1.0 { n.bbox } else { scale_about(&n.bbox, n.center, s) };
        boxes.push(bbox);
        centers.push(n.center);
        ids.push(n.id.as_str());
        nodes.push(NodeItem { node: v, bbox, scale: s });
    }
    let pairs: Vec<(usize, usize)> = edges
        .iter()
        .map(|&e| (local[g.edges[e].source], local[g.edges[e].target]))
        .collect();
    let (routes, stats) = if pairs.is_empty() {
        (Vec::new(), RoutingStats::default())
    } else {
        let obstacles = build_obstacles(&boxes, &centers, &ids, padding);
        let scene = RoutingScene::new(obstacles, boxes)?;
        route_all(&scene, &pairs, routing)
    };
    let routes: Vec<(usize, Polyline)> = routes
        .into_iter()
        .map(|r: Route| (edges[r.edge], r.path))
        .collect();
    let (labels, arrowheads) = place_labels_and_arrowheads(g, &nodes, &routes, arrowheads);
    Ok((
        LevelContent {
            nodes,
            routes,
            labels,
            arrowheads,
        },
        stats,
    ))
}
