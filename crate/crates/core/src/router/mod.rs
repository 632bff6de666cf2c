//! Edge routing on the triangulated free space.
//!
//! Per edge: a straight probe first; otherwise a sleeve search on the dual
//! graph, endpoint collapse, the funnel, and trimming at the node boxes.

mod probe;
mod search;
mod sleeve;
mod trim;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

pub use probe::straight_probe;
pub use search::{
    astar_single, dijkstra_tree, greedy_vertex_cover, Reached, SearchBuffers, TreeResult,
    VertexCover,
};
pub use sleeve::{
    collapse_ends, collapse_sides, extract_sleeve, funnel, funnel_portals, ChainPoint, Diagonal, Sleeve,
};
pub use trim::trim_route;

use crate::cdt::{build_cdt, dual_graph, frame_for, Cdt, CdtError, DualGraph};
use crate::geometry::{Point, Polyline, Rect};
use crate::graph::{graph_obstacles, LaidOutGraph, ObstacleSet};

/// Everything the router needs about one set of obstacles.
#[derive(Debug, Clone)]
pub struct RoutingScene {
    pub obstacles: ObstacleSet,
    /// Node boxes used for trimming.
    pub boxes: Vec<Rect>,
    pub cdt: Cdt,
    pub dual: DualGraph,
    fan_radius: Vec<f64>,
    obstacle_bounds: Vec<Rect>,
}

impl RoutingScene {
    pub fn new(obstacles: ObstacleSet, boxes: Vec<Rect>) -> Result<Self, CdtError> {
        assert_eq!(obstacles.len(), boxes.len());
        let bounds = obstacles
            .polygons
            .iter()
            .map(|p| p.bbox())
            .chain(boxes.iter().copied())
            .reduce(|a, b| a.union(&b))
            .unwrap_or(Rect::from_corners(Point::new(0.0, 0.0), Point::new(1.0, 1.0)));
        let frame = frame_for(bounds, obstacles.max_padding());
        let cdt = build_cdt(&obstacles, frame)?;
        let dual = dual_graph(&cdt);
        let fan_radius = (0..obstacles.len())
            .map(|i| {
                let c = obstacles.centers[i];
                cdt.owned[i]
                    .iter()
                    .map(|&t| dual.centroids[t].dist(c))
                    .fold(0.0, f64::max)
            })
            .collect();
        let obstacle_bounds = obstacles.polygons.iter().map(|p| p.bbox()).collect();
        Ok(RoutingScene {
            obstacles,
            boxes,
            cdt,
            dual,
            fan_radius,
            obstacle_bounds,
        })
    }

    pub fn for_graph(g: &LaidOutGraph, padding: f64) -> Result<Self, CdtError> {
        let obstacles = graph_obstacles(g, padding);
        Self::new(obstacles, g.nodes.iter().map(|n| n.bbox).collect())
    }

    pub fn node_count(&self) -> usize {
        self.obstacles.len()
    }

    pub fn center(&self, node: usize) -> Point {
        self.obstacles.centers[node]
    }

    /// Largest distance from a node's center to the centroid of one of its
    /// owned triangles.
    pub fn fan_radius(&self, node: usize) -> f64 {
        self.fan_radius[node]
    }

    /// Sleeve from `s` to `t` given a triangle path found from `root`.
    pub fn sleeve_from_path(&self, mut tris: Vec<usize>, root: usize, s: usize, t: usize) -> Sleeve {
        if root != s {
            tris.reverse();
        }
        extract_sleeve(&self.cdt, tris, s, t)
    }

    /// Center-to-center path for one sleeve: optional collapse, then funnel.
    ///
    /// A collapsed corridor is no longer a union of free triangles, so its
    /// funnel can cut through an obstacle lying next to the replaced corners.
    /// Such paths are rejected, first dropping the target collapse, then the
    /// source collapse, then both.
    pub fn geometry_raw(&self, sleeve: &Sleeve, collapse: bool) -> Polyline {
        let (s, t) = (self.center(sleeve.source), self.center(sleeve.target));
        if collapse {
            for (at_source, at_target) in [(true, true), (true, false), (false, true)] {
                let collapsed = collapse_sides(sleeve, &self.cdt, s, t, at_source, at_target);
                if collapsed.diagonals == sleeve.diagonals {
                    continue;
                }
                let path = funnel(&collapsed, &self.cdt.points, s, t);
                if self.avoids_others(&path.vertices, sleeve.source, sleeve.target) {
                    return path;
                }
            }
        }
        funnel(sleeve, &self.cdt.points, s, t)
    }

    /// True when no segment of `path` enters an obstacle other than `s` and `t`.
    pub fn avoids_others(&self, path: &[Point], s: usize, t: usize) -> bool {
        path.windows(2).all(|w| {
            let seg = Rect::from_corners(w[0], w[1]);
            self.obstacle_bounds.iter().enumerate().all(|(o, b)| {
                o == s || o == t || !b.intersects(&seg) || !self.obstacles.polygons[o].segment_hits_interior(w[0], w[1])
            })
        })
    }

    fn finish(&self, raw: Polyline, s: usize, t: usize) -> (Polyline, bool, f64) {
        let (path, stub) = trim_route(&raw.vertices, &self.boxes[s], &self.boxes[t]);
        (path, stub, raw.length())
    }

    fn straight(&self, s: usize, t: usize) -> (Polyline, bool, f64) {
        self.finish(Polyline::segment(self.center(s), self.center(t)), s, t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RoutingMode {
    /// One A* search per edge.
    Astar,
    /// One Dijkstra tree per distinct source.
    Dijkstra,
    /// One Dijkstra tree per root of a greedy vertex cover.
    VcDijkstra,
}

impl RoutingMode {
    pub const ALL: [RoutingMode; 3] = [RoutingMode::Astar, RoutingMode::Dijkstra, RoutingMode::VcDijkstra];

    pub fn as_str(self) -> &'static str {
        match self {
            RoutingMode::Astar => "astar",
            RoutingMode::Dijkstra => "dijkstra",
            RoutingMode::VcDijkstra => "vc_dijkstra",
        }
    }
}

impl fmt::Display for RoutingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, thiserror::Error)]
#[error("unknown routing mode {0:?} (expected astar, dijkstra or vc_dijkstra)")]
pub struct UnknownMode(String);

impl FromStr for RoutingMode {
    type Err = UnknownMode;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "astar" => Ok(RoutingMode::Astar),
            "dijkstra" => Ok(RoutingMode::Dijkstra),
            "vc_dijkstra" | "vc-dijkstra" => Ok(RoutingMode::VcDijkstra),
            other => Err(UnknownMode(other.to_string())),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RouteOptions {
    pub mode: RoutingMode,
    /// Worker threads; 0 uses the global rayon pool.
    pub threads: usize,
    pub straight_probe: bool,
    pub collapse: bool,
    /// Keep each routed edge's uncollapsed sleeve in the result.
    pub keep_sleeves: bool,
}

impl Default for RouteOptions {
    fn default() -> Self {
        RouteOptions {
            mode: RoutingMode::VcDijkstra,
            threads: 0,
            straight_probe: true,
            collapse: true,
            keep_sleeves: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RouteKind {
    Straight,
    Sleeve,
    /// Search failed; drawn as a straight segment.
    Fallback,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Route {
    /// Index into the routed edge list.
    pub edge: usize,
    pub path: Polyline,
    pub kind: RouteKind,
    /// Dual path cost of the sleeve, when a search ran.
    pub cost: Option<f64>,
    /// Trimming left only a minimal stub (touching boxes).
    pub stub: bool,
    /// Length between the two centers, before trimming.
    pub center_length: f64,
    pub sleeve: Option<Sleeve>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct RoutingStats {
    pub edges: usize,
    /// Distinct first endpoints after writing each edge as (lower, higher) index.
    pub distinct_sources: usize,
    /// Size of the greedy cover of the full demand graph.
    pub cover_size: usize,
    /// Search trees (or A* runs) actually launched.
    pub roots_launched: usize,
    pub expansions: u64,
    pub probe_hits: usize,
    pub failures: usize,
    pub stubs: usize,
    #[serde(skip)]
    pub search_seconds: f64,
}

/// Routes every `(source, target)` pair. Output order follows the input and
/// does not depend on the thread count.
pub fn route_all(
    scene: &RoutingScene,
    edges: &[(usize, usize)],
    options: &RouteOptions,
) -> (Vec<Route>, RoutingStats) {
    match options.threads {
        0 => route_all_in_pool(scene, edges, options),
        n => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool")
            .install(|| route_all_in_pool(scene, edges, options)),
    }
}

fn normalized(e: (usize, usize)) -> (usize, usize) {
    (e.0.min(e.1), e.0.max(e.1))
}

fn route_all_in_pool(
    scene: &RoutingScene,
    edges: &[(usize, usize)],
    options: &RouteOptions,
) -> (Vec<Route>, RoutingStats) {
    let started = Instant::now();
    let mut stats = RoutingStats {
        edges: edges.len(),
        ..Default::default()
    };
    let normal: Vec<(usize, usize)> = edges.iter().map(|&e| normalized(e)).collect();
    let mut sources: Vec<usize> = normal.iter().map(|e| e.0).collect();
    sources.sort_unstable();
    sources.dedup();
    stats.distinct_sources = sources.len();
    let cover = greedy_vertex_cover(scene.node_count(), &normal);
    stats.cover_size = cover.len();

    let probed: Vec<bool> = if options.straight_probe {
        edges
            .par_iter()
            .map(|&(s, t)| straight_probe(&scene.cdt, s, t))
            .collect()
    } else {
        vec![false; edges.len()]
    };
    stats.probe_hits = probed.iter().filter(|&&p| p).count();
    let pending: Vec<usize> = (0..edges.len()).filter(|&i| !probed[i]).collect();

    // (route, expansions) per searched edge, in edge order.
    let searched: Vec<(usize, Option<(Sleeve, f64)>)>;
    let mut expansions = 0u64;
    match options.mode {
        RoutingMode::Astar => {
            let found: Vec<_> = pending
                .par_iter()
                .map_init(SearchBuffers::default, |buf, &i| {
                    let (s, t) = edges[i];
                    let (hit, exp) = astar_single(scene, s, t, buf);
                    let sleeve = hit.map(|r| (scene.sleeve_from_path(buf.path_to(r.tri), s, s, t), r.cost));
                    (i, sleeve, exp)
                })
                .collect();
            stats.roots_launched = found.len();
            expansions = found.iter().map(|f| f.2).sum();
            searched = found.into_iter().map(|(i, s, _)| (i, s)).collect();
        }
        RoutingMode::Dijkstra | RoutingMode::VcDijkstra => {
            let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for &i in &pending {
                let root = match options.mode {
                    RoutingMode::Dijkstra => normal[i].0,
                    _ => cover.assignment[i],
                };
                groups.entry(root).or_default().push(i);
            }
            stats.roots_launched = groups.len();
            let groups: Vec<(usize, Vec<usize>)> = groups.into_iter().collect();
            let per_root: Vec<_> = groups
                .par_iter()
                .map_init(SearchBuffers::default, |buf, (root, members)| {
                    let root = *root;
                    let mut targets: Vec<usize> = members
                        .iter()
                        .map(|&i| if edges[i].0 == root { edges[i].1 } else { edges[i].0 })
                        .collect();
                    targets.sort_unstable();
                    targets.dedup();
                    let tree = dijkstra_tree(scene, root, &targets, buf);
                    let by_node: BTreeMap<usize, Reached> =
                        tree.reached.iter().map(|r| (r.node, *r)).collect();
                    let out: Vec<_> = members
                        .iter()
                        .map(|&i| {
                            let (s, t) = edges[i];
                            let other = if s == root { t } else { s };
                            let sleeve = by_node.get(&other).map(|r| {
                                (scene.sleeve_from_path(buf.path_to(r.tri), root, s, t), r.cost)
                            });
                            (i, sleeve)
                        })
                        .collect();
                    (out, tree.expansions)
                })
                .collect();
            let mut all = Vec::with_capacity(pending.len());
            for (out, exp) in per_root {
                expansions += exp;
                all.extend(out);
            }
            all.sort_by_key(|x| x.0);
            searched = all;
        }
    }
    stats.expansions = expansions;

    let mut routes: Vec<Option<Route>> = vec![None; edges.len()];
    let geometry: Vec<Route> = searched
        .into_par_iter()
        .map(|(i, found)| {
            let (s, t) = edges[i];
            match found {
                Some((sleeve, cost)) => {
                    let raw = scene.geometry_raw(&sleeve, options.collapse);
                    let (path, stub, center_length) = scene.finish(raw, s, t);
                    Route {
                        edge: i,
                        path,
                        kind: RouteKind::Sleeve,
                        cost: Some(cost),
                        stub,
                        center_length,
                        sleeve: options.keep_sleeves.then_some(sleeve),
                    }
                }
                None => {
                    let (path, stub, center_length) = scene.straight(s, t);
                    Route {
                        edge: i,
                        path,
                        kind: RouteKind::Fallback,
                        cost: None,
                        stub,
                        center_length,
                        sleeve: None,
                    }
                }
            }
        })
        .collect();
    for r in geometry {
        let i = r.edge;
        routes[i] = Some(r);
    }
    for (i, &(s, t)) in edges.iter().enumerate() {
        if probed[i] {
            let (path, stub, center_length) = scene.straight(s, t);
            routes[i] = Some(Route {
                edge: i,
                path,
                kind: RouteKind::Straight,
                cost: None,
                stub,
                center_length,
                sleeve: None,
            });
        }
    }
    let routes: Vec<Route> = routes.into_iter().map(|r| r.expect("every edge routed")).collect();
    stats.failures = routes.iter().filter(|r| r.kind == RouteKind::Fallback).count();
    stats.stubs = routes.iter().filter(|r| r.stub).count();
    stats.search_seconds = started.elapsed().as_secs_f64();
    (routes, stats)
}
