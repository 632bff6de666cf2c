//! Brute-force reference computations for tests and the quality benchmark.
//! Nothing in the build pipeline depends on this module.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap, HashMap};

use rayon::prelude::*;

use crate::geometry::{
    orient, point_segment_distance, segment_intersection, ConvexPolygon, Point, Rect,
    SegmentIntersection, EPS_GEOM,
};
use crate::graph::ObstacleSet;
use crate::router::{Route, RoutingScene};

#[derive(Clone, Copy, PartialEq)]
struct Item(f64, usize);

impl Eq for Item {}

impl Ord for Item {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for Item {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Textbook single-pair Dijkstra on the dual graph: from any triangle owned
/// by `s` to the nearest one owned by `t`, never entering triangles of other
/// nodes.
pub fn reference_dual_cost(scene: &RoutingScene, s: usize, t: usize) -> Option<f64> {
    let tris = &scene.cdt.triangles;
    let mut dist: HashMap<usize, f64> = HashMap::new();
    let mut heap = BinaryHeap::new();
    for &tri in &scene.cdt.owned[s] {
        dist.insert(tri, 0.0);
        heap.push(Item(0.0, tri));
    }
    while let Some(Item(d, tri)) = heap.pop() {
        if d > dist[&tri] {
            continue;
        }
        if tris[tri].owner == Some(t) {
            return Some(d);
        }
        for arc in scene.dual.neighbors(tri) {
            let ok = match tris[arc.to].owner {
                None => true,
                Some(o) => o == s || o == t,
            };
            if !ok {
                continue;
            }
            let nd = d + arc.weight;
            if dist.get(&arc.to).is_none_or(|&old| nd < old) {
                dist.insert(arc.to, nd);
                heap.push(Item(nd, arc.to));
            }
        }
    }
    None
}

/// Brute-force straight visibility: does the open segment between the two
/// centers avoid the interior of every obstacle except their own?
pub fn segment_is_clear(obstacles: &ObstacleSet, s: usize, t: usize) -> bool {
    let (a, b) = (obstacles.centers[s], obstacles.centers[t]);
    obstacles
        .polygons
        .iter()
        .enumerate()
        .all(|(i, p)| i == s || i == t || !p.segment_hits_interior(a, b))
}

/// Bucket grid over obstacle bounding boxes for segment queries.
struct ObstacleGrid {
    origin: Point,
    cell: f64,
    cols: usize,
    rows: usize,
    cells: Vec<Vec<usize>>,
}

impl ObstacleGrid {
    fn new(polys: &[ConvexPolygon]) -> Self {
        let boxes: Vec<Rect> = polys.iter().map(|p| p.bbox()).collect();
        let bounds = boxes
            .iter()
            .copied()
            .reduce(|a, b| a.union(&b))
            .unwrap_or(Rect::from_corners(Point::new(0.0, 0.0), Point::new(1.0, 1.0)));
        let side = (polys.len().max(1) as f64).sqrt().ceil();
        let cell = (bounds.width().max(bounds.height()) / side).max(1e-9);
        let cols = (bounds.width() / cell).floor() as usize + 1;
        let rows = (bounds.height() / cell).floor() as usize + 1;
        let mut grid = ObstacleGrid {
            origin: bounds.min,
            cell,
            cols,
            rows,
            cells: vec![Vec::new(); cols * rows],
        };
        for (i, b) in boxes.iter().enumerate() {
            let (c0, r0) = grid.cell_of(b.min);
            let (c1, r1) = grid.cell_of(b.max);
            for r in r0..=r1 {
                for c in c0..=c1 {
                    grid.cells[r * grid.cols + c].push(i);
                }
            }
        }
        grid
    }

    fn cell_of(&self, p: Point) -> (usize, usize) {
        let c = ((p.x - self.origin.x) / self.cell).floor().max(0.0) as usize;
        let r = ((p.y - self.origin.y) / self.cell).floor().max(0.0) as usize;
        (c.min(self.cols - 1), r.min(self.rows - 1))
    }

    /// Obstacles whose cells meet the segment's bounding box, deduplicated.
    fn candidates(&self, a: Point, b: Point, out: &mut Vec<usize>) {
        out.clear();
        let (c0, r0) = self.cell_of(Point::new(a.x.min(b.x), a.y.min(b.y)));
        let (c1, r1) = self.cell_of(Point::new(a.x.max(b.x), a.y.max(b.y)));
        let d = b - a;
        let len = d.norm().max(f64::MIN_POSITIVE);
        let half_diag = self.cell * std::f64::consts::FRAC_1_SQRT_2;
        for r in r0..=r1 {
            for c in c0..=c1 {
                let center = Point::new(
                    self.origin.x + (c as f64 + 0.5) * self.cell,
                    self.origin.y + (r as f64 + 0.5) * self.cell,
                );
                // Skip cells the segment's supporting line misses.
                if (d.cross(center - a) / len).abs() > half_diag * 1.0001 {
                    continue;
                }
                out.extend_from_slice(&self.cells[r * self.cols + c]);
            }
        }
        out.sort_unstable();
        out.dedup();
    }
}

/// Visibility graph over obstacle corners. Only segments that are tangent to
/// the obstacles at both corners are kept, since a shortest path around convex
/// obstacles never uses any other.
pub struct VisibilityOracle {
    polys: Vec<ConvexPolygon>,
    centers: Vec<Point>,
    /// Corner positions and their obstacle.
    corners: Vec<(Point, usize)>,
    corner_adj: Vec<Vec<(usize, f64)>>,
    grid: ObstacleGrid,
}

const MAX_BLOCKERS: usize = 2;

impl VisibilityOracle {
    pub fn new(obstacles: &ObstacleSet) -> Self {
        let polys = obstacles.polygons.clone();
        let grid = ObstacleGrid::new(&polys);
        let mut corners = Vec::new();
        let mut tangent_info = Vec::new();
        for (i, p) in polys.iter().enumerate() {
            let n = p.vertices.len();
            for k in 0..n {
                corners.push((p.vertices[k], i));
                tangent_info.push((p.vertices[(k + n - 1) % n], p.vertices[(k + 1) % n]));
            }
        }
        let tangent = |c: usize, other: Point| -> bool {
            let (u, _) = corners[c];
            let (prev, next) = tangent_info[c];
            let a = orient(u, other, prev);
            let b = orient(u, other, next);
            a * b >= 0
        };
        let n = corners.len();
        let rows: Vec<Vec<(usize, f64)>> = (0..n)
            .into_par_iter()
            .map_init(Vec::new, |scratch, i| {
                let mut row = Vec::new();
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    let (a, _) = corners[i];
                    let (b, _) = corners[j];
                    if a == b || !tangent(i, b) || !tangent(j, a) {
                        continue;
                    }
                    if blockers(&polys, &grid, a, b, scratch).is_some_and(|bl| bl.is_empty()) {
                        row.push((j, a.dist(b)));
                    }
                }
                row
            })
            .collect();
        VisibilityOracle {
            centers: obstacles.centers.clone(),
            polys,
            corners,
            corner_adj: rows,
            grid,
        }
    }

    pub fn corner_count(&self) -> usize {
        self.corners.len()
    }

    /// Corners reachable by a straight segment from the center of `s` that
    /// only passes through `s`'s own obstacle, with that segment's length.
    fn leaves(&self, s: usize, scratch: &mut Vec<usize>) -> Vec<(usize, f64)> {
        let a = self.centers[s];
        (0..self.corners.len())
            .filter_map(|c| {
                let (b, _) = self.corners[c];
                let bl = blockers(&self.polys, &self.grid, a, b, scratch)?;
                bl.iter().all(|&o| o == s).then(|| (c, a.dist(b)))
            })
            .collect()
    }

    /// Shortest obstacle-avoiding distance from the center of `s` to the
    /// center of each target; the obstacles of `s` and of the target are
    /// transparent. `f64::INFINITY` when disconnected.
    pub fn optimum_from(&self, s: usize, targets: &[usize]) -> Vec<f64> {
        let mut scratch = Vec::new();
        let n = self.corners.len();
        let mut dist = vec![f64::INFINITY; n];
        let mut heap = BinaryHeap::new();
        for (c, d) in self.leaves(s, &mut scratch) {
            if d < dist[c] {
                dist[c] = d;
                heap.push(Item(d, c));
            }
        }
        while let Some(Item(d, c)) = heap.pop() {
            if d > dist[c] {
                continue;
            }
            for &(j, w) in &self.corner_adj[c] {
                let nd = d + w;
                if nd < dist[j] {
                    dist[j] = nd;
                    heap.push(Item(nd, j));
                }
            }
        }
        targets
            .iter()
            .map(|&t| {
                let b = self.centers[t];
                let mut best = f64::INFINITY;
                if let Some(bl) = blockers(&self.polys, &self.grid, self.centers[s], b, &mut scratch) {
                    if bl.iter().all(|&o| o == s || o == t) {
                        best = self.centers[s].dist(b);
                    }
                }
                for (c, w) in self.leaves(t, &mut scratch) {
                    best = best.min(dist[c] + w);
                }
                best
            })
            .collect()
    }

    pub fn optimum(&self, s: usize, t: usize) -> f64 {
        self.optimum_from(s, &[t])[0]
    }
}

/// Center-to-center route length over the visibility optimum, one ratio per
/// route (`routes[i]` belongs to `edges[i]`).
pub fn quality_ratios(scene: &RoutingScene, edges: &[(usize, usize)], routes: &[Route]) -> Vec<f64> {
    let oracle = VisibilityOracle::new(&scene.obstacles);
    let mut by_source: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &(s, _)) in edges.iter().enumerate() {
        by_source.entry(s).or_default().push(i);
    }
    let groups: Vec<(usize, Vec<usize>)> = by_source.into_iter().collect();
    let optima: Vec<(usize, f64)> = groups
        .par_iter()
        .flat_map_iter(|(s, members)| {
            let targets: Vec<usize> = members.iter().map(|&i| edges[i].1).collect();
            let best = oracle.optimum_from(*s, &targets);
            members.iter().copied().zip(best).collect::<Vec<_>>()
        })
        .collect();
    let mut ratios = vec![f64::NAN; edges.len()];
    for (i, opt) in optima {
        let len = routes[i].center_length;
        ratios[i] = if opt > 0.0 { len / opt } else { 1.0 };
    }
    ratios
}

/// Obstacles whose interior the open segment `a b` passes through, or `None`
/// when there are more than [`MAX_BLOCKERS`].
fn blockers(
    polys: &[ConvexPolygon],
    grid: &ObstacleGrid,
    a: Point,
    b: Point,
    scratch: &mut Vec<usize>,
) -> Option<Vec<usize>> {
    grid.candidates(a, b, scratch);
    let mut out = Vec::new();
    for &i in scratch.iter() {
        if polys[i].segment_hits_interior(a, b) {
            out.push(i);
            if out.len() > MAX_BLOCKERS {
                return None;
            }
        }
    }
    Some(out)
}

/// Closed point-in-polygon test for a simple polygon given as a vertex ring.
pub fn point_in_polygon(ring: &[Point], p: Point, tol: f64) -> bool {
    let n = ring.len();
    let mut inside = false;
    for i in 0..n {
        let (a, b) = (ring[i], ring[(i + 1) % n]);
        if point_segment_distance(p, a, b) <= tol {
            return true;
        }
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if p.x < x {
                inside = !inside;
            }
        }
    }
    inside
}

fn ring_scale(ring: &[Point]) -> f64 {
    Rect::bounding(ring.iter().copied())
        .map(|b| b.width().max(b.height()).max(1.0))
        .unwrap_or(1.0)
}

/// Whether segment `a b` stays inside the closed polygon: it is cut at every
/// contact with the boundary and each piece's midpoint is tested.
pub fn segment_inside(ring: &[Point], a: Point, b: Point, tol: f64) -> bool {
    let d = b - a;
    let len2 = d.dot(d);
    if len2 == 0.0 {
        return point_in_polygon(ring, a, tol);
    }
    let param = |p: Point| ((p - a).dot(d) / len2).clamp(0.0, 1.0);
    let mut cuts = vec![0.0, 1.0];
    let n = ring.len();
    for i in 0..n {
        match segment_intersection(a, b, ring[i], ring[(i + 1) % n]) {
            SegmentIntersection::None => {}
            SegmentIntersection::Proper(p) | SegmentIntersection::Touch(p) => cuts.push(param(p)),
            SegmentIntersection::Overlap(p, q) => {
                cuts.push(param(p));
                cuts.push(param(q));
            }
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.windows(2).all(|w| {
        w[1] - w[0] <= 1e-12 || point_in_polygon(ring, a.lerp(b, 0.5 * (w[0] + w[1])), tol)
    })
}

/// Shortest path between two points of a simple polygon, by Dijkstra on the
/// visibility graph of its reflex vertices and the two endpoints.
pub fn polygon_geodesic(ring: &[Point], s: Point, t: Point) -> Option<(f64, Vec<Point>)> {
    let n = ring.len();
    let tol = EPS_GEOM * ring_scale(ring);
    let area: f64 = (0..n).map(|i| ring[i].cross(ring[(i + 1) % n])).sum();
    let ccw = area >= 0.0;
    let mut nodes = vec![s, t];
    for i in 0..n {
        let (p, c, q) = (ring[(i + n - 1) % n], ring[i], ring[(i + 1) % n]);
        let o = orient(p, c, q);
        let reflex = if ccw { o < 0 } else { o > 0 };
        if reflex && c != s && c != t {
            nodes.push(c);
        }
    }
    let m = nodes.len();
    let mut adj = vec![Vec::new(); m];
    for i in 0..m {
        for j in i + 1..m {
            if segment_inside(ring, nodes[i], nodes[j], tol) {
                let w = nodes[i].dist(nodes[j]);
                adj[i].push((j, w));
                adj[j].push((i, w));
            }
        }
    }
    let mut dist = vec![f64::INFINITY; m];
    let mut prev = vec![usize::MAX; m];
    let mut heap = BinaryHeap::new();
    dist[0] = 0.0;
    heap.push(Item(0.0, 0));
    while let Some(Item(d, u)) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        if u == 1 {
            break;
        }
        for &(v, w) in &adj[u] {
            if d + w < dist[v] {
                dist[v] = d + w;
                prev[v] = u;
                heap.push(Item(d + w, v));
            }
        }
    }
    if !dist[1].is_finite() {
        return None;
    }
    let mut path = vec![t];
    let mut cur = 1;
    while prev[cur] != usize::MAX {
        cur = prev[cur];
        path.push(nodes[cur]);
    }
    path.reverse();
    Some((dist[1], path))
}
