//! Constrained Delaunay triangulation of the free space around obstacles,
//! and its dual graph.
//!
//! Construction is delegated to `spade`; the result is copied into a flat
//! triangle array with explicit adjacency, constraint flags and owners, which
//! is what the router walks.

use std::collections::HashSet;

use serde::Serialize;
use spade::{ConstrainedDelaunayTriangulation, Point2, Triangulation};

use crate::geometry::{cross3, orient, Point, Rect};
use crate::graph::ObstacleSet;

/// Side `i` of a triangle joins `vertices[i]` and `vertices[(i + 1) % 3]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Triangle {
    pub vertices: [usize; 3],
    pub neighbors: [Option<usize>; 3],
    pub constrained: [bool; 3],
    pub owner: Option<usize>,
}

impl Triangle {
    /// Index of the side shared with `other`, if adjacent.
    pub fn side_towards(&self, other: usize) -> Option<usize> {
        self.neighbors.iter().position(|&n| n == Some(other))
    }

    pub fn has_vertex(&self, v: usize) -> bool {
        self.vertices.contains(&v)
    }
}

#[derive(Debug, Clone)]
pub struct Cdt {
    pub points: Vec<Point>,
    /// Node whose obstacle boundary (or center) a point belongs to.
    pub point_owner: Vec<Option<usize>>,
    pub triangles: Vec<Triangle>,
    pub frame: Rect,
    /// Point index of each node's center.
    pub center_vertex: Vec<usize>,
    /// Triangles owned by each node (the fan around its center).
    pub owned: Vec<Vec<usize>>,
    vertex_offsets: Vec<usize>,
    vertex_tris: Vec<usize>,
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum CdtError {
    #[error("obstacle constraints intersect (edge between points {0} and {1})")]
    ConstraintConflict(usize, usize),
    #[error("obstacle {0} lies outside the frame")]
    OutsideFrame(usize),
    #[error("point ({x}, {y}) lies outside the triangulation frame")]
    OutOfRange { x: f64, y: f64 },
    #[error("triangulation failed: {0}")]
    Backend(String),
}

const FRAME_OWNER: Option<usize> = None;

pub fn build_cdt(obstacles: &ObstacleSet, frame: Rect) -> Result<Cdt, CdtError> {
    let mut points: Vec<Point> = frame.corners().to_vec();
    let mut point_owner: Vec<Option<usize>> = vec![FRAME_OWNER; 4];
    let mut center_vertex = Vec::with_capacity(obstacles.len());
    let mut constraints: Vec<[usize; 2]> = Vec::new();
    let mut boundary: HashSet<(usize, usize)> = HashSet::new();

    for (i, poly) in obstacles.polygons.iter().enumerate() {
        if !frame.contains_rect(&poly.bbox()) {
            return Err(CdtError::OutsideFrame(i));
        }
        let c = points.len();
        points.push(obstacles.centers[i]);
        point_owner.push(Some(i));
        center_vertex.push(c);
        let first = points.len();
        let n = poly.vertices.len();
        for v in &poly.vertices {
            points.push(*v);
            point_owner.push(Some(i));
        }
        for k in 0..n {
            let a = first + k;
            let b = first + (k + 1) % n;
            constraints.push([a, b]);
            boundary.insert((a.min(b), a.max(b)));
            // Spokes force the interior into a fan around the center.
            constraints.push([c, a]);
        }
    }

    let verts: Vec<Point2<f64>> = points.iter().map(|p| Point2::new(p.x, p.y)).collect();
    let mut conflict = None;
    let tri: ConstrainedDelaunayTriangulation<Point2<f64>> =
        ConstrainedDelaunayTriangulation::try_bulk_load_cdt(verts, constraints, |e| {
            conflict.get_or_insert(e);
        })
        .map_err(|e| CdtError::Backend(format!("{e:?}")))?;
    if let Some([a, b]) = conflict {
        return Err(CdtError::ConstraintConflict(a, b));
    }
    if tri.num_vertices() != points.len() {
        return Err(CdtError::Backend("coincident input points".into()));
    }

    let mut triangles = Vec::with_capacity(tri.num_inner_faces());
    let mut face_to_tri = vec![usize::MAX; tri.num_all_faces()];
    for face in tri.inner_faces() {
        face_to_tri[face.fix().index()] = triangles.len();
        let vs = face.vertices().map(|v| v.fix().index());
        triangles.push(Triangle {
            vertices: vs,
            neighbors: [None; 3],
            constrained: [false; 3],
            owner: None,
        });
    }
    for face in tri.inner_faces() {
        let t = face_to_tri[face.fix().index()];
        let vs = triangles[t].vertices;
        for edge in face.adjacent_edges() {
            let from = edge.from().fix().index();
            let side = (0..3).find(|&k| vs[k] == from).expect("edge starts at a face vertex");
            let to = edge.to().fix().index();
            debug_assert_eq!(vs[(side + 1) % 3], to);
            let other = edge.rev().face();
            if let Some(inner) = other.as_inner() {
                triangles[t].neighbors[side] = Some(face_to_tri[inner.fix().index()]);
            }
            triangles[t].constrained[side] = boundary.contains(&(from.min(to), from.max(to)));
        }
    }

    let mut owned = vec![Vec::new(); obstacles.len()];
    for (t, tr) in triangles.iter_mut().enumerate() {
        let [a, b, c] = tr.vertices;
        let (oa, ob, oc) = (point_owner[a], point_owner[b], point_owner[c]);
        if let Some(o) = oa {
            if ob == Some(o) && oc == Some(o) {
                let centroid = centroid_of(&points, tr.vertices);
                if obstacles.polygons[o].contains(centroid) {
                    tr.owner = Some(o);
                    owned[o].push(t);
                }
            }
        }
    }

    let (vertex_offsets, vertex_tris) = vertex_incidence(points.len(), &triangles);
    Ok(Cdt {
        points,
        point_owner,
        triangles,
        frame,
        center_vertex,
        owned,
        vertex_offsets,
        vertex_tris,
    })
}

fn vertex_incidence(n: usize, triangles: &[Triangle]) -> (Vec<usize>, Vec<usize>) {
    let mut counts = vec![0usize; n + 1];
    for t in triangles {
        for &v in &t.vertices {
            counts[v + 1] += 1;
        }
    }
    for i in 0..n {
        counts[i + 1] += counts[i];
    }
    let mut fill = counts.clone();
    let mut tris = vec![0usize; counts[n]];
    for (ti, t) in triangles.iter().enumerate() {
        for &v in &t.vertices {
            tris[fill[v]] = ti;
            fill[v] += 1;
        }
    }
    (counts, tris)
}

fn centroid_of(points: &[Point], v: [usize; 3]) -> Point {
    let (a, b, c) = (points[v[0]], points[v[1]], points[v[2]]);
    Point::new((a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0)
}

/// Frame used around a set of obstacles: their bounds inflated by twice the
/// largest padding (with a floor so an empty or point-like input still has area).
pub fn frame_for(bounds: Rect, max_padding: f64) -> Rect {
    let extent = bounds.width().max(bounds.height());
    let margin = (2.0 * max_padding).max(1e-6 * extent).max(f64::MIN_POSITIVE.sqrt());
    bounds.inflate(margin)
}

impl Cdt {
    pub fn centroid(&self, t: usize) -> Point {
        centroid_of(&self.points, self.triangles[t].vertices)
    }

    pub fn corners(&self, t: usize) -> [Point; 3] {
        self.triangles[t].vertices.map(|v| self.points[v])
    }

    pub fn area(&self, t: usize) -> f64 {
        let [a, b, c] = self.corners(t);
        0.5 * cross3(a, b, c)
    }

    /// Triangles incident to point `v`.
    pub fn triangles_at(&self, v: usize) -> &[usize] {
        &self.vertex_tris[self.vertex_offsets[v]..self.vertex_offsets[v + 1]]
    }

    /// Closed containment of `p` in triangle `t`.
    pub fn triangle_contains(&self, t: usize, p: Point) -> bool {
        let [a, b, c] = self.corners(t);
        orient(a, b, p) >= 0 && orient(b, c, p) >= 0 && orient(c, a, p) >= 0
    }

    /// Triangle containing `p`; points on shared edges or vertices resolve to
    /// the lowest triangle id among those containing them.
    pub fn locate_triangle(&self, p: Point) -> Result<usize, CdtError> {
        if !self.frame.contains(p) || self.triangles.is_empty() {
            return Err(CdtError::OutOfRange { x: p.x, y: p.y });
        }
        let hit = self.walk_to(p).or_else(|| {
            (0..self.triangles.len()).find(|&t| self.triangle_contains(t, p))
        });
        let Some(t) = hit else {
            return Err(CdtError::OutOfRange { x: p.x, y: p.y });
        };
        // Resolve ties among triangles sharing the boundary point.
        let mut best = t;
        let mut candidates: Vec<usize> = self.triangles[t].neighbors.iter().flatten().copied().collect();
        for &v in &self.triangles[t].vertices {
            candidates.extend_from_slice(self.triangles_at(v));
        }
        for c in candidates {
            if c < best && self.triangle_contains(c, p) {
                best = c;
            }
        }
        Ok(best)
    }

    /// Straight visibility walk from triangle 0 toward `p`.
    fn walk_to(&self, p: Point) -> Option<usize> {
        let mut t = 0;
        for _ in 0..self.triangles.len() + 8 {
            let [a, b, c] = self.corners(t);
            let verts = [a, b, c];
            let mut moved = false;
            for side in 0..3 {
                let (u, v) = (verts[side], verts[(side + 1) % 3]);
                if orient(u, v, p) < 0 {
                    if let Some(n) = self.triangles[t].neighbors[side] {
                        t = n;
                        moved = true;
                        break;
                    }
                    return None;
                }
            }
            if !moved {
                return Some(t);
            }
        }
        None
    }

    /// JSON dump of the triangles for visual inspection.
    pub fn debug_json(&self) -> serde_json::Value {
        serde_json::json!({
            "points": self.points.iter().map(|p| [p.x, p.y]).collect::<Vec<_>>(),
            "triangles": self.triangles,
        })
    }
}

/// Adjacency of the triangles. Every shared side yields an edge; sides on an
/// obstacle boundary are flagged as walls and may only be crossed into or out
/// of the endpoint obstacles of a query.
#[derive(Debug, Clone)]
pub struct DualGraph {
    pub centroids: Vec<Point>,
    offsets: Vec<usize>,
    arcs: Vec<DualArc>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualArc {
    pub to: usize,
    pub weight: f64,
    pub wall: bool,
}

impl DualGraph {
    pub fn vertex_count(&self) -> usize {
        self.centroids.len()
    }

    pub fn neighbors(&self, t: usize) -> &[DualArc] {
        &self.arcs[self.offsets[t]..self.offsets[t + 1]]
    }

    /// Number of undirected dual edges.
    pub fn edge_count(&self) -> usize {
        self.arcs.len() / 2
    }

    /// Undirected edges as `(a, b, weight, wall)` with `a < b`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64, bool)> + '_ {
        (0..self.vertex_count()).flat_map(move |a| {
            self.neighbors(a)
                .iter()
                .filter(move |arc| arc.to > a)
                .map(move |arc| (a, arc.to, arc.weight, arc.wall))
        })
    }
}

pub fn dual_graph(cdt: &Cdt) -> DualGraph {
    let centroids: Vec<Point> = (0..cdt.triangles.len()).map(|t| cdt.centroid(t)).collect();
    let mut offsets = Vec::with_capacity(cdt.triangles.len() + 1);
    let mut arcs = Vec::with_capacity(3 * cdt.triangles.len());
    offsets.push(0);
    for (t, tri) in cdt.triangles.iter().enumerate() {
        for side in 0..3 {
            if let Some(n) = tri.neighbors[side] {
                arcs.push(DualArc {
                    to: n,
                    weight: centroids[t].dist(centroids[n]),
                    wall: tri.constrained[side],
                });
            }
        }
        offsets.push(arcs.len());
    }
    DualGraph {
        centroids,
        offsets,
        arcs,
    }
}
