//! Sleeves (triangle corridors), endpoint collapse and the funnel.

use serde::Serialize;

use crate::cdt::Cdt;
use crate::geometry::{orient, Point, Polyline};

/// A vertex of a sleeve chain: a triangulation point, or one of the two
/// endpoints once collapse has merged obstacle corners into them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ChainPoint {
    Vertex(usize),
    Source,
    Target,
}

/// A crossed triangle side, as seen walking from source to target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Diagonal {
    pub left: ChainPoint,
    pub right: ChainPoint,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sleeve {
    pub source: usize,
    pub target: usize,
    pub triangles: Vec<usize>,
    pub diagonals: Vec<Diagonal>,
}

impl Sleeve {
    pub fn resolve(&self, cp: ChainPoint, points: &[Point], s: Point, t: Point) -> Point {
        match cp {
            ChainPoint::Vertex(v) => points[v],
            ChainPoint::Source => s,
            ChainPoint::Target => t,
        }
    }

    /// Dual path length: sum of centroid distances along the triangles.
    pub fn dual_cost(&self, cdt: &Cdt) -> f64 {
        self.triangles
            .windows(2)
            .map(|w| cdt.centroid(w[0]).dist(cdt.centroid(w[1])))
            .sum()
    }

    /// Left and right chains with consecutive repeats removed.
    pub fn chains(&self) -> (Vec<ChainPoint>, Vec<ChainPoint>) {
        let mut left: Vec<ChainPoint> = Vec::new();
        let mut right: Vec<ChainPoint> = Vec::new();
        for d in &self.diagonals {
            if left.last() != Some(&d.left) {
                left.push(d.left);
            }
            if right.last() != Some(&d.right) {
                right.push(d.right);
            }
        }
        (left, right)
    }

    /// Boundary of the corridor: `s`, the right chain, `t`, then the left
    /// chain backwards. Counterclockwise for an uncollapsed sleeve.
    pub fn corridor(&self, points: &[Point], s: Point, t: Point) -> Vec<Point> {
        let (left, right) = self.chains();
        let mut ring = vec![s];
        ring.extend(right.iter().map(|&c| self.resolve(c, points, s, t)));
        ring.push(t);
        ring.extend(left.iter().rev().map(|&c| self.resolve(c, points, s, t)));
        ring.dedup();
        if ring.len() > 1 && ring.first() == ring.last() {
            ring.pop();
        }
        ring
    }
}

/// Builds the sleeve for a triangle path running from `source`'s side to
/// `target`'s side. Leaving triangle `a` through its side `v_k -> v_{k+1}`,
/// `v_{k+1}` is on the left and `v_k` on the right.
pub fn extract_sleeve(cdt: &Cdt, triangles: Vec<usize>, source: usize, target: usize) -> Sleeve {
    let diagonals = triangles
        .windows(2)
        .map(|w| {
            let a = &cdt.triangles[w[0]];
            let k = a
                .side_towards(w[1])
                .expect("consecutive sleeve triangles are adjacent");
            Diagonal {
                left: ChainPoint::Vertex(a.vertices[(k + 1) % 3]),
                right: ChainPoint::Vertex(a.vertices[k]),
            }
        })
        .collect();
    Sleeve {
        source,
        target,
        triangles,
        diagonals,
    }
}

/// A run of consecutive diagonals sharing one chain vertex.
struct Run {
    point: ChainPoint,
    first: usize,
    last: usize,
}

fn runs(diagonals: &[Diagonal], left_side: bool) -> Vec<Run> {
    let mut out: Vec<Run> = Vec::new();
    for (i, d) in diagonals.iter().enumerate() {
        let p = if left_side { d.left } else { d.right };
        match out.last_mut() {
            Some(r) if r.point == p => r.last = i,
            _ => out.push(Run {
                point: p,
                first: i,
                last: i,
            }),
        }
    }
    out
}

/// Collapses corner-hugging chain vertices of the endpoint obstacles into the
/// endpoints. On each chain, starting from `s` and walking the prefix of
/// vertices owned by the source, the first one where the chain turns toward
/// its own side (right for the right chain, left for the left chain) is found
/// and it and every earlier source vertex become `s`. The target end is
/// treated the same way walking back from `t`. Turns are measured on the
/// uncollapsed geometry. Diagonals whose endpoints coincide afterwards are
/// dropped.
pub fn collapse_ends(sleeve: &Sleeve, cdt: &Cdt, s: Point, t: Point) -> Sleeve {
    collapse_sides(sleeve, cdt, s, t, true, true)
}

/// [`collapse_ends`] restricted to the chosen ends.
pub fn collapse_sides(sleeve: &Sleeve, cdt: &Cdt, s: Point, t: Point, source: bool, target: bool) -> Sleeve {
    let mut diagonals = sleeve.diagonals.clone();
    let owner_of = |cp: ChainPoint| match cp {
        ChainPoint::Vertex(v) => cdt.point_owner[v],
        _ => None,
    };
    for left_side in [false, true] {
        let chain = runs(&sleeve.diagonals, left_side);
        let pos = |i: usize| -> Point {
            match chain.get(i) {
                Some(r) => sleeve.resolve(r.point, &cdt.points, s, t),
                None => t,
            }
        };
        let turns_inward = |i: usize| -> bool {
            let prev = if i == 0 { s } else { pos(i - 1) };
            let o = orient(prev, pos(i), pos(i + 1));
            if left_side {
                o > 0
            } else {
                o < 0
            }
        };
        let mut assign = |range: std::ops::RangeInclusive<usize>, to: ChainPoint| {
            for r in &chain[range] {
                for d in &mut diagonals[r.first..=r.last] {
                    if left_side {
                        d.left = to;
                    } else {
                        d.right = to;
                    }
                }
            }
        };

        let source_prefix = chain
            .iter()
            .take_while(|r| owner_of(r.point) == Some(sleeve.source))
            .count();
        let head = if source {
            (0..source_prefix).find(|&i| turns_inward(i))
        } else {
            None
        };
        if let Some(j) = head {
            assign(0..=j, ChainPoint::Source);
        }

        let start = head.map_or(0, |j| j + 1);
        let target_suffix = chain[start..]
            .iter()
            .rev()
            .take_while(|r| owner_of(r.point) == Some(sleeve.target))
            .count();
        let n = chain.len();
        let tail = (n - target_suffix..n).rev().find(|&i| turns_inward(i));
        if let Some(j) = tail.filter(|_| target) {
            assign(j..=n - 1, ChainPoint::Target);
        }
    }
    diagonals.retain(|d| d.left != d.right);
    Sleeve {
        source: sleeve.source,
        target: sleeve.target,
        triangles: sleeve.triangles.clone(),
        diagonals,
    }
}

/// Shortest path from `s` to `t` through the sleeve's diagonals (simple
/// stupid funnel). Interior vertices are always diagonal endpoints.
pub fn funnel(sleeve: &Sleeve, points: &[Point], s: Point, t: Point) -> Polyline {
    let mut portals = Vec::with_capacity(sleeve.diagonals.len() + 2);
    portals.push((s, s));
    for d in &sleeve.diagonals {
        portals.push((
            sleeve.resolve(d.left, points, s, t),
            sleeve.resolve(d.right, points, s, t),
        ));
    }
    portals.push((t, t));
    Polyline::new(funnel_portals(&portals))
}

/// Funnel over explicit `(left, right)` portals; the first and last portals
/// are the degenerate start and end points.
pub fn funnel_portals(portals: &[(Point, Point)]) -> Vec<Point> {
    let start = portals[0].0;
    let end = portals[portals.len() - 1].0;
    let mut path = vec![start];
    let mut apex = start;
    let (mut left, mut right) = (start, start);
    let (mut left_idx, mut right_idx) = (0usize, 0usize);
    let mut i = 1;
    while i < portals.len() {
        let (pl, pr) = portals[i];

        if orient(apex, right, pr) >= 0 {
            if apex == right || orient(apex, left, pr) < 0 {
                right = pr;
                right_idx = i;
            } else {
                path.push(left);
                apex = left;
                let apex_idx = left_idx;
                right = apex;
                right_idx = apex_idx;
                i = apex_idx + 1;
                continue;
            }
        }

        if orient(apex, left, pl) <= 0 {
            if apex == left || orient(apex, right, pl) > 0 {
                left = pl;
                left_idx = i;
            } else {
                path.push(right);
                apex = right;
                let apex_idx = right_idx;
                left = apex;
                left_idx = apex_idx;
                i = apex_idx + 1;
                continue;
            }
        }
        i += 1;
    }
    if path.last() != Some(&end) {
        path.push(end);
    }
    path.dedup();
    path
}
