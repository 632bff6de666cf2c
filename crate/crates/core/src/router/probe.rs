//! Straight-segment probe: walk the triangulation along the segment between
//! two centers and give up on the first triangle owned by a third node.

use crate::cdt::Cdt;
use crate::geometry::{orient, Point};

enum Cursor {
    /// Crossing a triangle interior; also records the point we left, if any.
    Tri(usize, Option<usize>),
    /// Exactly on a triangulation point.
    Vertex(usize),
}

fn allowed(owner: Option<usize>, s: usize, t: usize) -> bool {
    match owner {
        None => true,
        Some(o) => o == s || o == t,
    }
}

/// True iff the open segment between the centers of `s` and `t` only passes
/// through free space and the obstacles of `s` and `t`. Running along a
/// triangle side or through a point counts as grazing, except along a side
/// interior to a foreign obstacle.
pub fn straight_probe(cdt: &Cdt, s: usize, t: usize) -> bool {
    let a = cdt.points[cdt.center_vertex[s]];
    let b = cdt.points[cdt.center_vertex[t]];
    let goal = cdt.center_vertex[t];
    let mut cur = Cursor::Vertex(cdt.center_vertex[s]);
    let limit = 4 * cdt.triangles.len() + 16;
    for _ in 0..limit {
        match cur {
            Cursor::Vertex(v) => {
                if v == goal {
                    return true;
                }
                let p = cdt.points[v];
                match leave_vertex(cdt, v, p, b) {
                    Some(Leave::Along(w, tris)) => {
                        if tris.iter().all(|&x| !allowed(cdt.triangles[x].owner, s, t)) {
                            return false;
                        }
                        cur = Cursor::Vertex(w);
                    }
                    Some(Leave::Into(tri)) => {
                        if !allowed(cdt.triangles[tri].owner, s, t) {
                            return false;
                        }
                        cur = Cursor::Tri(tri, Some(v));
                    }
                    None => return false,
                }
            }
            Cursor::Tri(tri, from) => {
                let tr = &cdt.triangles[tri];
                // The rest of the segment runs inside this (convex) triangle.
                if tr.has_vertex(goal) {
                    return true;
                }
                let vs = tr.vertices;
                let side = vs.map(|v| orient(a, b, cdt.points[v]));
                // A vertex on the line ahead of us: pass through it.
                if let Some(k) = (0..3).find(|&k| side[k] == 0 && Some(vs[k]) != from) {
                    cur = Cursor::Vertex(vs[k]);
                    continue;
                }
                // Exit side u->v has u right of the line and v left of it.
                let exit = (0..3).find(|&k| side[k] < 0 && side[(k + 1) % 3] > 0);
                let Some(k) = exit else {
                    return false;
                };
                let Some(next) = tr.neighbors[k] else {
                    return false;
                };
                if !allowed(cdt.triangles[next].owner, s, t) {
                    return false;
                }
                cur = Cursor::Tri(next, None);
            }
        }
    }
    false
}

enum Leave {
    /// Along the side to point `w`, bordered by the given triangles.
    Along(usize, Vec<usize>),
    Into(usize),
}

/// How the segment toward `b` leaves point `v`: along an incident side, or
/// into the interior of the incident triangle whose wedge contains it.
fn leave_vertex(cdt: &Cdt, v: usize, p: Point, b: Point) -> Option<Leave> {
    let tris = cdt.triangles_at(v);
    for &tri in tris {
        let vs = cdt.triangles[tri].vertices;
        let k = vs.iter().position(|&x| x == v)?;
        let u = vs[(k + 1) % 3];
        let w = vs[(k + 2) % 3];
        let (pu, pw) = (cdt.points[u], cdt.points[w]);
        let ou = orient(p, pu, b);
        let ow = orient(p, pw, b);
        if ou == 0 && (pu - p).dot(b - p) > 0.0 {
            let bordering = tris
                .iter()
                .copied()
                .filter(|&x| cdt.triangles[x].has_vertex(u))
                .collect();
            return Some(Leave::Along(u, bordering));
        }
        if ow == 0 && (pw - p).dot(b - p) > 0.0 {
            let bordering = tris
                .iter()
                .copied()
                .filter(|&x| cdt.triangles[x].has_vertex(w))
                .collect();
            return Some(Leave::Along(w, bordering));
        }
        // Wedge at p spans from pu counterclockwise to pw.
        if ou > 0 && ow < 0 {
            return Some(Leave::Into(tri));
        }
    }
    None
}
