//! Edge clips: splitting at tile midlines, clipping to the root square, and
//! bundling clips with matching endpoints.

use std::collections::HashMap;

use serde::Serialize;

use crate::geometry::{Point, Rect};

/// A piece of one or more routes confined to a tile.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EdgeClip {
    pub path: Vec<Point>,
    /// Graph edge indices; never empty.
    pub edges: Vec<usize>,
}

/// Child quadrant as `(dx, dy)` with `dy = 1` for the upper half.
pub type Quadrant = (u32, u32);

/// Quadrant of point `p` relative to `center`; ties go to the lower side.
pub fn quadrant_of(p: Point, center: Point) -> Quadrant {
    (u32::from(p.x > center.x), u32::from(p.y > center.y))
}

/// Splits a polyline where it crosses a midline through `c` and at every
/// interior vertex lying on one (touches included). Crossing points are
/// snapped onto the midline. Each piece comes with the quadrant holding its
/// first segment's midpoint. Concatenating the pieces gives back the input
/// with the split points inserted.
pub fn split_by_midlines(path: &[Point], c: Point) -> Vec<(Quadrant, Vec<Point>)> {
    let mut pieces: Vec<Vec<Point>> = Vec::new();
    let mut current = vec![path[0]];
    let last = path.len() - 1;
    let mut cut = |current: &mut Vec<Point>, p: Point| {
        if current.last() != Some(&p) {
            current.push(p);
        }
        if current.len() >= 2 {
            pieces.push(std::mem::replace(current, vec![p]));
        }
    };
    for i in 0..last {
        let (a, b) = (path[i], path[i + 1]);
        let mut cuts: Vec<(f64, Point)> = Vec::with_capacity(2);
        if (a.x - c.x) * (b.x - c.x) < 0.0 {
            let t = (c.x - a.x) / (b.x - a.x);
            cuts.push((t, Point::new(c.x, a.y + t * (b.y - a.y))));
        }
        if (a.y - c.y) * (b.y - c.y) < 0.0 {
            let t = (c.y - a.y) / (b.y - a.y);
            cuts.push((t, Point::new(a.x + t * (b.x - a.x), c.y)));
        }
        if cuts.len() == 2 {
            if cuts[0].0 == cuts[1].0 {
                cuts[0].1 = c;
                cuts.pop();
            } else if cuts[1].0 < cuts[0].0 {
                cuts.swap(0, 1);
            }
        }
        for (_, p) in cuts {
            cut(&mut current, p);
        }
        if current.last() != Some(&b) {
            current.push(b);
        }
        if i + 1 != last && (b.x == c.x || b.y == c.y) {
            cut(&mut current, b);
        }
    }
    if current.len() >= 2 {
        pieces.push(current);
    }
    pieces
        .into_iter()
        .map(|piece| (quadrant_of(piece[0].midpoint(piece[1]), c), piece))
        .collect()
}

/// Parts of a polyline inside a closed rectangle, in order.
pub fn clip_to_rect(path: &[Point], rect: &Rect) -> Vec<Vec<Point>> {
    let mut out: Vec<Vec<Point>> = Vec::new();
    let mut current: Vec<Point> = Vec::new();
    for w in path.windows(2) {
        let (a, b) = (w[0], w[1]);
        match rect.clip_segment(a, b) {
            Some((t0, t1)) => {
                let p = if t0 == 0.0 { a } else { a.lerp(b, t0) };
                let q = if t1 == 1.0 { b } else { a.lerp(b, t1) };
                if current.last() != Some(&p) {
                    if current.len() >= 2 {
                        out.push(std::mem::take(&mut current));
                    }
                    current = vec![p];
                }
                if q != p {
                    current.push(q);
                }
                if t1 < 1.0 && current.len() >= 2 {
                    out.push(std::mem::take(&mut current));
                }
            }
            None => {
                if current.len() >= 2 {
                    out.push(std::mem::take(&mut current));
                }
                current.clear();
            }
        }
    }
    if current.len() >= 2 {
        out.push(current);
    }
    out
}

/// Merges clips whose endpoint pairs agree within `tol` (in either
/// direction). The first clip of a group keeps its geometry and collects the
/// edge lists of the later ones, in order.
pub fn bundle_clips(clips: Vec<EdgeClip>, tol: f64) -> Vec<EdgeClip> {
    if clips.len() < 2 {
        return clips;
    }
    let cell = tol.max(f64::MIN_POSITIVE);
    let key = |p: Point| ((p.x / cell).floor() as i64, (p.y / cell).floor() as i64);
    let mut out: Vec<EdgeClip> = Vec::with_capacity(clips.len());
    let mut index: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    let close = |p: Point, q: Point| p.dist(q) <= tol;
    for clip in clips {
        let (p, q) = (clip.path[0], *clip.path.last().expect("non-empty clip"));
        let (kx, ky) = key(p);
        let mut found: Option<usize> = None;
        for dy in -1..=1 {
            for dx in -1..=1 {
                if let Some(ids) = index.get(&(kx + dx, ky + dy)) {
                    for &id in ids {
                        let o = &out[id].path;
                        let (a, b) = (o[0], o[o.len() - 1]);
                        let same = (close(a, p) && close(b, q)) || (close(a, q) && close(b, p));
                        if same && found.is_none_or(|f| id < f) {
                            found = Some(id);
                        }
                    }
                }
            }
        }
        match found {
            Some(id) => out[id].edges.extend_from_slice(&clip.edges),
            None => {
                let id = out.len();
                let (ka, kb) = (key(p), key(q));
                index.entry(ka).or_default().push(id);
                if kb != ka {
                    index.entry(kb).or_default().push(id);
                }
                out.push(clip);
            }
        }
    }
    out
}

/// True when every interior vertex of `path` lies strictly inside `rect` and
/// no segment touches the boundary except at the path's two endpoints.
pub fn meets_boundary_only_at_endpoints(path: &[Point], rect: &Rect) -> bool {
    let on_boundary = |p: Point| {
        rect.contains(p)
            && (p.x == rect.min.x || p.x == rect.max.x || p.y == rect.min.y || p.y == rect.max.y)
    };
    if !path.iter().all(|&p| rect.contains(p)) {
        return false;
    }
    if path[1..path.len() - 1].iter().any(|&p| on_boundary(p)) {
        return false;
    }
    // A segment between two interior points cannot touch the boundary of a
    // convex region; one with a boundary endpoint only touches it there
    // unless it runs along a side.
    path.windows(2).all(|w| {
        let (a, b) = (w[0], w[1]);
        let along = (a.x == b.x && (a.x == rect.min.x || a.x == rect.max.x))
            || (a.y == b.y && (a.y == rect.min.y || a.y == rect.max.y));
        !along
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    /// The polyline of the five-sub-clip illustration: crossings at a, b, c
    /// and a touch of the horizontal midline at d.
    fn five_clip_fixture() -> (Rect, Vec<Point>) {
        let tile = Rect::from_corners(p(0.0, 0.0), p(5.0, 5.0));
        let path = vec![
            p(0.5, 3.8),
            p(1.5, 1.2),
            p(3.4, 1.7),
            p(3.7, 3.3),
            p(4.1, 2.5),
            p(4.55, 3.3),
            p(5.0, 3.5),
        ];
        (tile, path)
    }

    #[test]
    fn five_sub_clips() {
        let (tile, path) = five_clip_fixture();
        let pieces = split_by_midlines(&path, tile.center());
        assert_eq!(pieces.len(), 5);
        let quads: Vec<Quadrant> = pieces.iter().map(|(q, _)| *q).collect();
        assert_eq!(quads, vec![(0, 1), (0, 0), (1, 0), (1, 1), (1, 1)]);
        assert_eq!(pieces[0].1.last().unwrap().y, 2.5);
        assert_eq!(pieces[1].1.last().unwrap().x, 2.5);
        assert_eq!(*pieces[3].1.last().unwrap(), p(4.1, 2.5));
        for (q, piece) in &pieces {
            let (cx, cy) = (2.5 * q.0 as f64, 2.5 * q.1 as f64);
            let sub = Rect::from_corners(p(cx, cy), p(cx + 2.5, cy + 2.5));
            assert!(meets_boundary_only_at_endpoints(piece, &sub));
        }
    }

    #[test]
    fn clip_in_one_quadrant_is_unchanged() {
        let tile = Rect::from_corners(p(0.0, 0.0), p(4.0, 4.0));
        let path = vec![p(0.0, 0.5), p(1.0, 1.5), p(1.5, 0.0)];
        let pieces = split_by_midlines(&path, tile.center());
        assert_eq!(pieces, vec![((0, 0), path)]);
    }

    #[test]
    fn identical_clips_bundle() {
        let path = vec![p(0.0, 0.0), p(1.0, 1.0)];
        let clips = vec![
            EdgeClip {
                path: path.clone(),
                edges: vec![3],
            },
            EdgeClip {
                path: path.iter().rev().copied().collect(),
                edges: vec![7],
            },
            EdgeClip {
                path: vec![p(0.0, 0.0), p(1.0, 1.1)],
                edges: vec![9],
            },
        ];
        let out = bundle_clips(clips, 1e-3);
        assert_eq!(out.len(), 2);
        assert_eq!(out[0].path, path);
        assert_eq!(out[0].edges, vec![3, 7]);
        assert_eq!(out[1].edges, vec![9]);
    }

    #[test]
    fn root_clip_keeps_inside_parts() {
        let r = Rect::from_corners(p(0.0, 0.0), p(2.0, 2.0));
        let parts = clip_to_rect(&[p(-1.0, 1.0), p(1.0, 1.0), p(1.0, 3.0), p(1.5, 1.0)], &r);
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0], vec![p(0.0, 1.0), p(1.0, 1.0), p(1.0, 2.0)]);
    }
}
