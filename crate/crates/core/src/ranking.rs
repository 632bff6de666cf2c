//! PageRank ordering and per-level node selection with adaptive scales.

use std::collections::HashMap;

use serde::Serialize;

use crate::geometry::{Point, Rect};

pub const DAMPING: f64 = 0.85;
pub const TOLERANCE: f64 = 1e-10;
pub const MAX_ITERATIONS: usize = 200;

/// PageRank by power iteration on the symmetrized edge set (each edge counts
/// in both directions, parallel edges count repeatedly). Mass of nodes
/// without edges is spread uniformly. Stops when the L1 change drops below
/// `tol` or after `max_iter` rounds; the result is normalized to sum 1.
pub fn pagerank(
    node_count: usize,
    edges: &[(usize, usize)],
    damping: f64,
    tol: f64,
    max_iter: usize,
) -> Vec<f64> {
    let n = node_count;
    if n == 0 {
        return Vec::new();
    }
    let mut out_degree = vec![0usize; n];
    let mut offsets = vec![0usize; n + 1];
    for &(a, b) in edges {
        out_degree[a] += 1;
        out_degree[b] += 1;
        offsets[a + 1] += 1;
        offsets[b + 1] += 1;
    }
    for i in 0..n {
        offsets[i + 1] += offsets[i];
    }
    // Incoming neighbor lists (equal to outgoing ones for a symmetric graph).
    let mut fill = offsets.clone();
    let mut incoming = vec![0usize; offsets[n]];
    for &(a, b) in edges {
        incoming[fill[b]] = a;
        fill[b] += 1;
        incoming[fill[a]] = b;
        fill[a] += 1;
    }
    let uniform = 1.0 / n as f64;
    let mut rank = vec![uniform; n];
    let mut next = vec![0.0; n];
    for _ in 0..max_iter {
        let dangling: f64 = (0..n).filter(|&i| out_degree[i] == 0).map(|i| rank[i]).sum();
        let base = (1.0 - damping) * uniform + damping * dangling * uniform;
        for v in 0..n {
            let inflow: f64 = incoming[offsets[v]..offsets[v + 1]]
                .iter()
                .map(|&u| rank[u] / out_degree[u] as f64)
                .sum();
            next[v] = base + damping * inflow;
        }
        let delta: f64 = rank.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut rank, &mut next);
        if delta < tol {
            break;
        }
    }
    let total: f64 = rank.iter().sum();
    rank.iter_mut().for_each(|r| *r /= total);
    rank
}

/// All nodes by descending rank, ties by lower index.
pub fn rank_order(ranks: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..ranks.len()).collect();
    order.sort_by(|&a, &b| ranks[b].total_cmp(&ranks[a]).then(a.cmp(&b)));
    order
}

/// The top `ceil(|V| / 2^k)` nodes of the rank order.
pub fn level_prefix(order: &[usize], k: u32) -> &[usize] {
    let len = prefix_len(order.len(), k);
    &order[..len]
}

pub fn prefix_len(n: usize, k: u32) -> usize {
    if k >= usize::BITS {
        return n.min(1);
    }
    n.div_ceil(1usize << k)
}

/// Uniform grid keyed by cell coordinates; each box is registered in the
/// cell holding its center. With a cell at least as large as any box, every
/// box overlapping a query box is registered in the 3x3 block around the
/// query's center cell.
#[derive(Debug, Clone)]
pub struct SpatialHash {
    cell: f64,
    cells: HashMap<(i64, i64), Vec<usize>>,
    boxes: Vec<Rect>,
}

impl SpatialHash {
    pub fn new(cell: f64) -> Self {
        assert!(cell > 0.0 && cell.is_finite(), "cell size must be positive");
        SpatialHash {
            cell,
            cells: HashMap::new(),
            boxes: Vec::new(),
        }
    }

    fn key(&self, p: Point) -> (i64, i64) {
        ((p.x / self.cell).floor() as i64, (p.y / self.cell).floor() as i64)
    }

    /// Stores a box and returns its handle.
    pub fn insert(&mut self, b: Rect) -> usize {
        let id = self.boxes.len();
        self.cells.entry(self.key(b.center())).or_default().push(id);
        self.boxes.push(b);
        id
    }

    pub fn get(&self, id: usize) -> Rect {
        self.boxes[id]
    }

    pub fn len(&self) -> usize {
        self.boxes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    /// Handles of every box registered in the 3x3 cells around `b`'s center,
    /// in ascending order.
    pub fn query_neighbors(&self, b: &Rect) -> Vec<usize> {
        let (cx, cy) = self.key(b.center());
        let mut out = Vec::new();
        for dy in -1..=1 {
            for dx in -1..=1 {
                if let Some(ids) = self.cells.get(&(cx + dx, cy + dy)) {
                    out.extend_from_slice(ids);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Handles of stored boxes whose interior overlaps `b`.
    pub fn overlapping(&self, b: &Rect) -> Vec<usize> {
        self.query_neighbors(b)
            .into_iter()
            .filter(|&id| self.boxes[id].overlaps(b))
            .collect()
    }
}

/// `b` scaled by `s` about `c`.
pub fn scale_about(b: &Rect, c: Point, s: f64) -> Rect {
    Rect {
        min: c + (b.min - c) * s,
        max: c + (b.max - c) * s,
    }
}

/// Largest scale `s >= 0` for which `b` scaled about `c` does not overlap the
/// interior of `other`: the best of the four separating directions.
fn max_disjoint_scale(b: &Rect, c: Point, other: &Rect) -> f64 {
    // Moving face at c + (face - c) * s must stay on the near side of `limit`.
    let bound = |extent: f64, gap: f64| -> f64 {
        if extent > 0.0 {
            gap / extent
        } else if gap >= 0.0 {
            f64::INFINITY
        } else {
            f64::NEG_INFINITY
        }
    };
    let right = bound(b.max.x - c.x, other.min.x - c.x);
    let left = bound(c.x - b.min.x, c.x - other.max.x);
    let up = bound(b.max.y - c.y, other.min.y - c.y);
    let down = bound(c.y - b.min.y, c.y - other.max.y);
    right.max(left).max(up).max(down)
}

/// Relative safety margin so rounding never turns touching into overlap.
const SCALE_MARGIN: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelSelection {
    pub depth: u32,
    /// Accepted nodes in rank order with their display scales.
    pub selected: Vec<(usize, f64)>,
    pub dropped: Vec<usize>,
}

impl LevelSelection {
    pub fn scale_of(&self) -> HashMap<usize, f64> {
        self.selected.iter().copied().collect()
    }
}

/// Walks `prefix` in rank order. The first node gets scale `2^depth`; each
/// later node gets the largest scale no larger than its predecessor's at
/// which its box, scaled about its center, overlaps no accepted box. A node
/// that overlaps even at scale 1 is dropped and reserves no space.
pub fn select_with_adaptive_scale(
    prefix: &[usize],
    boxes: &[Rect],
    centers: &[Point],
    depth: u32,
) -> LevelSelection {
    let top = 2f64.powi(depth as i32);
    let max_extent = prefix
        .iter()
        .map(|&v| boxes[v].width().max(boxes[v].height()))
        .fold(0.0, f64::max);
    let cell = (top * max_extent).max(f64::MIN_POSITIVE.sqrt());
    let mut hash = SpatialHash::new(cell);
    let mut selected = Vec::with_capacity(prefix.len());
    let mut dropped = Vec::new();
    let mut prev = top;
    for &v in prefix {
        let (b, c) = (boxes[v], centers[v]);
        let probe = scale_about(&b, c, prev);
        let mut s = prev;
        for id in hash.query_neighbors(&probe) {
            let other = hash.get(id);
            if other.overlaps(&probe) {
                s = s.min(max_disjoint_scale(&b, c, &other) * (1.0 - SCALE_MARGIN));
            }
        }
        if s < 1.0 {
            // Scale 1 is allowed only if truly disjoint at the original size.
            let unit = scale_about(&b, c, 1.0);
            let clear = hash
                .query_neighbors(&unit)
                .into_iter()
                .all(|id| !hash.get(id).overlaps(&unit));
            if !clear {
                dropped.push(v);
                continue;
            }
            s = 1.0;
        }
        hash.insert(scale_about(&b, c, s));
        selected.push((v, s));
        prev = s;
    }
    LevelSelection {
        depth,
        selected,
        dropped,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(x: f64, y: f64) -> (Rect, Point) {
        let c = Point::new(x, y);
        (Rect::from_center(c, 1.0, 1.0), c)
    }

    #[test]
    fn single_node_has_all_mass() {
        assert_eq!(pagerank(1, &[], DAMPING, TOLERANCE, MAX_ITERATIONS), vec![1.0]);
    }

    #[test]
    fn single_edge_is_symmetric() {
        let r = pagerank(2, &[(0, 1)], DAMPING, TOLERANCE, MAX_ITERATIONS);
        assert!((r[0] - 0.5).abs() < 1e-12 && (r[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn prefix_lengths() {
        let order: Vec<usize> = (0..407).collect();
        assert_eq!(level_prefix(&order, 0).len(), 407);
        assert_eq!(level_prefix(&order, 3).len(), 51);
    }

    #[test]
    fn depth_zero_keeps_everything_at_scale_one() {
        let (boxes, centers): (Vec<_>, Vec<_>) =
            [unit(0.0, 0.0), unit(1.0, 0.0), unit(5.0, 5.0)].into_iter().unzip();
        let sel = select_with_adaptive_scale(&[0, 1, 2], &boxes, &centers, 0);
        assert_eq!(sel.selected, vec![(0, 1.0), (1, 1.0), (2, 1.0)]);
        assert!(sel.dropped.is_empty());
    }

    #[test]
    fn distant_nodes_both_get_full_scale() {
        let (boxes, centers): (Vec<_>, Vec<_>) =
            [unit(0.0, 0.0), unit(100.0, 0.0)].into_iter().unzip();
        let sel = select_with_adaptive_scale(&[0, 1], &boxes, &centers, 2);
        assert_eq!(sel.selected, vec![(0, 4.0), (1, 4.0)]);
    }

    #[test]
    fn tight_neighbor_of_top_node_is_dropped() {
        // The second box sits inside the area the first one covers at scale 4.
        let (boxes, centers): (Vec<_>, Vec<_>) =
            [unit(0.0, 0.0), unit(1.2, 0.0)].into_iter().unzip();
        let sel = select_with_adaptive_scale(&[0, 1], &boxes, &centers, 2);
        assert_eq!(sel.selected, vec![(0, 4.0)]);
        assert_eq!(sel.dropped, vec![1]);
    }

    #[test]
    fn squeezed_neighbor_gets_partial_scale() {
        let (boxes, centers): (Vec<_>, Vec<_>) =
            [unit(0.0, 0.0), unit(3.0, 0.0)].into_iter().unzip();
        let sel = select_with_adaptive_scale(&[0, 1], &boxes, &centers, 2);
        // First box spans [-2, 2]; the second may grow to half-width 1.
        let (_, s) = sel.selected[1];
        assert!(s <= 2.0 && s > 2.0 * (1.0 - 1e-6));
        let a = scale_about(&boxes[0], centers[0], 4.0);
        let b = scale_about(&boxes[1], centers[1], s);
        assert!(!a.overlaps(&b));
    }
}
