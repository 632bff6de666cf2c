//! Sleeve search on the dual graph: greedy root selection, batched
//! Dijkstra trees and the per-edge A* baseline.

use std::cmp::Ordering;
use std::collections::{BTreeSet, BinaryHeap};

use super::RoutingScene;

/// Greedy maximum-degree cover of a demand graph.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexCover {
    /// Roots in the order they were picked.
    pub roots: Vec<usize>,
    /// For each input edge, the endpoint that serves it.
    pub assignment: Vec<usize>,
}

impl VertexCover {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }
}

/// Picks a vertex of maximum remaining degree (lowest index on ties), removes
/// it with its incident edges, and repeats. Parallel edges count once toward
/// the degree; every copy is assigned to the same root.
pub fn greedy_vertex_cover(node_count: usize, edges: &[(usize, usize)]) -> VertexCover {
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); node_count];
    for &(a, b) in edges {
        if a != b {
            adj[a].push(b);
            adj[b].push(a);
        }
    }
    for list in &mut adj {
        list.sort_unstable();
        list.dedup();
    }
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let max_degree = degree.iter().copied().max().unwrap_or(0);
    let mut buckets: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); max_degree + 1];
    for (v, &d) in degree.iter().enumerate() {
        if d > 0 {
            buckets[d].insert(v);
        }
    }
    let mut removed = vec![false; node_count];
    let mut order = vec![usize::MAX; node_count];
    let mut roots = Vec::new();
    let mut top = max_degree;
    while top > 0 {
        let Some(&v) = buckets[top].iter().next() else {
            top -= 1;
            continue;
        };
        buckets[top].remove(&v);
        removed[v] = true;
        order[v] = roots.len();
        roots.push(v);
        for &u in &adj[v] {
            if removed[u] {
                continue;
            }
            let d = degree[u];
            buckets[d].remove(&u);
            degree[u] = d - 1;
            if d > 1 {
                buckets[d - 1].insert(u);
            }
        }
        degree[v] = 0;
    }
    let assignment = edges
        .iter()
        .map(|&(a, b)| if order[a] <= order[b] { a } else { b })
        .collect();
    VertexCover { roots, assignment }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct QueueEntry {
    key: f64,
    tri: usize,
}

impl Eq for QueueEntry {}

impl Ord for QueueEntry {
    // Reversed so that `BinaryHeap` pops the smallest key, then lowest id.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .key
            .total_cmp(&self.key)
            .then_with(|| other.tri.cmp(&self.tri))
    }
}

impl PartialOrd for QueueEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

const NO_PARENT: usize = usize::MAX;

/// Per-worker scratch space reused across searches.
#[derive(Debug, Default)]
pub struct SearchBuffers {
    dist: Vec<f64>,
    parent: Vec<usize>,
    seen: Vec<u32>,
    done: Vec<u32>,
    target_mark: Vec<u32>,
    stamp: u32,
    heap: BinaryHeap<QueueEntry>,
}

impl SearchBuffers {
    fn reset(&mut self, tris: usize, nodes: usize) {
        if self.dist.len() < tris {
            self.dist.resize(tris, f64::INFINITY);
            self.parent.resize(tris, NO_PARENT);
            self.seen.resize(tris, 0);
            self.done.resize(tris, 0);
        }
        if self.target_mark.len() < nodes {
            self.target_mark.resize(nodes, 0);
        }
        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.seen.iter_mut().for_each(|s| *s = 0);
            self.done.iter_mut().for_each(|s| *s = 0);
            self.target_mark.iter_mut().for_each(|s| *s = 0);
            self.stamp = 1;
        }
        self.heap.clear();
    }

    fn relax(&mut self, tri: usize, d: f64, parent: usize, key: f64) {
        if self.seen[tri] != self.stamp || d < self.dist[tri] {
            self.seen[tri] = self.stamp;
            self.dist[tri] = d;
            self.parent[tri] = parent;
            self.heap.push(QueueEntry { key, tri });
        }
    }

    /// Triangle path from a root-owned triangle to `tri`, following parent
    /// pointers of the last search.
    pub fn path_to(&self, tri: usize) -> Vec<usize> {
        let mut path = vec![tri];
        let mut cur = tri;
        while self.parent[cur] != NO_PARENT {
            cur = self.parent[cur];
            path.push(cur);
        }
        path.reverse();
        path
    }
}

/// A target reached by a tree search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reached {
    pub node: usize,
    pub tri: usize,
    pub cost: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TreeResult {
    /// Reached targets in the order they were settled.
    pub reached: Vec<Reached>,
    pub expansions: u64,
}

/// Multi-source Dijkstra from every triangle owned by `root` until each node
/// in `targets` has had one of its owned triangles settled. Triangles owned by
/// other nodes are blocked; a target's triangles are entered but never left.
pub fn dijkstra_tree(
    scene: &RoutingScene,
    root: usize,
    targets: &[usize],
    buf: &mut SearchBuffers,
) -> TreeResult {
    let cdt = &scene.cdt;
    buf.reset(cdt.triangles.len(), scene.node_count());
    let stamp = buf.stamp;
    let mut remaining = 0usize;
    for &t in targets {
        if t != root && buf.target_mark[t] != stamp {
            buf.target_mark[t] = stamp;
            remaining += 1;
        }
    }
    let mut result = TreeResult::default();
    if remaining == 0 {
        return result;
    }
    for &tri in &cdt.owned[root] {
        buf.relax(tri, 0.0, NO_PARENT, 0.0);
    }
    // A target is pending while its mark equals the stamp; reaching it clears the mark.
    while let Some(QueueEntry { key, tri }) = buf.heap.pop() {
        if buf.done[tri] == stamp || key > buf.dist[tri] {
            continue;
        }
        buf.done[tri] = stamp;
        result.expansions += 1;
        let owner = cdt.triangles[tri].owner;
        if let Some(o) = owner {
            if o != root {
                if buf.target_mark[o] == stamp {
                    buf.target_mark[o] = 0;
                    result.reached.push(Reached {
                        node: o,
                        tri,
                        cost: key,
                    });
                    remaining -= 1;
                    if remaining == 0 {
                        break;
                    }
                }
                continue;
            }
        }
        for arc in scene.dual.neighbors(tri) {
            if buf.done[arc.to] == stamp {
                continue;
            }
            match cdt.triangles[arc.to].owner {
                None => {}
                Some(o) if o == root => {}
                Some(o) if buf.target_mark[o] == stamp => {}
                Some(_) => continue,
            }
            let d = key + arc.weight;
            buf.relax(arc.to, d, tri, d);
        }
    }
    result
}

/// Single-pair A* from `s` to `t` with a consistent heuristic: the distance
/// from a centroid to `t`'s center, less the radius of `t`'s owned fan.
/// Returns the reached target triangle and the number of expansions.
pub fn astar_single(
    scene: &RoutingScene,
    s: usize,
    t: usize,
    buf: &mut SearchBuffers,
) -> (Option<Reached>, u64) {
    let cdt = &scene.cdt;
    buf.reset(cdt.triangles.len(), scene.node_count());
    let stamp = buf.stamp;
    let goal = scene.obstacles.centers[t];
    let slack = scene.fan_radius(t);
    let h = |tri: usize| (scene.dual.centroids[tri].dist(goal) - slack).max(0.0);
    for &tri in &cdt.owned[s] {
        buf.relax(tri, 0.0, NO_PARENT, h(tri));
    }
    let mut expansions = 0u64;
    while let Some(QueueEntry { tri, .. }) = buf.heap.pop() {
        if buf.done[tri] == stamp {
            continue;
        }
        buf.done[tri] = stamp;
        expansions += 1;
        let g = buf.dist[tri];
        match cdt.triangles[tri].owner {
            Some(o) if o == t => {
                return (
                    Some(Reached {
                        node: t,
                        tri,
                        cost: g,
                    }),
                    expansions,
                )
            }
            _ => {}
        }
        for arc in scene.dual.neighbors(tri) {
            if buf.done[arc.to] == stamp {
                continue;
            }
            match cdt.triangles[arc.to].owner {
                None => {}
                Some(o) if o == s || o == t => {}
                Some(_) => continue,
            }
            let d = g + arc.weight;
            buf.relax(arc.to, d, tri, d + h(arc.to));
        }
    }
    (None, expansions)
}
