//! Seeded random instances for tests and benchmarks. Not used by the
//! build pipeline, which has no randomness.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::{Point, Rect};
use crate::graph::{EdgeRecord, LaidOutGraph, NodeRecord};

#[derive(Debug, Clone)]
pub struct LayoutSpec {
    pub nodes: usize,
    pub edges: usize,
    /// Side of the square the centers are drawn from.
    pub extent: f64,
    pub width: (f64, f64),
    pub height: (f64, f64),
    /// Minimum gap kept between boxes.
    pub gap: f64,
    /// Bias edge endpoints toward a few hubs, as in social networks.
    pub skewed: bool,
}

impl LayoutSpec {
    /// Desk-scale instance used by the routing property suites.
    pub fn desk(nodes: usize, edges: usize) -> Self {
        LayoutSpec {
            nodes,
            edges,
            extent: 100.0,
            width: (2.0, 8.0),
            height: (1.5, 4.0),
            gap: 1.0,
            skewed: false,
        }
    }

    /// Synthetic stand-in with the size of the Game of Thrones network
    /// (407 nodes, 2639 edges) and label-shaped boxes.
    pub fn got_sized() -> Self {
        LayoutSpec {
            nodes: 407,
            edges: 2639,
            extent: 2400.0,
            width: (40.0, 110.0),
            height: (18.0, 24.0),
            gap: 6.0,
            skewed: true,
        }
    }

    /// Node and edge counts of the composers graph, at the same density as
    /// [`LayoutSpec::got_sized`].
    pub fn composers_sized() -> Self {
        LayoutSpec {
            nodes: 3405,
            edges: 13832,
            extent: 7000.0,
            ..Self::got_sized()
        }
    }
}

/// Random non-overlapping layout with random edges (no self-loops; parallel
/// edges only once all distinct pairs are used up). Deterministic in `seed`.
pub fn random_graph(spec: &LayoutSpec, seed: u64) -> LaidOutGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut boxes: Vec<Rect> = Vec::with_capacity(spec.nodes);
    let mut extent = spec.extent;
    let mut attempts = 0usize;
    while boxes.len() < spec.nodes {
        let w = rng.random_range(spec.width.0..=spec.width.1);
        let h = rng.random_range(spec.height.0..=spec.height.1);
        let c = Point::new(rng.random_range(0.0..extent), rng.random_range(0.0..extent));
        let b = Rect::from_center(c, w, h);
        if boxes.iter().all(|o| o.gap(&b) > spec.gap) {
            boxes.push(b);
            attempts = 0;
        } else {
            attempts += 1;
            if attempts > 200 {
                // Too crowded: grow the drawing area.
                extent *= 1.1;
                attempts = 0;
            }
        }
    }
    let nodes: Vec<NodeRecord> = boxes
        .iter()
        .enumerate()
        .map(|(i, b)| NodeRecord {
            id: format!("n{i}"),
            center: b.center(),
            bbox: *b,
            label: Some(format!("Node {i}")),
        })
        .collect();

    let n = spec.nodes;
    let mut edges = Vec::with_capacity(spec.edges);
    if n >= 2 {
        let weights: Vec<f64> = (0..n)
            .map(|i| if spec.skewed { 1.0 / (1.0 + i as f64).powf(0.8) } else { 1.0 })
            .collect();
        let total: f64 = weights.iter().sum();
        let pick = |rng: &mut ChaCha8Rng| -> usize {
            let mut r = rng.random_range(0.0..total);
            for (i, w) in weights.iter().enumerate() {
                if r < *w {
                    return i;
                }
                r -= w;
            }
            n - 1
        };
        let distinct = n * (n - 1) / 2;
        let mut seen = std::collections::HashSet::new();
        while edges.len() < spec.edges {
            let a = pick(&mut rng);
            let b = if spec.skewed { pick(&mut rng) } else { rng.random_range(0..n) };
            if a == b {
                continue;
            }
            let key = (a.min(b), a.max(b));
            if seen.len() < distinct && !seen.insert(key) {
                continue;
            }
            edges.push(EdgeRecord {
                source: a,
                target: b,
                label: None,
            });
        }
    }
    LaidOutGraph::from_parts(nodes, edges)
}

/// Seeded suite of small instances: 3 to 15 nodes and 5 to 40 edges each.
pub fn desk_suite(count: usize, seed: u64) -> Vec<LaidOutGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.random_range(3..=15);
            let m = rng.random_range(5..=40);
            random_graph(&LayoutSpec::desk(n, m), rng.random())
        })
        .collect()
}
