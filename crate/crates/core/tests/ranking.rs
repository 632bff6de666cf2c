use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tilegraph_core::geometry::{Point, Rect};
use tilegraph_core::ranking::{
    level_prefix, pagerank, rank_order, scale_about, select_with_adaptive_scale, SpatialHash, DAMPING,
};

fn random_boxes(n: usize, extent: f64, max_side: f64, seed: u64) -> Vec<Rect> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let c = Point::new(rng.random_range(0.0..extent), rng.random_range(0.0..extent));
            let w = rng.random_range(0.05..max_side);
            let h = rng.random_range(0.05..max_side);
            Rect::from_center(c, w, h)
        })
        .collect()
}

#[test]
fn hash_overlaps_match_brute_force_on_1000_boxes() {
    for seed in 0..4 {
        let boxes = random_boxes(1000, 100.0, 4.0, seed);
        let mut hash = SpatialHash::new(4.0);
        for b in &boxes {
            hash.insert(*b);
        }
        let queries = random_boxes(300, 100.0, 4.0, seed + 100);
        for q in boxes.iter().chain(&queries) {
            let brute: Vec<usize> = (0..boxes.len()).filter(|&i| boxes[i].overlaps(q)).collect();
            assert_eq!(hash.overlapping(q), brute);
        }
    }
}

/// Dense solve of the PageRank fixed point by Gaussian elimination.
fn pagerank_dense(n: usize, edges: &[(usize, usize)], d: f64) -> Vec<f64> {
    let mut deg = vec![0.0; n];
    let mut m = vec![vec![0.0; n]; n];
    for &(a, b) in edges {
        deg[a] += 1.0;
        deg[b] += 1.0;
    }
    for &(a, b) in edges {
        m[b][a] += 1.0 / deg[a];
        m[a][b] += 1.0 / deg[b];
    }
    // (I - d M - d/n * 1 * dangling^T) r = (1 - d)/n
    let mut a = vec![vec![0.0; n + 1]; n];
    for i in 0..n {
        for j in 0..n {
            let dangling = if deg[j] == 0.0 { 1.0 / n as f64 } else { 0.0 };
            a[i][j] = f64::from(i == j) - d * (m[i][j] + dangling);
        }
        a[i][n] = (1.0 - d) / n as f64;
    }
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs())).unwrap();
        a.swap(col, piv);
        let pivot = a[col].clone();
        for (row, line) in a.iter_mut().enumerate() {
            if row != col {
                let f = line[col] / pivot[col];
                for (x, p) in line[col..].iter_mut().zip(&pivot[col..]) {
                    *x -= f * p;
                }
            }
        }
    }
    let r: Vec<f64> = (0..n).map(|i| a[i][n] / a[i][i]).collect();
    let total: f64 = r.iter().sum();
    r.iter().map(|x| x / total).collect()
}

#[test]
fn pagerank_matches_dense_solve() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..30 {
        let n = rng.random_range(1..40);
        let m = rng.random_range(0..3 * n);
        let edges: Vec<(usize, usize)> = (0..m)
            .map(|_| (rng.random_range(0..n), rng.random_range(0..n)))
            .filter(|(a, b)| a != b)
            .collect();
        let got = pagerank(n, &edges, DAMPING, 1e-14, 10_000);
        let want = pagerank_dense(n, &edges, DAMPING);
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-10, "{g} vs {w}");
        }
    }
}

#[test]
fn rank_order_breaks_ties_by_index() {
    assert_eq!(rank_order(&[0.25, 0.5, 0.25]), vec![1, 0, 2]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn selection_invariants(seed in any::<u64>(), n in 1usize..120, depth in 0u32..6) {
        let boxes = random_boxes(n, 60.0, 5.0, seed);
        let centers: Vec<Point> = boxes.iter().map(|b| b.center()).collect();
        let ranks: Vec<f64> = (0..n).map(|i| ((i as u64).wrapping_mul(seed | 1) % 97) as f64).collect();
        let order = rank_order(&ranks);
        let prefix = level_prefix(&order, depth);
        let sel = select_with_adaptive_scale(prefix, &boxes, &centers, depth);

        prop_assert_eq!(sel.selected.len() + sel.dropped.len(), prefix.len());
        prop_assert_eq!(sel.selected[0].1, 2f64.powi(depth as i32));
        for w in sel.selected.windows(2) {
            prop_assert!(w[1].1 <= w[0].1);
        }
        let drawn: Vec<Rect> = sel
            .selected
            .iter()
            .map(|&(v, s)| {
                assert!(s >= 1.0);
                scale_about(&boxes[v], centers[v], s)
            })
            .collect();
        for i in 0..drawn.len() {
            for j in i + 1..drawn.len() {
                prop_assert!(!drawn[i].overlaps(&drawn[j]), "{:?} {:?}", sel.selected[i], sel.selected[j]);
            }
        }
        // Dropped nodes collide with an accepted box even at their own size.
        for &v in &sel.dropped {
            prop_assert!(drawn.iter().any(|b| b.overlaps(&boxes[v])));
        }
    }
}
