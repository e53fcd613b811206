//! Spanner-construction properties: cut-set sizes, component shrinkage,
//! the exact 1-spanner property against shortest-path oracles, boundary
//! edges of canonical subtrees, and determinism.

use proptest::prelude::*;
use spanroute::experiment::lightness_bound;
use spanroute::gen::{gen_tree, TreeShape};
use spanroute::oracle::{all_pairs_matrix, dijkstra_distances};
use spanroute::spanner::{
    build_spanner, cut_vertices, format_decomposition, format_spanner, CanonicalDecomposition,
};
use spanroute::tree::RootedTree;

/// Oracle: component sizes of the tree after deleting `cut`, via BFS over
/// parent/child adjacency.
fn component_sizes_after_removal(t: &RootedTree, cut: &[usize]) -> Vec<usize> {
    let n = t.len();
    let removed: std::collections::HashSet<usize> = cut.iter().copied().collect();
    let mut seen = vec![false; n];
    let mut sizes = Vec::new();
    for start in 0..n {
        if seen[start] || removed.contains(&start) {
            continue;
        }
        let mut size = 0;
        let mut queue = vec![start];
        seen[start] = true;
        while let Some(v) = queue.pop() {
            size += 1;
            let mut push = |u: usize, seen: &mut Vec<bool>| {
                if !seen[u] && !removed.contains(&u) {
                    seen[u] = true;
                    queue.push(u);
                }
            };
            if let Some(p) = t.parent(v) {
                push(p, &mut seen);
            }
            for &c in t.children(v) {
                push(c, &mut seen);
            }
        }
        sizes.push(size);
    }
    sizes
}

#[test]
fn cut_set_shrinks_components_on_random_trees() {
    for &(n, seed) in &[(120usize, 1u64), (333, 2), (500, 3)] {
        for &k in &[4usize, 8] {
            let t = gen_tree(TreeShape::RandomRecursive, n, seed);
            let all: Vec<usize> = (0..n).collect();
            let c = cut_vertices(&t, &all, k).unwrap();
            assert!(c.len() <= k + 1, "|C| = {} for n={n}, k={k}", c.len());
            for size in component_sizes_after_removal(&t, &c) {
                assert!(
                    size as f64 <= 2.0 * n as f64 / k as f64,
                    "component of size {size} for n={n}, k={k}"
                );
            }
        }
    }
}

#[test]
fn cut_set_of_seventeen_vertices_k5_is_small() {
    let t = gen_tree(TreeShape::RandomRecursive, 17, 42);
    let all: Vec<usize> = (0..17).collect();
    let c = cut_vertices(&t, &all, 5).unwrap();
    assert!(c.len() <= 6, "|C| = {}", c.len());
}

/// All canonical subtrees satisfy the cut-set and shrinkage bounds.
fn assert_decomposition_bounds(dec: &CanonicalDecomposition, k: usize) {
    for s in dec.subtrees() {
        let n = s.vertices.len();
        assert!(s.cut_set.len() <= k + 1, "cut set {} > k+1", s.cut_set.len());
        if n <= k + 1 {
            assert_eq!(s.cut_set.len(), n);
        }
        for &c in &s.children {
            let child = dec.subtree(c).vertices.len() as f64;
            assert!(child <= 2.0 * n as f64 / k as f64);
        }
    }
}

#[test]
fn spanner_preserves_distances_exactly() {
    for &(n, seed) in &[(250usize, 7u64), (1000, 8), (2000, 9)] {
        for &k in &[4usize, 8, 16] {
            let t = gen_tree(TreeShape::RandomRecursive, n, seed);
            let (g, dec) = build_spanner(&t, k).unwrap();
            assert_decomposition_bounds(&dec, k);
            // 2000 sampled pairs against the Dijkstra oracle; equality, not
            // just <=, since every spanner edge weight is a tree distance.
            for i in 0..40usize {
                let s = (i * 6151 + seed as usize) % n;
                let dist = dijkstra_distances(&g, s);
                for j in 0..50usize {
                    let d = (j * 2411 + i) % n;
                    let expected = t.tree_distance(s, d).unwrap();
                    assert!(
                        (dist[d] - expected).abs() <= 1e-9 * expected.max(1.0),
                        "n={n} k={k}: d({s},{d}) = {} != {expected}",
                        dist[d]
                    );
                }
            }
        }
    }
}

#[test]
fn dijkstra_agrees_with_matrix_oracle() {
    let t = gen_tree(TreeShape::RandomRecursive, 100, 13);
    let (g, _) = build_spanner(&t, 4).unwrap();
    let matrix = all_pairs_matrix(&g);
    for s in 0..100 {
        let dist = dijkstra_distances(&g, s);
        for d in 0..100 {
            assert!((dist[d] - matrix[s][d]).abs() <= 1e-9 * matrix[s][d].max(1.0));
        }
    }
}

#[test]
fn boundary_of_canonical_subtrees_has_at_most_two_edges() {
    for &(shape, n, seed) in &[
        (TreeShape::RandomRecursive, 400usize, 17u64),
        (TreeShape::Caterpillar, 301, 0),
        (TreeShape::Balanced { arity: 3 }, 364, 0),
    ] {
        let t = gen_tree(shape, n, seed);
        let (_, dec) = build_spanner(&t, 4).unwrap();
        for s in dec.subtrees() {
            if s.parent.is_none() {
                continue;
            }
            let inside: std::collections::HashSet<usize> =
                s.vertices.iter().copied().collect();
            let mut crossing = Vec::new();
            for &v in &s.vertices {
                if let Some(p) = t.parent(v) {
                    if !inside.contains(&p) {
                        crossing.push(v);
                    }
                }
                for &c in t.children(v) {
                    if !inside.contains(&c) {
                        crossing.push(v);
                    }
                }
            }
            assert!(
                crossing.len() <= 2,
                "{} boundary edges for subtree {}",
                crossing.len(),
                s.id
            );
            for v in crossing {
                assert!(
                    v == s.root || v == s.leftmost,
                    "boundary vertex {v} is neither root {} nor leftmost {}",
                    s.root,
                    s.leftmost
                );
            }
        }
    }
}

#[test]
fn sequence_length_is_logarithmic() {
    let t = gen_tree(TreeShape::RandomRecursive, 500, 77);
    let (_, dec) = build_spanner(&t, 4).unwrap();
    // Shrink factor 2n/k = n/2 per level: ceil(log2 500) + 1 = 10.
    assert!(dec.max_sequence_len() <= 10, "K = {}", dec.max_sequence_len());
}

#[test]
fn degree_and_edge_bounds_on_stressing_shapes() {
    for &(shape, n) in &[
        (TreeShape::Star, 500usize),
        (TreeShape::Caterpillar, 500),
        (TreeShape::Path, 500),
        (TreeShape::RandomRecursive, 500),
    ] {
        for &k in &[4usize, 8, 16] {
            let t = gen_tree(shape, n, 4);
            let (g, _) = build_spanner(&t, k).unwrap();
            let delta = t.max_degree();
            assert!(
                g.max_degree() <= delta + k,
                "{}: max degree {} > {delta} + {k}",
                shape.name(),
                g.max_degree()
            );
            assert!(g.edge_count() <= n * (k + 2));
            let ratio = g.total_weight() / t.total_weight();
            assert!(
                ratio <= lightness_bound(n, k),
                "{}: lightness {ratio} > {}",
                shape.name(),
                lightness_bound(n, k)
            );
        }
    }
}

#[test]
fn rebuilding_is_deterministic() {
    let t = gen_tree(TreeShape::RandomRecursive, 300, 123);
    let (g1, d1) = build_spanner(&t, 4).unwrap();
    let (g2, d2) = build_spanner(&t, 4).unwrap();
    assert_eq!(format_spanner(&g1), format_spanner(&g2));
    assert_eq!(format_decomposition(&d1), format_decomposition(&d2));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Exactness of the 1-spanner on arbitrary small random trees and k.
    #[test]
    fn one_spanner_property_holds(seed in 0u64..10_000, n in 1usize..60, k in 4usize..20) {
        let t = gen_tree(TreeShape::RandomRecursive, n, seed);
        let (g, dec) = build_spanner(&t, k).unwrap();
        // Every vertex is owned by exactly one cut set.
        let mut owned = vec![0usize; n];
        for s in dec.subtrees() {
            for &v in &s.cut_set {
                owned[v] += 1;
            }
        }
        prop_assert!(owned.iter().all(|&c| c == 1));
        for s in 0..n.min(8) {
            let dist = dijkstra_distances(&g, s);
            for d in 0..n {
                let expected = t.tree_distance(s, d).unwrap();
                prop_assert!((dist[d] - expected).abs() <= 1e-9 * expected.max(1.0));
            }
        }
    }
}
