//! Brute-force oracles used by the verification suite and the CLI `verify`
//! command. Deliberately simple, quadratic-or-worse implementations that
//! are independent of the structures they check.

use crate::doubling::PointMetric;
use crate::error::{Error, Result};
use crate::spanner::SpannerGraph;
use crate::tree::VertexId;

#[derive(PartialEq)]
struct HeapItem(f64, VertexId);

impl Eq for HeapItem {}

impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // Reversed: BinaryHeap is a max-heap, we want the closest vertex.
        other.0.total_cmp(&self.0)
    }
}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Single-source shortest-path distances over the spanner.
pub fn dijkstra_distances(g: &SpannerGraph, source: VertexId) -> Vec<f64> {
    let n = g.len();
    let mut dist = vec![f64::INFINITY; n];
    dist[source] = 0.0;
    let mut heap = std::collections::BinaryHeap::new();
    heap.push(HeapItem(0.0, source));
    while let Some(HeapItem(d, u)) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &(v, w, _) in g.neighbours(u) {
            let nd = d + w;
            if nd < dist[v] {
                dist[v] = nd;
                heap.push(HeapItem(nd, v));
            }
        }
    }
    dist
}

/// Exact shortest-path distance between one pair.
pub fn oracle_shortest_path(g: &SpannerGraph, u: VertexId, v: VertexId) -> Result<f64> {
    if u >= g.len() {
        return Err(Error::VertexOutOfRange { v: u, n: g.len() });
    }
    if v >= g.len() {
        return Err(Error::VertexOutOfRange { v, n: g.len() });
    }
    let d = dijkstra_distances(g, u)[v];
    if d.is_finite() {
        Ok(d)
    } else {
        Err(Error::Unreachable { u, v })
    }
}

/// Second, independent all-pairs implementation (Floyd–Warshall) used to
/// cross-check the Dijkstra oracle on small instances.
pub fn all_pairs_matrix(g: &SpannerGraph) -> Vec<Vec<f64>> {
    let n = g.len();
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (u, row) in d.iter_mut().enumerate() {
        row[u] = 0.0;
        for &(v, w, _) in g.neighbours(u) {
            row[v] = row[v].min(w);
        }
    }
    for k in 0..n {
        for i in 0..n {
            let dik = d[i][k];
            if !dik.is_finite() {
                continue;
            }
            for j in 0..n {
                let via = dik + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

/// Exact MST weight of the complete metric graph (dense Prim).
pub fn oracle_mst_weight(m: &PointMetric) -> Result<f64> {
    let n = m.len();
    if n < 2 {
        return Err(Error::InvalidParameter(
            "MST weight needs at least two points".into(),
        ));
    }
    let mut in_tree = vec![false; n];
    let mut best = vec![f64::INFINITY; n];
    in_tree[0] = true;
    for v in 1..n {
        best[v] = m.distance(0, v);
    }
    let mut total = 0.0;
    for _ in 1..n {
        let v = (0..n)
            .filter(|&v| !in_tree[v])
            .min_by(|&a, &b| best[a].total_cmp(&best[b]))
            .expect("a vertex remains");
        in_tree[v] = true;
        total += best[v];
        for u in 0..n {
            if !in_tree[u] {
                best[u] = best[u].min(m.distance(v, u));
            }
        }
    }
    Ok(total)
}

/// Second MST implementation (Kruskal over all pairs) for cross-checks.
pub fn mst_weight_kruskal(m: &PointMetric) -> Result<f64> {
    let n = m.len();
    if n < 2 {
        return Err(Error::InvalidParameter(
            "MST weight needs at least two points".into(),
        ));
    }
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            edges.push((m.distance(i, j), i, j));
        }
    }
    edges.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut total = 0.0;
    let mut used = 0;
    for (w, i, j) in edges {
        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
        if ri != rj {
            parent[ri] = rj;
            total += w;
            used += 1;
            if used == n - 1 {
                break;
            }
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::doubling::PointMetric;
    use crate::spanner::build_spanner;
    use crate::tree::build_tree;

    #[test]
    fn two_vertex_tree_distance() {
        let t = build_tree(&[(0, 1, 2.5)], 0).unwrap();
        let (g, _) = build_spanner(&t, 4).unwrap();
        assert_eq!(oracle_shortest_path(&g, 0, 1).unwrap(), 2.5);
    }

    #[test]
    fn complete_base_case_uses_direct_edges() {
        let edges: Vec<_> = (1..6).map(|v| (v - 1, v, 1.0)).collect();
        let t = build_tree(&edges, 0).unwrap();
        let (g, _) = build_spanner(&t, 8).unwrap();
        assert_eq!(oracle_shortest_path(&g, 0, 5).unwrap(), 5.0);
    }

    #[test]
    fn mst_trivial_values() {
        let m = PointMetric::from_points(vec![[0.0, 0.0], [1.0, 0.0]]).unwrap();
        assert_eq!(oracle_mst_weight(&m).unwrap(), 1.0);
        let m3 = PointMetric::from_points(vec![[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]]).unwrap();
        assert_eq!(oracle_mst_weight(&m3).unwrap(), 2.0);
        assert_eq!(mst_weight_kruskal(&m3).unwrap(), 2.0);
    }
}
