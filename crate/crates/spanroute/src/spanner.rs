//! The tree-metric 1-spanner construction.
//!
//! The construction selects a small set of cut vertices in a tree, adds the
//! complete graph on them (edge weights equal to tree distances), removes
//! them, and recurses on the components of the remaining forest. Every
//! subtree processed by a recursive call is a *canonical subtree*; the
//! decomposition of the input tree into canonical subtrees is recorded and
//! exposed because the routing analysis and the verification suite both
//! consult it.
//!
//! Cut-vertex selection walks leftmost (first-child) edges. Leftmost-ness is
//! a property of the original tree's edges and is inherited by subtrees, so
//! inside a component the leftmost path from a vertex ends as soon as the
//! vertex's first child is no longer present, even if other children are.

use crate::error::{Error, Result};
use crate::tree::{RootedTree, VertexId};

/// Kind of a spanner edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeKind {
    Tree,
    Shortcut,
}

impl EdgeKind {
    pub fn code(self) -> &'static str {
        match self {
            EdgeKind::Tree => "T",
            EdgeKind::Shortcut => "S",
        }
    }
}

/// The 1-spanner: the input tree's edges plus shortcut edges, with
/// per-vertex adjacency. Every edge weight equals the tree distance of its
/// endpoints; a shortcut coinciding with a tree edge is stored once, as a
/// tree edge.
#[derive(Debug, Clone)]
pub struct SpannerGraph {
    adjacency: Vec<Vec<(VertexId, f64, EdgeKind)>>,
    edge_count: usize,
}

impl SpannerGraph {
    fn with_tree_edges(t: &RootedTree) -> Self {
        let n = t.len();
        let mut adjacency: Vec<Vec<(VertexId, f64, EdgeKind)>> = vec![Vec::new(); n];
        let mut edge_count = 0;
        for v in 0..n {
            if let Some(p) = t.parent(v) {
                let w = t.parent_edge_weight(v).unwrap();
                adjacency[p].push((v, w, EdgeKind::Tree));
                adjacency[v].push((p, w, EdgeKind::Tree));
                edge_count += 1;
            }
        }
        SpannerGraph {
            adjacency,
            edge_count,
        }
    }

    fn add_shortcut(&mut self, u: VertexId, v: VertexId, w: f64) {
        if self.adjacency[u].iter().any(|&(x, _, _)| x == v) {
            return; // already present as a tree edge
        }
        self.adjacency[u].push((v, w, EdgeKind::Shortcut));
        self.adjacency[v].push((u, w, EdgeKind::Shortcut));
        self.edge_count += 1;
    }

    pub fn len(&self) -> usize {
        self.adjacency.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbours(&self, v: VertexId) -> &[(VertexId, f64, EdgeKind)] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Edges in canonical `(u, v, w, kind)` form with `u < v`.
    pub fn edges(&self) -> Vec<(VertexId, VertexId, f64, EdgeKind)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for u in 0..self.adjacency.len() {
            for &(v, w, kind) in &self.adjacency[u] {
                if u < v {
                    out.push((u, v, w, kind));
                }
            }
        }
        out.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        out
    }

    /// Sum of all edge weights.
    pub fn total_weight(&self) -> f64 {
        self.edges().iter().map(|e| e.2).sum()
    }
}

/// One canonical subtree: a subtree processed by some recursive call.
#[derive(Debug, Clone)]
pub struct CanonicalSubtree {
    pub id: usize,
    pub parent: Option<usize>,
    /// Recursion address: the root canonical subtree has the empty sequence,
    /// the j-th component of a parent with sequence S gets S extended by j.
    pub sequence: Vec<u32>,
    pub root: VertexId,
    pub leftmost: VertexId,
    /// All vertices, sorted ascending.
    pub vertices: Vec<VertexId>,
    /// Cut vertices, sorted ascending.
    pub cut_set: Vec<VertexId>,
    pub children: Vec<usize>,
}

/// The tree of canonical subtrees produced by a spanner build.
///
/// Every vertex of the input tree is a cut vertex of exactly one canonical
/// subtree; `owner(v)` returns that subtree.
#[derive(Debug, Clone)]
pub struct CanonicalDecomposition {
    subtrees: Vec<CanonicalSubtree>,
    owner: Vec<usize>,
}

impl CanonicalDecomposition {
    pub fn subtrees(&self) -> &[CanonicalSubtree] {
        &self.subtrees
    }

    pub fn subtree(&self, id: usize) -> &CanonicalSubtree {
        &self.subtrees[id]
    }

    /// The canonical subtree whose cut set contains `v`.
    pub fn owner(&self, v: VertexId) -> &CanonicalSubtree {
        &self.subtrees[self.owner[v]]
    }

    /// Sequence of the canonical subtree owning `v`; empty at the top level.
    pub fn canonical_sequence(&self, v: VertexId) -> Result<&[u32]> {
        if v >= self.owner.len() {
            return Err(Error::VertexOutOfRange {
                v,
                n: self.owner.len(),
            });
        }
        Ok(&self.subtrees[self.owner[v]].sequence)
    }

    /// Maximum canonical-sequence length over all vertices, `K`.
    pub fn max_sequence_len(&self) -> usize {
        self.subtrees
            .iter()
            .map(|s| s.sequence.len())
            .max()
            .unwrap_or(0)
    }
}

/// Scratch space shared by the recursive construction: an epoch-stamped
/// membership mark plus per-vertex sizes local to the current subtree.
struct BuildCtx<'t> {
    tree: &'t RootedTree,
    mark: Vec<u64>,
    epoch: u64,
    local_size: Vec<usize>,
}

impl<'t> BuildCtx<'t> {
    fn new(tree: &'t RootedTree) -> Self {
        let n = tree.len();
        BuildCtx {
            tree,
            mark: vec![0; n],
            epoch: 0,
            local_size: vec![0; n],
        }
    }

    fn stamp(&mut self, verts: &[VertexId]) {
        self.epoch += 1;
        for &v in verts {
            self.mark[v] = self.epoch;
        }
    }

    fn contains(&self, v: VertexId) -> bool {
        self.mark[v] == self.epoch
    }

    /// Subtree sizes relative to the stamped vertex set. Vertices are
    /// processed in ascending post-order rank so children precede parents.
    fn compute_local_sizes(&mut self, verts: &mut Vec<VertexId>) {
        verts.sort_by_key(|&v| self.tree.rank(v));
        for &v in verts.iter() {
            self.local_size[v] = 1;
        }
        for &v in verts.iter() {
            if let Some(p) = self.tree.parent(v) {
                if self.contains(p) {
                    self.local_size[p] += self.local_size[v];
                }
            }
        }
    }

    /// First child of `v` if it belongs to the stamped set. The leftmost
    /// labelling is inherited: if the original first child was cut away the
    /// leftmost path ends here even when other children remain.
    fn leftmost_child(&self, v: VertexId) -> Option<VertexId> {
        self.tree
            .children(v)
            .first()
            .copied()
            .filter(|&c| self.contains(c))
    }

    /// End of the leftmost path from `v` inside the stamped set.
    fn leftmost_in(&self, v: VertexId) -> VertexId {
        let mut w = v;
        while let Some(c) = self.leftmost_child(w) {
            w = c;
        }
        w
    }

    /// First d-balanced vertex on the leftmost path from `r`, where the
    /// balance test is taken against `size_r`, the size of the subtree the
    /// current call operates on. A vertex with no leftmost child in the set
    /// has leftmost-child size 0.
    fn first_balanced(&self, r: VertexId, size_r: usize, d: usize) -> Option<VertexId> {
        let mut w = r;
        loop {
            let c1 = self.leftmost_child(w);
            let c1_size = c1.map_or(0, |c| self.local_size[c]);
            if c1_size + d <= size_r {
                return Some(w);
            }
            match c1 {
                Some(c) => w = c,
                None => return None,
            }
        }
    }

    /// The recursive cut-vertex set CV of the stamped subtree rooted at `r`.
    fn collect_cv(&self, r: VertexId, d: usize, out: &mut Vec<VertexId>) {
        let size_r = self.local_size[r];
        if let Some(b) = self.first_balanced(r, size_r, d) {
            out.push(b);
            for &c in self.tree.children(b) {
                if self.contains(c) {
                    self.collect_cv(c, d, out);
                }
            }
        }
    }

    /// The full cut set of the stamped subtree: the whole subtree when it
    /// fits in the k+1 cut-vertex budget, otherwise CV with
    /// `d = ceil(2n'/k)` plus the root and the leftmost vertex. This `d`
    /// makes both guarantees tight at once: at most k+1 cut vertices, and
    /// leftover components of size at most `2n'/k`.
    fn cut_set(&mut self, verts: &mut Vec<VertexId>, root: VertexId, k: usize) -> Vec<VertexId> {
        let n = verts.len();
        if n <= k + 1 {
            let mut all = verts.clone();
            all.sort_unstable();
            return all;
        }
        self.compute_local_sizes(verts);
        let d = (2 * n).div_ceil(k);
        let mut cv = Vec::new();
        self.collect_cv(root, d, &mut cv);
        cv.push(root);
        cv.push(self.leftmost_in(root));
        cv.sort_unstable();
        cv.dedup();
        cv
    }
}

fn validate_subtree(t: &RootedTree, sub: &[VertexId]) -> Result<VertexId> {
    if sub.is_empty() {
        return Err(Error::InvalidParameter("empty subtree".into()));
    }
    let mut set = std::collections::HashSet::with_capacity(sub.len());
    for &v in sub {
        if v >= t.len() {
            return Err(Error::VertexOutOfRange { v, n: t.len() });
        }
        if !set.insert(v) {
            return Err(Error::InvalidParameter(format!(
                "vertex {v} listed twice in subtree"
            )));
        }
    }
    let mut root = None;
    for &v in sub {
        let p = t.parent(v);
        if p.map_or(true, |p| !set.contains(&p)) {
            if root.replace(v).is_some() {
                return Err(Error::InvalidParameter(
                    "subtree is not connected".into(),
                ));
            }
        }
    }
    Ok(root.expect("nonempty subtree has a root"))
}

/// First d-balanced vertex on the leftmost path from `v` inside `sub`, or
/// `None` when no vertex on the path qualifies. Subtree sizes are taken
/// relative to `sub`, and the balance threshold is `|sub| - d`.
pub fn first_balanced_on_leftmost_path(
    t: &RootedTree,
    sub: &[VertexId],
    v: VertexId,
    d: usize,
) -> Result<Option<VertexId>> {
    if d == 0 {
        return Err(Error::InvalidParameter("d must be positive".into()));
    }
    validate_subtree(t, sub)?;
    if !sub.contains(&v) {
        return Err(Error::NotInSubtree { v });
    }
    let mut ctx = BuildCtx::new(t);
    let mut verts = sub.to_vec();
    ctx.stamp(&verts);
    ctx.compute_local_sizes(&mut verts);
    Ok(ctx.first_balanced(v, sub.len(), d))
}

/// Cut-vertex set of a canonical-subtree candidate `sub` for parameter `k`.
pub fn cut_vertices(t: &RootedTree, sub: &[VertexId], k: usize) -> Result<Vec<VertexId>> {
    if k < 4 {
        return Err(Error::InvalidParameter(format!("k must be >= 4, got {k}")));
    }
    let root = validate_subtree(t, sub)?;
    let mut ctx = BuildCtx::new(t);
    let mut verts = sub.to_vec();
    ctx.stamp(&verts);
    Ok(ctx.cut_set(&mut verts, root, k))
}

/// Builds the 1-spanner of the tree metric of `t` and records the canonical
/// decomposition. `k` is fixed across the recursion; the balance parameter
/// `d` is recomputed per subtree as `ceil(n'/k)`.
pub fn build_spanner(t: &RootedTree, k: usize) -> Result<(SpannerGraph, CanonicalDecomposition)> {
    if k < 4 {
        return Err(Error::InvalidParameter(format!("k must be >= 4, got {k}")));
    }
    let n = t.len();
    let mut graph = SpannerGraph::with_tree_edges(t);
    let mut ctx = BuildCtx::new(t);
    let mut subtrees: Vec<CanonicalSubtree> = Vec::new();
    let mut owner = vec![usize::MAX; n];

    // Work stack of (vertex set, subtree root, parent record id, sequence).
    let mut stack: Vec<(Vec<VertexId>, VertexId, Option<usize>, Vec<u32>)> =
        vec![((0..n).collect(), t.root(), None, Vec::new())];

    while let Some((mut verts, root, parent_id, sequence)) = stack.pop() {
        ctx.stamp(&verts);
        let cut = ctx.cut_set(&mut verts, root, k);
        let leftmost = ctx.leftmost_in(root);
        let id = subtrees.len();

        for &v in &cut {
            debug_assert_eq!(owner[v], usize::MAX);
            owner[v] = id;
        }
        for i in 0..cut.len() {
            for j in i + 1..cut.len() {
                let (u, v) = (cut[i], cut[j]);
                graph.add_shortcut(u, v, t.distance_unchecked(u, v));
            }
        }

        // Components of the forest left after removing the cut set; their
        // roots are the surviving vertices whose parent was cut.
        let in_cut: std::collections::HashSet<VertexId> = cut.iter().copied().collect();
        let mut component_roots: Vec<VertexId> = verts
            .iter()
            .copied()
            .filter(|v| !in_cut.contains(v))
            .filter(|&v| {
                let p = t.parent(v).expect("non-root survivor has a parent");
                in_cut.contains(&p) || !ctx.contains(p)
            })
            .collect();
        component_roots.sort_unstable();

        // Push in reverse so components pop in sequence order; record ids
        // then follow a pre-order walk of the decomposition.
        for (j, &cr) in component_roots.iter().enumerate().rev() {
            let mut comp = Vec::new();
            let mut dfs = vec![cr];
            while let Some(v) = dfs.pop() {
                comp.push(v);
                for &c in t.children(v) {
                    if ctx.contains(c) && !in_cut.contains(&c) {
                        dfs.push(c);
                    }
                }
            }
            let mut child_seq = sequence.clone();
            child_seq.push((j + 1) as u32);
            stack.push((comp, cr, Some(id), child_seq));
        }

        let mut vertices = verts.clone();
        vertices.sort_unstable();
        subtrees.push(CanonicalSubtree {
            id,
            parent: parent_id,
            sequence,
            root,
            leftmost,
            vertices,
            cut_set: cut,
            children: Vec::new(),
        });
    }

    debug_assert!(owner.iter().all(|&o| o != usize::MAX));
    for id in 0..subtrees.len() {
        if let Some(p) = subtrees[id].parent {
            subtrees[p].children.push(id);
        }
    }
    for s in &mut subtrees {
        s.children.sort_unstable();
    }

    Ok((graph, CanonicalDecomposition { subtrees, owner }))
}

/// Spanner dump: one `u v weight kind` line per edge, `u < v`, sorted.
pub fn format_spanner(g: &SpannerGraph) -> String {
    let mut out = String::new();
    for (u, v, w, kind) in g.edges() {
        out.push_str(&format!("{u} {v} {w:.16e} {}\n", kind.code()));
    }
    out
}

/// Decomposition dump: one line per canonical subtree,
/// `sequence | root | leftmost | cut vertices`, the empty sequence printed
/// as `ε`.
pub fn format_decomposition(dec: &CanonicalDecomposition) -> String {
    let mut out = String::new();
    for s in dec.subtrees() {
        let seq = if s.sequence.is_empty() {
            "ε".to_string()
        } else {
            s.sequence
                .iter()
                .map(|j| j.to_string())
                .collect::<Vec<_>>()
                .join(".")
        };
        let cuts = s
            .cut_set
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        out.push_str(&format!("{seq} | {} | {} | {cuts}\n", s.root, s.leftmost));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::build_tree;

    fn path(n: usize) -> RootedTree {
        let edges: Vec<_> = (1..n).map(|v| (v - 1, v, 1.0)).collect();
        build_tree(&edges, 0).unwrap()
    }

    #[test]
    fn first_balanced_path_of_ten() {
        let t = path(10);
        let sub: Vec<_> = (0..10).collect();
        // First vertex whose chain below has at most 10 - 3 = 7 vertices.
        let b = first_balanced_on_leftmost_path(&t, &sub, 0, 3).unwrap();
        assert_eq!(b, Some(2));
    }

    #[test]
    fn first_balanced_boundaries() {
        let t = path(4);
        let sub: Vec<_> = (0..4).collect();
        // d > |sub|: even a leaf fails since 0 > |sub| - d.
        assert_eq!(
            first_balanced_on_leftmost_path(&t, &sub, 0, 5).unwrap(),
            None
        );
        // Single-vertex sub with d = 1: the vertex itself qualifies.
        let t1 = build_tree(&[], 0).unwrap();
        assert_eq!(
            first_balanced_on_leftmost_path(&t1, &[0], 0, 1).unwrap(),
            Some(0)
        );
        assert!(matches!(
            first_balanced_on_leftmost_path(&t, &[0, 1], 3, 1),
            Err(Error::NotInSubtree { v: 3 })
        ));
    }

    #[test]
    fn cut_vertices_small_subtree_is_everything() {
        let t = path(5);
        let sub: Vec<_> = (0..5).collect();
        // Five vertices fit the k+1 budget for k = 4.
        let c = cut_vertices(&t, &sub, 4).unwrap();
        assert_eq!(c, vec![0, 1, 2, 3, 4]);
        assert!(cut_vertices(&t, &sub, 3).is_err());
    }

    #[test]
    fn base_case_spanner_is_complete() {
        let t = path(9);
        let (g, _) = build_spanner(&t, 8).unwrap();
        assert_eq!(g.edge_count(), 9 * 8 / 2);
        for (u, v, w, _) in g.edges() {
            assert_eq!(w, (v - u) as f64);
        }
    }

    #[test]
    fn single_vertex_spanner() {
        let t = build_tree(&[], 0).unwrap();
        let (g, dec) = build_spanner(&t, 4).unwrap();
        assert_eq!(g.edge_count(), 0);
        assert_eq!(dec.subtrees().len(), 1);
        assert_eq!(dec.subtree(0).cut_set, vec![0]);
    }

    #[test]
    fn path_twelve_cut_set() {
        // n = 12, k = 4, d = 6: the first vertex whose chain below has at
        // most 6 vertices is index 5, then only the path's end qualifies.
        let t = path(12);
        let sub: Vec<_> = (0..12).collect();
        let c = cut_vertices(&t, &sub, 4).unwrap();
        assert_eq!(c, vec![0, 5, 11]);
        assert!(c.len() <= 5);
    }

    #[test]
    fn every_vertex_owned_once_and_sequences_nest() {
        let edges: Vec<_> = (1..40).map(|v| (v / 2, v, 1.0)).collect();
        let t = build_tree(&edges, 0).unwrap();
        let (_, dec) = build_spanner(&t, 4).unwrap();
        let mut seen = vec![0usize; t.len()];
        for s in dec.subtrees() {
            for &v in &s.cut_set {
                seen[v] += 1;
            }
            if let Some(p) = s.parent {
                let ps = &dec.subtree(p).sequence;
                assert_eq!(&s.sequence[..s.sequence.len() - 1], ps.as_slice());
            } else {
                assert!(s.sequence.is_empty());
            }
        }
        assert!(seen.iter().all(|&c| c == 1));
    }

    #[test]
    fn same_sequence_implies_edge() {
        let edges: Vec<_> = (1..60).map(|v| (v / 3, v, 0.5)).collect();
        let t = build_tree(&edges, 0).unwrap();
        let (g, dec) = build_spanner(&t, 4).unwrap();
        for s in dec.subtrees() {
            for i in 0..s.cut_set.len() {
                for j in i + 1..s.cut_set.len() {
                    let (u, v) = (s.cut_set[i], s.cut_set[j]);
                    assert!(
                        g.neighbours(u).iter().any(|&(x, _, _)| x == v),
                        "cut mates {u},{v} not adjacent"
                    );
                }
            }
        }
    }
}
