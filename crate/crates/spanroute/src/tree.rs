//! Weighted rooted trees with the child ordering, post-order ranks and
//! subtree intervals that the spanner construction and the router depend on.
//!
//! Children of every vertex are ordered by subtree size, largest first, so
//! that the first child edge of a vertex is its "leftmost" edge. Ties are
//! broken by ascending vertex id to keep every downstream artifact
//! reproducible.

use crate::error::{Error, Result};

/// Dense vertex index in `[0, n)`.
pub type VertexId = usize;

/// An immutable weighted rooted tree.
///
/// Vertex ids are dense integers `0..n`. External ids from input files are
/// remapped by [`parse_tree`] and the mapping is kept for output.
#[derive(Debug, Clone)]
pub struct RootedTree {
    root: VertexId,
    parent: Vec<Option<VertexId>>,
    children: Vec<Vec<VertexId>>,
    weight_to_parent: Vec<f64>,
    subtree_size: Vec<usize>,
    postorder_rank: Vec<u32>,
    interval_low: Vec<u32>,
    depth: Vec<u32>,
    weighted_depth: Vec<f64>,
}

/// Builds a rooted tree from an undirected edge list.
///
/// Edges are oriented away from `root`. Children are reordered largest
/// subtree first (ties by ascending id) and post-order ranks in `1..=n`
/// are assigned. All weights must be strictly positive and finite.
pub fn build_tree(edges: &[(VertexId, VertexId, f64)], root: VertexId) -> Result<RootedTree> {
    build_tree_impl(edges, root, false)
}

/// Internal variant used for net-tree derived trees whose parent edges may
/// legitimately have weight zero (parent and child sharing a representative).
pub(crate) fn build_tree_nonneg(
    edges: &[(VertexId, VertexId, f64)],
    root: VertexId,
) -> Result<RootedTree> {
    build_tree_impl(edges, root, true)
}

fn build_tree_impl(
    edges: &[(VertexId, VertexId, f64)],
    root: VertexId,
    allow_zero: bool,
) -> Result<RootedTree> {
    let n = edges.len() + 1;
    if root >= n {
        return Err(Error::VertexOutOfRange { v: root, n });
    }

    let mut adj: Vec<Vec<(VertexId, f64)>> = vec![Vec::new(); n];
    let mut seen = std::collections::HashSet::with_capacity(n);
    for &(u, v, w) in edges {
        if u >= n {
            return Err(Error::VertexOutOfRange { v: u, n });
        }
        if v >= n {
            return Err(Error::VertexOutOfRange { v, n });
        }
        if u == v {
            return Err(Error::CycleDetected { u, v });
        }
        let ok = if allow_zero { w >= 0.0 } else { w > 0.0 };
        if !ok || !w.is_finite() {
            return Err(Error::NonpositiveWeight { u, v, w });
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(Error::DuplicateEdge { u, v });
        }
        adj[u].push((v, w));
        adj[v].push((u, w));
    }

    // Orient from the root; with n-1 deduplicated edges a back edge or an
    // unreached vertex pins down cycles and disconnection respectively.
    let mut parent = vec![None; n];
    let mut weight_to_parent = vec![0.0; n];
    let mut depth = vec![0u32; n];
    let mut weighted_depth = vec![0.0; n];
    let mut order = Vec::with_capacity(n);
    let mut visited = vec![false; n];
    visited[root] = true;
    order.push(root);
    let mut head = 0;
    while head < order.len() {
        let u = order[head];
        head += 1;
        for &(v, w) in &adj[u] {
            if visited[v] {
                if parent[u] != Some(v) {
                    return Err(Error::CycleDetected { u, v });
                }
                continue;
            }
            visited[v] = true;
            parent[v] = Some(u);
            weight_to_parent[v] = w;
            depth[v] = depth[u] + 1;
            weighted_depth[v] = weighted_depth[u] + w;
            order.push(v);
        }
    }
    if let Some(v) = (0..n).find(|&v| !visited[v]) {
        return Err(Error::Disconnected { v });
    }

    // Subtree sizes in reverse BFS order (children before parents).
    let mut subtree_size = vec![1usize; n];
    for &v in order.iter().rev() {
        if let Some(p) = parent[v] {
            subtree_size[p] += subtree_size[v];
        }
    }

    let mut children: Vec<Vec<VertexId>> = vec![Vec::new(); n];
    for &v in &order {
        if let Some(p) = parent[v] {
            children[p].push(v);
        }
    }
    for list in &mut children {
        list.sort_by_key(|&c| (std::cmp::Reverse(subtree_size[c]), c));
    }

    // Iterative post-order. The vertices of any subtree occupy a contiguous
    // rank block, so L(v) is the next free rank at the moment v is pushed.
    let mut postorder_rank = vec![0u32; n];
    let mut interval_low = vec![0u32; n];
    let mut rank = 0u32;
    let mut stack: Vec<(VertexId, usize)> = vec![(root, 0)];
    interval_low[root] = 1;
    while let Some(&mut (v, ref mut idx)) = stack.last_mut() {
        if *idx < children[v].len() {
            let c = children[v][*idx];
            *idx += 1;
            interval_low[c] = rank + 1;
            stack.push((c, 0));
        } else {
            rank += 1;
            postorder_rank[v] = rank;
            stack.pop();
        }
    }
    debug_assert_eq!(rank as usize, n);

    Ok(RootedTree {
        root,
        parent,
        children,
        weight_to_parent,
        subtree_size,
        postorder_rank,
        interval_low,
        depth,
        weighted_depth,
    })
}

impl RootedTree {
    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        false // a rooted tree always has at least its root
    }

    pub fn root(&self) -> VertexId {
        self.root
    }

    pub fn parent(&self, v: VertexId) -> Option<VertexId> {
        self.parent[v]
    }

    /// Children ordered largest subtree first.
    pub fn children(&self, v: VertexId) -> &[VertexId] {
        &self.children[v]
    }

    /// Weight of the edge connecting `v` to its parent; `None` at the root.
    pub fn parent_edge_weight(&self, v: VertexId) -> Option<f64> {
        self.parent[v].map(|_| self.weight_to_parent[v])
    }

    pub fn subtree_size(&self, v: VertexId) -> usize {
        self.subtree_size[v]
    }

    /// Post-order rank in `1..=n`.
    pub fn rank(&self, v: VertexId) -> u32 {
        self.postorder_rank[v]
    }

    /// Minimum post-order rank in the subtree of `v`.
    pub fn interval_low(&self, v: VertexId) -> u32 {
        self.interval_low[v]
    }

    pub fn depth(&self, v: VertexId) -> u32 {
        self.depth[v]
    }

    /// Sum of edge weights from the root down to `v`.
    pub fn weighted_depth(&self, v: VertexId) -> f64 {
        self.weighted_depth[v]
    }

    /// Total weight of the tree.
    pub fn total_weight(&self) -> f64 {
        self.weight_to_parent.iter().sum()
    }

    /// Maximum number of tree neighbours over all vertices.
    pub fn max_degree(&self) -> usize {
        (0..self.len())
            .map(|v| self.children[v].len() + usize::from(self.parent[v].is_some()))
            .max()
            .unwrap_or(0)
    }

    /// Rank-interval test: `anc` is an ancestor of `v` (every vertex is an
    /// ancestor of itself).
    pub fn is_ancestor(&self, anc: VertexId, v: VertexId) -> bool {
        self.interval_low[anc] <= self.postorder_rank[v]
            && self.postorder_rank[v] <= self.postorder_rank[anc]
    }

    fn check(&self, v: VertexId) -> Result<()> {
        if v >= self.len() {
            return Err(Error::VertexOutOfRange { v, n: self.len() });
        }
        Ok(())
    }

    /// Lowest common ancestor of `u` and `v`.
    pub fn lca(&self, u: VertexId, v: VertexId) -> Result<VertexId> {
        self.check(u)?;
        self.check(v)?;
        Ok(self.lca_unchecked(u, v))
    }

    pub(crate) fn lca_unchecked(&self, mut u: VertexId, mut v: VertexId) -> VertexId {
        while self.depth[u] > self.depth[v] {
            u = self.parent[u].unwrap();
        }
        while self.depth[v] > self.depth[u] {
            v = self.parent[v].unwrap();
        }
        while u != v {
            u = self.parent[u].unwrap();
            v = self.parent[v].unwrap();
        }
        u
    }

    /// Weight of the unique path between `u` and `v`.
    pub fn tree_distance(&self, u: VertexId, v: VertexId) -> Result<f64> {
        self.check(u)?;
        self.check(v)?;
        Ok(self.distance_unchecked(u, v))
    }

    pub(crate) fn distance_unchecked(&self, u: VertexId, v: VertexId) -> f64 {
        let l = self.lca_unchecked(u, v);
        (self.weighted_depth[u] - self.weighted_depth[l])
            + (self.weighted_depth[v] - self.weighted_depth[l])
    }

    /// Follows first-child (leftmost) edges from `v` down to their end.
    pub fn leftmost_descendant(&self, v: VertexId) -> Result<VertexId> {
        self.check(v)?;
        let mut w = v;
        while let Some(&c) = self.children[w].first() {
            w = c;
        }
        Ok(w)
    }

    /// The unique vertex path from `u` to `v` (through their lca).
    pub fn path(&self, u: VertexId, v: VertexId) -> Result<Vec<VertexId>> {
        self.check(u)?;
        self.check(v)?;
        let l = self.lca_unchecked(u, v);
        let mut up = Vec::new();
        let mut w = u;
        while w != l {
            up.push(w);
            w = self.parent[w].unwrap();
        }
        up.push(l);
        let mut down = Vec::new();
        let mut w = v;
        while w != l {
            down.push(w);
            w = self.parent[w].unwrap();
        }
        up.extend(down.into_iter().rev());
        Ok(up)
    }
}

/// Serializes a tree in the text format: first line `n root`, then one
/// `parent child weight` line per non-root vertex. Weights are printed with
/// 17 significant digits so they round-trip exactly.
///
/// `external` maps dense ids to the ids to print; generated trees pass
/// `None` and print dense ids directly.
pub fn format_tree(t: &RootedTree, external: Option<&[u64]>) -> String {
    let ext = |v: VertexId| -> u64 {
        match external {
            Some(map) => map[v],
            None => v as u64,
        }
    };
    let mut out = String::new();
    out.push_str(&format!("{} {}\n", t.len(), ext(t.root())));
    for v in 0..t.len() {
        if let Some(p) = t.parent(v) {
            out.push_str(&format!(
                "{} {} {:.16e}\n",
                ext(p),
                ext(v),
                t.weight_to_parent[v]
            ));
        }
    }
    out
}

/// Parses the tree text format. External ids may be arbitrary non-negative
/// integers; they are remapped to dense ids in ascending order and the
/// mapping is returned alongside the tree.
pub fn parse_tree(text: &str) -> Result<(RootedTree, Vec<u64>)> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (line_no, header) = lines.next().ok_or(Error::Parse {
        line: 0,
        msg: "empty input".into(),
    })?;
    let mut it = header.split_whitespace();
    let n: usize = parse_field(it.next(), line_no, "vertex count")?;
    let root_ext: u64 = parse_field(it.next(), line_no, "root id")?;
    if n == 0 {
        return Err(Error::Parse {
            line: line_no,
            msg: "vertex count must be positive".into(),
        });
    }

    let mut raw_edges = Vec::with_capacity(n.saturating_sub(1));
    let mut ids = std::collections::BTreeSet::new();
    ids.insert(root_ext);
    for _ in 1..n {
        let (line_no, line) = lines.next().ok_or(Error::Parse {
            line: 0,
            msg: format!("expected {} edge lines", n - 1),
        })?;
        let mut it = line.split_whitespace();
        let p: u64 = parse_field(it.next(), line_no, "parent id")?;
        let c: u64 = parse_field(it.next(), line_no, "child id")?;
        let w: f64 = parse_field(it.next(), line_no, "weight")?;
        ids.insert(p);
        ids.insert(c);
        raw_edges.push((p, c, w));
    }
    if let Some((line_no, _)) = lines.next() {
        return Err(Error::Parse {
            line: line_no,
            msg: "trailing content after edge list".into(),
        });
    }

    let external: Vec<u64> = ids.into_iter().collect();
    if external.len() != n {
        return Err(Error::Parse {
            line: 0,
            msg: format!("{} distinct ids for {} vertices", external.len(), n),
        });
    }
    let dense = |id: u64| external.binary_search(&id).unwrap();
    let edges: Vec<(VertexId, VertexId, f64)> = raw_edges
        .iter()
        .map(|&(p, c, w)| (dense(p), dense(c), w))
        .collect();
    let tree = build_tree(&edges, dense(root_ext))?;
    Ok((tree, external))
}

fn parse_field<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    tok.ok_or(Error::Parse {
        line,
        msg: format!("missing {what}"),
    })?
    .parse()
    .map_err(|_| Error::Parse {
        line,
        msg: format!("invalid {what}"),
    })
}
