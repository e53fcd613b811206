//! The net tree: a hierarchy of nested nets over a point metric, with
//! parent links, same-level cross edges, and light subtrees shortcut by the
//! tree-metric 1-spanner.
//!
//! Level `i` holds a `2^i`-net of level `i-1`; nets are built greedily in
//! ascending point order, which fixes every downstream choice. Distance
//! thresholds are compared through one predicate with a relative slack of
//! 1e-12 so that the construction and the exhaustive verification scans
//! can never disagree on a borderline pair.

use crate::doubling::metric::PointMetric;
use crate::error::{Error, Result};
use crate::labels::{assign_labels, IntervalLabel, Labeling};
use crate::spanner::{build_spanner, SpannerGraph};
use crate::tree::{build_tree_nonneg, RootedTree};

/// Threshold predicate used for every net/parent/cross comparison.
pub fn within(d: f64, r: f64) -> bool {
    d <= r * (1.0 + 1e-12)
}

/// Nested net levels: `levels[0]` is every point (ascending), `levels[i]`
/// is a `2^i`-net of `levels[i-1]`, and the last level is a single point.
pub fn build_net_hierarchy(m: &PointMetric) -> Vec<Vec<usize>> {
    let mut levels = vec![(0..m.len()).collect::<Vec<_>>()];
    while levels.last().unwrap().len() > 1 {
        let i = levels.len() as i32;
        let r = 2f64.powi(i);
        let prev = levels.last().unwrap();
        let mut kept: Vec<usize> = Vec::new();
        for &p in prev {
            if kept.iter().all(|&q| !within(m.distance(p, q), r)) {
                kept.push(p);
            }
        }
        levels.push(kept);
    }
    levels
}

/// One node of the net tree.
#[derive(Debug, Clone)]
pub struct NetNode {
    pub level: usize,
    /// The point this node represents.
    pub rep: usize,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    /// Same-level cross neighbours.
    pub cross: Vec<usize>,
    /// `(light subtree index, local vertex id)` when the node lies in a
    /// light subtree.
    pub light: Option<(usize, usize)>,
}

/// A maximal subtree hanging at the cut level, shortcut by its own
/// tree-metric 1-spanner.
#[derive(Debug)]
pub struct LightSubtree {
    pub root: usize,
    /// Local dense vertex id -> net node id; the root is local vertex 0.
    pub nodes: Vec<usize>,
    pub tree: RootedTree,
    pub graph: SpannerGraph,
    pub labeling: Labeling,
    /// Maximum canonical-sequence length of the local decomposition.
    pub seq_len: usize,
}

/// The net tree with cross edges and light-subtree shortcuts.
#[derive(Debug)]
pub struct NetTree {
    pub gamma: f64,
    nodes: Vec<NetNode>,
    /// Node ids per level, ascending representative.
    levels: Vec<Vec<usize>>,
    /// Point id -> its leaf node.
    leaf: Vec<usize>,
    /// Point id -> every node it represents, bottom-up.
    rep_nodes: Vec<Vec<usize>>,
    /// Whole-tree interval labels (global post-order), for ancestor tests.
    labels: Vec<IntervalLabel>,
    lights: Vec<LightSubtree>,
    cut_level: usize,
}

/// Builds the net tree for `m` with cross-edge radius factor `gamma > 4`
/// and light-subtree shortcut parameter `k >= 4`.
///
/// Each node's parent is the first point of the next level (in net order)
/// within `2^(i+1)`. Cross edges join all same-level pairs within
/// `gamma * 2^i`. Light subtrees hang at level `ceil(log2(D/n))`; when
/// `D <= n` the whole tree is light and gets a single 1-spanner.
pub fn build_net_tree(m: &PointMetric, gamma: f64, k: usize) -> Result<NetTree> {
    if !(gamma > 4.0) {
        return Err(Error::InvalidParameter(format!(
            "gamma must exceed 4, got {gamma}"
        )));
    }
    if k < 4 {
        return Err(Error::InvalidParameter(format!("k must be >= 4, got {k}")));
    }
    let n = m.len();
    let point_levels = build_net_hierarchy(m);
    let top = point_levels.len() - 1;

    let mut nodes: Vec<NetNode> = Vec::new();
    let mut levels: Vec<Vec<usize>> = Vec::with_capacity(point_levels.len());
    let mut index: Vec<std::collections::HashMap<usize, usize>> =
        vec![std::collections::HashMap::new(); point_levels.len()];
    for (i, pts) in point_levels.iter().enumerate() {
        let mut ids = Vec::with_capacity(pts.len());
        for &p in pts {
            let id = nodes.len();
            nodes.push(NetNode {
                level: i,
                rep: p,
                parent: None,
                children: Vec::new(),
                cross: Vec::new(),
                light: None,
            });
            index[i].insert(p, id);
            ids.push(id);
        }
        levels.push(ids);
    }

    // Parent: first covering point of the next net, in net order.
    for i in 0..top {
        let r = 2f64.powi(i as i32 + 1);
        for &v in &levels[i] {
            let rep = nodes[v].rep;
            let parent_pt = point_levels[i + 1]
                .iter()
                .copied()
                .find(|&q| within(m.distance(rep, q), r))
                .ok_or_else(|| {
                    Error::InvalidMetric(format!("no covering parent for point {rep} at level {i}"))
                })?;
            let p = index[i + 1][&parent_pt];
            nodes[v].parent = Some(p);
            nodes[p].children.push(v);
        }
    }

    // Cross edges per level.
    for i in 0..=top {
        let r = gamma * 2f64.powi(i as i32);
        let ids = &levels[i];
        for a in 0..ids.len() {
            for b in a + 1..ids.len() {
                let (u, v) = (ids[a], ids[b]);
                if within(m.distance(nodes[u].rep, nodes[v].rep), r) {
                    nodes[u].cross.push(v);
                    nodes[v].cross.push(u);
                }
            }
        }
    }

    // Whole-tree interval labels by iterative post-order from the root.
    let root = levels[top][0];
    let mut labels = vec![IntervalLabel { low: 0, rank: 0 }; nodes.len()];
    let mut rank = 0u32;
    let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
    labels[root].low = 1;
    while let Some(&mut (v, ref mut idx)) = stack.last_mut() {
        if *idx < nodes[v].children.len() {
            let c = nodes[v].children[*idx];
            *idx += 1;
            labels[c].low = rank + 1;
            stack.push((c, 0));
        } else {
            rank += 1;
            labels[v].rank = rank;
            stack.pop();
        }
    }

    // Light subtrees hang at the cut level.
    let d = m.diameter();
    let cut_level = if d <= n as f64 {
        top
    } else {
        (((d / n as f64).log2().ceil()) as i64).clamp(0, top as i64) as usize
    };
    let mut lights: Vec<LightSubtree> = Vec::new();
    for &lr in &levels[cut_level] {
        let light_idx = lights.len();
        let mut members = Vec::new();
        let mut dfs = vec![lr];
        while let Some(v) = dfs.pop() {
            let local = members.len();
            members.push(v);
            nodes[v].light = Some((light_idx, local));
            dfs.extend(nodes[v].children.iter().rev());
        }
        let edges: Vec<(usize, usize, f64)> = members
            .iter()
            .enumerate()
            .skip(1)
            .map(|(local, &v)| {
                let p = nodes[v].parent.expect("non-root light member");
                let (pl, _) = nodes[p].light.expect("parent stays inside the subtree");
                debug_assert_eq!(pl, light_idx);
                let plocal = nodes[p].light.unwrap().1;
                (plocal, local, m.distance(nodes[p].rep, nodes[v].rep))
            })
            .collect();
        let tree = build_tree_nonneg(&edges, 0)?;
        let (graph, dec) = build_spanner(&tree, k)?;
        let labeling = assign_labels(&tree, &graph);
        lights.push(LightSubtree {
            root: lr,
            nodes: members,
            tree,
            graph,
            labeling,
            seq_len: dec.max_sequence_len(),
        });
    }

    let mut leaf = vec![usize::MAX; n];
    for &v in &levels[0] {
        leaf[nodes[v].rep] = v;
    }
    let mut rep_nodes = vec![Vec::new(); n];
    for (id, node) in nodes.iter().enumerate() {
        rep_nodes[node.rep].push(id);
    }

    Ok(NetTree {
        gamma,
        nodes,
        levels,
        leaf,
        rep_nodes,
        labels,
        lights,
        cut_level,
    })
}

impl NetTree {
    pub fn node(&self, id: usize) -> &NetNode {
        &self.nodes[id]
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Highest level index.
    pub fn top_level(&self) -> usize {
        self.levels.len() - 1
    }

    /// Node ids at one level, ascending representative.
    pub fn level(&self, i: usize) -> &[usize] {
        &self.levels[i]
    }

    pub fn level_count(&self) -> usize {
        self.levels.len()
    }

    pub fn root(&self) -> usize {
        self.levels[self.levels.len() - 1][0]
    }

    /// The leaf node of a point.
    pub fn leaf(&self, p: usize) -> usize {
        self.leaf[p]
    }

    /// Every node a point represents.
    pub fn nodes_of_point(&self, p: usize) -> &[usize] {
        &self.rep_nodes[p]
    }

    pub fn glabel(&self, node: usize) -> IntervalLabel {
        self.labels[node]
    }

    /// Whole-tree ancestor test through the interval labels.
    pub fn is_node_ancestor(&self, anc: usize, v: usize) -> bool {
        crate::labels::is_descendant(self.labels[v], self.labels[anc])
    }

    /// The level-`i` ancestor of a node (the node itself at its level).
    pub fn ancestor_at(&self, mut v: usize, i: usize) -> usize {
        while self.nodes[v].level < i {
            v = self.nodes[v].parent.expect("levels above exist");
        }
        v
    }

    pub fn lights(&self) -> &[LightSubtree] {
        &self.lights
    }

    pub fn light(&self, idx: usize) -> &LightSubtree {
        &self.lights[idx]
    }

    pub fn cut_level(&self) -> usize {
        self.cut_level
    }

    /// Largest canonical-sequence length over all light subtrees.
    pub fn max_light_seq_len(&self) -> usize {
        self.lights.iter().map(|l| l.seq_len).max().unwrap_or(0)
    }

    /// Distinct edges of the induced point graph `H`: every tree, cross and
    /// shortcut edge mapped to its representatives, self-pairs dropped.
    pub fn h_edges(&self, m: &PointMetric) -> Vec<(usize, usize, f64)> {
        let mut set = std::collections::HashSet::new();
        let mut push = |a: usize, b: usize| {
            if a != b {
                set.insert((a.min(b), a.max(b)));
            }
        };
        for node in &self.nodes {
            if let Some(p) = node.parent {
                push(node.rep, self.nodes[p].rep);
            }
            for &c in &node.cross {
                push(node.rep, self.nodes[c].rep);
            }
        }
        for light in &self.lights {
            for (u, v, _, _) in light.graph.edges() {
                push(
                    self.nodes[light.nodes[u]].rep,
                    self.nodes[light.nodes[v]].rep,
                );
            }
        }
        let mut edges: Vec<(usize, usize, f64)> = set
            .into_iter()
            .map(|(a, b)| (a, b, m.distance(a, b)))
            .collect();
        edges.sort_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)));
        edges
    }
}

/// Net-tree dump: `level node rep parent` lines, then `cross u v` lines,
/// then `light-root node` lines.
pub fn format_net_tree(net: &NetTree) -> String {
    let mut out = String::new();
    for i in 0..net.level_count() {
        for &v in net.level(i) {
            let node = net.node(v);
            match node.parent {
                Some(p) => out.push_str(&format!("{i} {v} {} {p}\n", node.rep)),
                None => out.push_str(&format!("{i} {v} {} -\n", node.rep)),
            }
        }
    }
    let mut cross = Vec::new();
    for (v, node) in (0..net.node_count()).map(|v| (v, net.node(v))) {
        for &u in &node.cross {
            if v < u {
                cross.push((v, u));
            }
        }
    }
    cross.sort_unstable();
    for (v, u) in cross {
        out.push_str(&format!("cross {v} {u}\n"));
    }
    for light in net.lights() {
        out.push_str(&format!("light-root {}\n", light.root));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{gen_points, PointShape};

    #[test]
    fn single_point_hierarchy() {
        let m = PointMetric::from_points(vec![[0.0, 0.0]]).unwrap();
        let levels = build_net_hierarchy(&m);
        assert_eq!(levels, vec![vec![0]]);
    }

    #[test]
    fn two_points_keep_one_at_level_one() {
        let m = PointMetric::from_points(vec![[0.0, 0.0], [1.0, 0.0]]).unwrap();
        let levels = build_net_hierarchy(&m);
        assert_eq!(levels[0], vec![0, 1]);
        assert_eq!(levels[1], vec![0]);
        let net = build_net_tree(&m, 8.0, 4).unwrap();
        // d(0,1) = 1 <= gamma * 2^0, so the leaves share a cross edge.
        let l0 = net.leaf(0);
        let l1 = net.leaf(1);
        assert!(net.node(l0).cross.contains(&l1));
    }

    #[test]
    fn grid_nets_pack_and_cover() {
        let m = PointMetric::from_points(gen_points(PointShape::Grid, 64, 0)).unwrap();
        let levels = build_net_hierarchy(&m);
        assert_eq!(levels.last().unwrap().len(), 1);
        for i in 1..levels.len() {
            let r = 2f64.powi(i as i32);
            for (a, &p) in levels[i].iter().enumerate() {
                for &q in &levels[i][a + 1..] {
                    assert!(!within(m.distance(p, q), r), "packing fails at level {i}");
                }
            }
            for &p in &levels[i - 1] {
                assert!(
                    levels[i].iter().any(|&q| within(m.distance(p, q), r)),
                    "covering fails at level {i}"
                );
            }
        }
    }

    #[test]
    fn whole_tree_light_when_diameter_small() {
        let m = PointMetric::from_points(gen_points(PointShape::Grid, 64, 0)).unwrap();
        // D ~ 9.9 < 64 points.
        let net = build_net_tree(&m, 8.0, 4).unwrap();
        assert_eq!(net.cut_level(), net.top_level());
        assert_eq!(net.lights().len(), 1);
        assert_eq!(net.lights()[0].nodes.len(), net.node_count());
    }

    #[test]
    fn rejects_bad_parameters() {
        let m = PointMetric::from_points(vec![[0.0, 0.0], [1.0, 0.0]]).unwrap();
        assert!(build_net_tree(&m, 4.0, 4).is_err());
        assert!(build_net_tree(&m, 8.0, 3).is_err());
    }
}
