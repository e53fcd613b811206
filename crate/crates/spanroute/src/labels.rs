//! Interval routing labels and the per-vertex local views.
//!
//! A vertex's label is the pair `[L(v), rank(v)]` of post-order numbers; a
//! vertex `w` is a descendant of `v` exactly when `rank(w)` falls inside
//! `v`'s interval. A [`LocalView`] holds everything a routing decision at a
//! vertex may read: its own label plus the labels of its spanner neighbours.

use crate::error::{Error, Result};
use crate::spanner::{EdgeKind, SpannerGraph};
use crate::tree::{RootedTree, VertexId};

/// The pair `[L(v), rank(v)]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IntervalLabel {
    pub low: u32,
    pub rank: u32,
}

/// `w` is a descendant of `v` iff `rank(w)` lies in `v`'s interval.
/// Reflexive: every vertex descends from itself.
pub fn is_descendant(w: IntervalLabel, v: IntervalLabel) -> bool {
    v.low <= w.rank && w.rank <= v.rank
}

/// How a neighbour is connected in the spanner.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Parent,
    Child,
    Shortcut,
}

impl Relation {
    pub fn code(self) -> &'static str {
        match self {
            Relation::Parent => "P",
            Relation::Child => "C",
            Relation::Shortcut => "S",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Neighbour {
    pub id: VertexId,
    pub label: IntervalLabel,
    pub weight: f64,
    pub relation: Relation,
}

/// The complete information available to a routing decision at one vertex.
#[derive(Debug, Clone)]
pub struct LocalView {
    pub id: VertexId,
    pub label: IntervalLabel,
    pub neighbours: Vec<Neighbour>,
}

/// All local views of a labelled spanner.
#[derive(Debug, Clone)]
pub struct Labeling {
    views: Vec<LocalView>,
}

/// Assigns interval labels and copies neighbour labels into per-vertex views.
pub fn assign_labels(t: &RootedTree, g: &SpannerGraph) -> Labeling {
    let n = t.len();
    let labels: Vec<IntervalLabel> = (0..n)
        .map(|v| IntervalLabel {
            low: t.interval_low(v),
            rank: t.rank(v),
        })
        .collect();
    let views = (0..n)
        .map(|v| {
            let neighbours = g
                .neighbours(v)
                .iter()
                .map(|&(u, w, kind)| Neighbour {
                    id: u,
                    label: labels[u],
                    weight: w,
                    relation: match kind {
                        EdgeKind::Shortcut => Relation::Shortcut,
                        EdgeKind::Tree => {
                            if t.parent(v) == Some(u) {
                                Relation::Parent
                            } else {
                                Relation::Child
                            }
                        }
                    },
                })
                .collect();
            LocalView {
                id: v,
                label: labels[v],
                neighbours,
            }
        })
        .collect();
    Labeling { views }
}

impl Labeling {
    pub fn len(&self) -> usize {
        self.views.len()
    }

    pub fn is_empty(&self) -> bool {
        self.views.is_empty()
    }

    pub fn view(&self, v: VertexId) -> &LocalView {
        &self.views[v]
    }

    pub fn try_view(&self, v: VertexId) -> Result<&LocalView> {
        self.views.get(v).ok_or(Error::VertexOutOfRange {
            v,
            n: self.views.len(),
        })
    }

    pub fn label(&self, v: VertexId) -> IntervalLabel {
        self.views[v].label
    }

    pub fn views(&self) -> &[LocalView] {
        &self.views
    }
}

/// Idealized integer width used by the storage accounting: `ceil(log2(x))`.
pub(crate) fn ceil_log2(x: usize) -> u64 {
    debug_assert!(x >= 1);
    (usize::BITS - (x - 1).leading_zeros()) as u64
}

/// Per-vertex storage in idealized bits: two integers of width
/// `ceil(log2(n+1))` for the vertex's own label and for each neighbour's.
pub fn label_storage_bits(labeling: &Labeling) -> Vec<u64> {
    let n = labeling.len();
    let width = ceil_log2(n + 1);
    labeling
        .views
        .iter()
        .map(|view| 2 * width * (1 + view.neighbours.len() as u64))
        .collect()
}

/// Label dump: one `v L rank` line per vertex.
pub fn format_labels(labeling: &Labeling) -> String {
    let mut out = String::new();
    for view in &labeling.views {
        out.push_str(&format!(
            "{} {} {}\n",
            view.id, view.label.low, view.label.rank
        ));
    }
    out
}

/// Debugging dump of whole local views:
/// `v | (nbr,L,rank,weight,relation)*`.
pub fn format_local_views(labeling: &Labeling) -> String {
    let mut out = String::new();
    for view in &labeling.views {
        out.push_str(&format!("{} |", view.id));
        for nb in &view.neighbours {
            out.push_str(&format!(
                " ({},{},{},{:.16e},{})",
                nb.id,
                nb.label.low,
                nb.label.rank,
                nb.weight,
                nb.relation.code()
            ));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spanner::build_spanner;
    use crate::tree::build_tree;

    fn labelled_path3() -> Labeling {
        let t = build_tree(&[(0, 1, 1.0), (1, 2, 1.0)], 0).unwrap();
        let (g, _) = build_spanner(&t, 4).unwrap();
        assign_labels(&t, &g)
    }

    #[test]
    fn path_labels() {
        let l = labelled_path3();
        assert_eq!(l.label(2), IntervalLabel { low: 1, rank: 1 });
        assert_eq!(l.label(1), IntervalLabel { low: 1, rank: 2 });
        assert_eq!(l.label(0), IntervalLabel { low: 1, rank: 3 });
    }

    #[test]
    fn root_label_spans_everything() {
        let edges: Vec<_> = (1..7).map(|v| (v / 2, v, 1.0)).collect();
        let t = build_tree(&edges, 0).unwrap();
        let (g, _) = build_spanner(&t, 4).unwrap();
        let l = assign_labels(&t, &g);
        assert_eq!(l.label(0), IntervalLabel { low: 1, rank: 7 });
    }

    #[test]
    fn descendant_test_is_reflexive_and_directional() {
        let l = labelled_path3();
        assert!(is_descendant(l.label(1), l.label(1)));
        assert!(is_descendant(l.label(2), l.label(0)));
        assert!(!is_descendant(l.label(0), l.label(2)));
    }

    #[test]
    fn storage_bits_examples() {
        let t = build_tree(&[], 0).unwrap();
        let (g, _) = build_spanner(&t, 4).unwrap();
        let l = assign_labels(&t, &g);
        assert_eq!(label_storage_bits(&l), vec![2]);

        // Path on 3 vertices: the complete graph (base case), middle vertex
        // has 2 neighbours: 2 * ceil(log2(4)) * 3 = 12.
        let l = labelled_path3();
        assert_eq!(label_storage_bits(&l)[1], 12);
    }

    #[test]
    fn local_views_match_adjacency() {
        let l = labelled_path3();
        // k=4 >= 3/2-1 so the spanner is complete on 3 vertices.
        assert_eq!(l.view(0).neighbours.len(), 2);
        let n01 = l
            .view(0)
            .neighbours
            .iter()
            .find(|nb| nb.id == 1)
            .unwrap();
        assert_eq!(n01.relation, Relation::Child);
        let n02 = l
            .view(0)
            .neighbours
            .iter()
            .find(|nb| nb.id == 2)
            .unwrap();
        assert_eq!(n02.relation, Relation::Shortcut);
        assert_eq!(n02.weight, 2.0);
    }
}
