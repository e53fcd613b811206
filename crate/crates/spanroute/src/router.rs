//! Local routing on the 1-spanner.
//!
//! Every decision reads exactly one [`LocalView`] plus the destination
//! label: nothing else. The message header is memoryless — the engine calls
//! [`decide`] afresh at each vertex instead of carrying multi-hop plans,
//! since every "second step" of the case analysis is recomputable at the
//! intermediate vertex from its own view.
//!
//! Among a set of neighbours that are all ancestors of a common vertex the
//! post-order rank orders by depth (a parent outranks its whole subtree),
//! so "deepest" is minimum rank and "highest" is maximum rank.

use crate::error::{Error, Result};
use crate::labels::{is_descendant, IntervalLabel, Labeling, LocalView};
use crate::tree::VertexId;

/// Which routing case produced a hop.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecisionCase {
    /// Case 0: the destination is a neighbour.
    Direct,
    /// Case 1: current vertex is an ancestor of the destination; hop to the
    /// deepest neighbour that is an ancestor of the destination.
    Descend,
    /// Case 2: current vertex is a descendant of the destination; hop to the
    /// highest neighbour between the two.
    Ascend,
    /// Case 3a: unrelated, no neighbour leads into the destination's side;
    /// hop to the highest neighbour-ancestor of self below the lca.
    AscendSide,
    /// Case 3b: unrelated; hop to the deepest neighbour that is an ancestor
    /// of the destination only.
    CrossSide,
    /// Climb toward the target level of a net-tree route.
    Ascending,
    /// Scan levels for a cross edge into the destination's ancestor chain.
    Searching,
    /// Walk down the destination's ancestor chain.
    Descending,
}

impl DecisionCase {
    pub fn code(self) -> &'static str {
        match self {
            DecisionCase::Direct => "0",
            DecisionCase::Descend => "1",
            DecisionCase::Ascend => "2",
            DecisionCase::AscendSide => "3a",
            DecisionCase::CrossSide => "3b",
            DecisionCase::Ascending => "asc",
            DecisionCase::Searching => "srch",
            DecisionCase::Descending => "desc",
        }
    }
}

/// One executed hop.
#[derive(Debug, Clone, Copy)]
pub struct TraceStep {
    pub case: DecisionCase,
    pub from: VertexId,
    pub to: VertexId,
    pub weight: f64,
    pub cumulative: f64,
}

/// The path traversed by a route, with per-decision records.
#[derive(Debug, Clone)]
pub struct RouteTrace {
    /// Visited vertices from source to destination inclusive.
    pub hops: Vec<VertexId>,
    pub steps: Vec<TraceStep>,
    pub total_weight: f64,
}

impl RouteTrace {
    pub fn hop_count(&self) -> usize {
        self.steps.len()
    }
}

/// One local routing decision: the next hop and the case that chose it.
///
/// `dest` must differ from the view's own label. Fails with
/// [`Error::NoViableNeighbour`] only on malformed spanner/label inputs.
pub fn decide(view: &LocalView, dest: IntervalLabel) -> Result<(VertexId, DecisionCase)> {
    if view.label == dest {
        return Err(Error::InvalidParameter(
            "decide called at the destination".into(),
        ));
    }
    // Case 0: destination adjacent.
    if let Some(nb) = view.neighbours.iter().find(|nb| nb.label == dest) {
        return Ok((nb.id, DecisionCase::Direct));
    }
    let stuck = || Error::NoViableNeighbour {
        at: view.id,
        dest_rank: dest.rank,
    };
    if is_descendant(dest, view.label) {
        // Case 1: deepest neighbour that is an ancestor of the destination.
        let x = view
            .neighbours
            .iter()
            .filter(|nb| is_descendant(dest, nb.label))
            .min_by_key(|nb| nb.label.rank)
            .ok_or_else(stuck)?;
        Ok((x.id, DecisionCase::Descend))
    } else if is_descendant(view.label, dest) {
        // Case 2: highest neighbour that is an ancestor of self and a
        // descendant of the destination.
        let x = view
            .neighbours
            .iter()
            .filter(|nb| is_descendant(view.label, nb.label) && is_descendant(nb.label, dest))
            .max_by_key(|nb| nb.label.rank)
            .ok_or_else(stuck)?;
        Ok((x.id, DecisionCase::Ascend))
    } else {
        // Case 3: unrelated vertices.
        let x = view
            .neighbours
            .iter()
            .filter(|nb| is_descendant(dest, nb.label) && !is_descendant(view.label, nb.label))
            .min_by_key(|nb| nb.label.rank);
        if let Some(x) = x {
            return Ok((x.id, DecisionCase::CrossSide));
        }
        let y = view
            .neighbours
            .iter()
            .filter(|nb| is_descendant(view.label, nb.label) && !is_descendant(dest, nb.label))
            .max_by_key(|nb| nb.label.rank);
        match y {
            Some(y) => Ok((y.id, DecisionCase::AscendSide)),
            None => {
                // Self is the highest such vertex; the prescribed step is
                // then its parent, which is always visible on a tree edge.
                let p = view
                    .neighbours
                    .iter()
                    .find(|nb| nb.relation == crate::labels::Relation::Parent)
                    .ok_or_else(stuck)?;
                Ok((p.id, DecisionCase::AscendSide))
            }
        }
    }
}

/// Routes a message from `source` to `dest` by repeated local decisions.
///
/// `hop_budget` is a hard failsafe (callers use `16K + 16` with `K` the
/// decomposition's maximum canonical-sequence length); exceeding it always
/// indicates a bug, never a valid route.
pub fn simulate(
    labeling: &Labeling,
    source: VertexId,
    dest: VertexId,
    hop_budget: usize,
) -> Result<RouteTrace> {
    labeling.try_view(source)?;
    labeling.try_view(dest)?;
    if source == dest {
        return Err(Error::InvalidParameter(
            "source and destination coincide".into(),
        ));
    }
    let dest_label = labeling.label(dest);
    let mut hops = vec![source];
    let mut steps = Vec::new();
    let mut total = 0.0;
    let mut cur = source;
    while cur != dest {
        if steps.len() >= hop_budget {
            return Err(Error::HopBudgetExceeded {
                src: source,
                dest,
                budget: hop_budget,
                visited: hops.len(),
            });
        }
        let view = labeling.view(cur);
        let (next, case) = decide(view, dest_label)?;
        let weight = view
            .neighbours
            .iter()
            .find(|nb| nb.id == next)
            .expect("decide returns a neighbour")
            .weight;
        total += weight;
        steps.push(TraceStep {
            case,
            from: cur,
            to: next,
            weight,
            cumulative: total,
        });
        hops.push(next);
        cur = next;
    }
    Ok(RouteTrace {
        hops,
        steps,
        total_weight: total,
    })
}

/// Routes every pair, fanning out over a worker pool when the `parallel`
/// feature is enabled. Results keep the order of `pairs`.
pub fn route_pairs(
    labeling: &Labeling,
    pairs: &[(VertexId, VertexId)],
    hop_budget: usize,
) -> Result<Vec<RouteTrace>> {
    crate::par::try_map(pairs, |&(s, d)| simulate(labeling, s, d, hop_budget))
}

/// Sequential twin of [`route_pairs`], kept unconditionally for benchmark
/// comparisons.
pub fn route_pairs_seq(
    labeling: &Labeling,
    pairs: &[(VertexId, VertexId)],
    hop_budget: usize,
) -> Result<Vec<RouteTrace>> {
    pairs
        .iter()
        .map(|&(s, d)| simulate(labeling, s, d, hop_budget))
        .collect()
}

/// Trace dump: one `step vertex case edge_weight cumulative_weight` line
/// per hop.
pub fn format_trace(trace: &RouteTrace) -> String {
    let mut out = String::new();
    for (i, s) in trace.steps.iter().enumerate() {
        out.push_str(&format!(
            "{} {} {} {:.16e} {:.16e}\n",
            i + 1,
            s.to,
            s.case.code(),
            s.weight,
            s.cumulative
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labels::assign_labels;
    use crate::spanner::build_spanner;
    use crate::tree::build_tree;

    fn labelled(edges: &[(usize, usize, f64)], k: usize) -> Labeling {
        let t = build_tree(edges, 0).unwrap();
        let (g, _) = build_spanner(&t, k).unwrap();
        assign_labels(&t, &g)
    }

    #[test]
    fn adjacent_destination_is_case0() {
        let l = labelled(&[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)], 64);
        // k large: complete graph, every route is a single direct hop.
        for s in 0..4 {
            for d in 0..4 {
                if s == d {
                    continue;
                }
                let tr = simulate(&l, s, d, 16).unwrap();
                assert_eq!(tr.hop_count(), 1);
                assert_eq!(tr.steps[0].case, DecisionCase::Direct);
            }
        }
    }

    #[test]
    fn star_routes_have_tree_weight() {
        let edges: Vec<_> = (1..6).map(|v| (0, v, v as f64)).collect();
        let l = labelled(&edges, 4);
        let tr = simulate(&l, 1, 5, 16).unwrap();
        assert_eq!(tr.total_weight, 6.0);
        assert!(tr.hop_count() <= 2);
    }

    #[test]
    fn simulate_rejects_equal_endpoints() {
        let l = labelled(&[(0, 1, 1.0)], 4);
        assert!(simulate(&l, 0, 0, 8).is_err());
    }

    #[test]
    fn hop_budget_zero_trips() {
        let l = labelled(&[(0, 1, 1.0)], 4);
        assert!(matches!(
            simulate(&l, 0, 1, 0),
            Err(Error::HopBudgetExceeded { .. })
        ));
    }

    #[test]
    fn trace_is_consistent() {
        let edges: Vec<_> = (1..30).map(|v| (v / 2, v, 1.0 + (v % 3) as f64)).collect();
        let l = labelled(&edges, 4);
        let tr = simulate(&l, 17, 22, 200).unwrap();
        assert_eq!(tr.hops.len(), tr.steps.len() + 1);
        let sum: f64 = tr.steps.iter().map(|s| s.weight).sum();
        assert!((sum - tr.total_weight).abs() < 1e-12);
        assert_eq!(*tr.hops.last().unwrap(), 22);
    }
}
