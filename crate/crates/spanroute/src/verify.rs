//! Test-mode cross-checks for routing traces.
//!
//! The router itself never reads the canonical decomposition; these checks
//! replay a finished trace against the tree and the decomposition and
//! report violations. They encode the structural facts the routing
//! guarantees rest on:
//!
//! * every trace is an in-order subsequence of the tree path between its
//!   endpoints, so its weight telescopes to the tree distance;
//! * once the current vertex is an ancestor of the destination it stays
//!   one until arrival;
//! * in the ancestor/descendant phases, the two-step case execution moves
//!   the canonical sequence of the current vertex strictly toward the
//!   destination's sequence;
//! * a sidestep decision (case 3a) coincides with the decision that would
//!   be made when routing toward the lca.
//!
//! Divergence between the engine's memoryless second hop and the two-step
//! plan of the case analysis is legal (the greedy hop can only skip
//! further along the path), so it is counted, not failed.

use crate::labels::{is_descendant, Labeling};
use crate::router::{decide, DecisionCase, RouteTrace};
use crate::spanner::CanonicalDecomposition;
use crate::tree::{RootedTree, VertexId};

/// Outcome of replaying one trace against the full structure.
#[derive(Debug, Default)]
pub struct TraceReport {
    /// Hard invariant violations; empty means the trace checks out.
    pub violations: Vec<String>,
    /// Count of memoryless hops that differ from the two-step plan.
    pub second_hop_divergences: usize,
}

impl TraceReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

pub(crate) fn approx_eq(a: f64, b: f64, rel_tol: f64) -> bool {
    a == b || (a - b).abs() <= rel_tol * a.abs().max(b.abs())
}

fn is_prefix(a: &[u32], b: &[u32]) -> bool {
    b.len() >= a.len() && &b[..a.len()] == a
}

fn common_prefix_len(a: &[u32], b: &[u32]) -> usize {
    a.iter().zip(b.iter()).take_while(|(x, y)| x == y).count()
}

/// The landing vertex of the full two-step case execution started at `w`,
/// reconstructed from the decomposition: the deepest/highest cut vertex of
/// `w`'s canonical subtree in the prescribed direction, then its child
/// toward the destination (descending) or its parent (ascending).
fn two_step_landing(
    tree: &RootedTree,
    dec: &CanonicalDecomposition,
    w: VertexId,
    dest: VertexId,
) -> Option<VertexId> {
    let cut = &dec.owner(w).cut_set;
    if tree.is_ancestor(w, dest) {
        let x = cut
            .iter()
            .copied()
            .chain(std::iter::once(w))
            .filter(|&c| tree.is_ancestor(c, dest) && c != dest)
            .min_by_key(|&c| tree.rank(c))?;
        tree.children(x)
            .iter()
            .copied()
            .find(|&c| tree.is_ancestor(c, dest))
    } else if tree.is_ancestor(dest, w) {
        let x = cut
            .iter()
            .copied()
            .chain(std::iter::once(w))
            .filter(|&c| tree.is_ancestor(dest, c) && c != dest && tree.is_ancestor(c, w))
            .max_by_key(|&c| tree.rank(c))?;
        tree.parent(x)
    } else {
        None
    }
}

/// Replays `trace` (a route from `hops[0]` to `hops.last()`) against the
/// tree, decomposition and labelling it was produced from.
pub fn check_trace(
    tree: &RootedTree,
    dec: &CanonicalDecomposition,
    labeling: &Labeling,
    trace: &RouteTrace,
) -> TraceReport {
    let mut violations: Vec<String> = Vec::new();
    let mut second_hop_divergences = 0usize;

    let source = trace.hops[0];
    let dest = *trace.hops.last().unwrap();

    // Hops are spanner-adjacent with the recorded weights.
    for step in &trace.steps {
        let view = labeling.view(step.from);
        match view.neighbours.iter().find(|nb| nb.id == step.to) {
            None => violations.push(format!("hop {} -> {} is not an edge", step.from, step.to)),
            Some(nb) if nb.weight != step.weight => violations.push(format!(
                "hop {} -> {} weight {} recorded as {}",
                step.from, step.to, nb.weight, step.weight
            )),
            _ => {}
        }
    }

    // In-order subsequence of the tree path.
    let path = tree.path(source, dest).expect("endpoints are valid");
    let mut pos = std::collections::HashMap::with_capacity(path.len());
    for (i, &v) in path.iter().enumerate() {
        pos.insert(v, i);
    }
    let mut prev = None;
    for &h in &trace.hops {
        match pos.get(&h) {
            None => violations.push(format!("visited vertex {h} is off the tree path")),
            Some(&i) => {
                if let Some(p) = prev {
                    if i <= p {
                        violations.push(format!("vertex {h} visited out of path order"));
                    }
                }
                prev = Some(i);
            }
        }
    }

    // Weight telescopes to the tree distance.
    let d = tree.distance_unchecked(source, dest);
    if !approx_eq(trace.total_weight, d, 1e-9) {
        violations.push(format!(
            "trace weight {} differs from tree distance {d}",
            trace.total_weight
        ));
    }

    // Once an ancestor of the destination, always an ancestor.
    let mut seen_ancestor = false;
    for &h in &trace.hops {
        let anc = tree.is_ancestor(h, dest);
        if seen_ancestor && !anc {
            violations.push(format!("vertex {h} left the destination's ancestor chain"));
        }
        seen_ancestor |= anc;
    }

    let dest_seq = dec.canonical_sequence(dest).unwrap().to_vec();

    for (i, step) in trace.steps.iter().enumerate() {
        let w = step.from;

        // Canonical-sequence progress of the two-step case execution, for
        // related endpoints where the direct case does not apply.
        if step.case != DecisionCase::Direct
            && (tree.is_ancestor(w, dest) || tree.is_ancestor(dest, w))
        {
            let s_w = dec.canonical_sequence(w).unwrap();
            if s_w != dest_seq.as_slice() {
                match two_step_landing(tree, dec, w, dest) {
                    None => violations.push(format!("no two-step landing from {w}")),
                    Some(z) => {
                        let s_z = dec.canonical_sequence(z).unwrap();
                        if is_prefix(s_w, &dest_seq) {
                            if s_z.len() <= s_w.len() || !is_prefix(s_z, &dest_seq) {
                                violations.push(format!(
                                    "sequence did not extend toward the destination at {w}"
                                ));
                            }
                        } else if is_prefix(&dest_seq, s_w) {
                            if s_z.len() >= s_w.len() || !is_prefix(&dest_seq, s_z) {
                                violations.push(format!(
                                    "sequence did not shrink toward the destination at {w}"
                                ));
                            }
                        } else {
                            let m = common_prefix_len(s_w, &dest_seq);
                            if s_z.len() >= s_w.len() || !is_prefix(&s_w[..m], s_z) {
                                violations.push(format!(
                                    "sequence did not shrink toward the common prefix at {w}"
                                ));
                            }
                        }
                    }
                }
            }
        }

        // A 3a sidestep is the decision toward the lca: identical hop, or a
        // direct hop when the lca happens to be adjacent.
        if step.case == DecisionCase::AscendSide {
            let l = tree.lca_unchecked(w, dest);
            let view = labeling.view(w);
            let replay = decide(view, labeling.label(l));
            let adjacent = view.neighbours.iter().any(|nb| nb.id == l);
            match replay {
                Err(e) => violations.push(format!("lca replay at {w} failed: {e}")),
                Ok((hop, _)) if adjacent => {
                    if hop != l {
                        violations.push(format!("lca replay at {w} ignored the adjacent lca"));
                    }
                }
                Ok((hop, _)) => {
                    if hop != step.to {
                        violations.push(format!(
                            "lca replay at {w} chose {hop}, trace chose {}",
                            step.to
                        ));
                    }
                }
            }
        }

        // Memoryless second hop vs the two-step plan (informational).
        if let Some(next) = trace.steps.get(i + 1) {
            let x = step.to;
            let planned = match step.case {
                DecisionCase::Descend | DecisionCase::CrossSide => tree
                    .children(x)
                    .iter()
                    .copied()
                    .find(|&c| tree.is_ancestor(c, dest)),
                DecisionCase::Ascend | DecisionCase::AscendSide => tree.parent(x),
                _ => None,
            };
            if let Some(p) = planned {
                if p != next.to {
                    second_hop_divergences += 1;
                }
            }
        }
    }

    TraceReport {
        violations,
        second_hop_divergences,
    }
}

/// Convenience: route one pair and replay the checks.
pub fn simulate_checked(
    tree: &RootedTree,
    dec: &CanonicalDecomposition,
    labeling: &Labeling,
    source: VertexId,
    dest: VertexId,
    hop_budget: usize,
) -> crate::error::Result<(RouteTrace, TraceReport)> {
    let trace = crate::router::simulate(labeling, source, dest, hop_budget)?;
    let report = check_trace(tree, dec, labeling, &trace);
    Ok((trace, report))
}

/// True when the labels of `w` and `v` certify that `w` descends from `v`
/// in the labelled structure. Exposed so external checks can phrase
/// ancestor tests exactly the way routing decisions do.
pub fn label_descendant(labeling: &Labeling, w: VertexId, v: VertexId) -> bool {
    is_descendant(labeling.label(w), labeling.label(v))
}
