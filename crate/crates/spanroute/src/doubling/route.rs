//! Routing over the net tree.
//!
//! A route from point `p` to point `q` walks the net tree in four states:
//! from `p`'s leaf it ascends toward the cross-edge target level (riding
//! light-subtree shortcuts where available), searches upward for a cross
//! edge into `q`'s ancestor chain, and descends that chain to `q`'s leaf
//! (again through shortcuts inside light subtrees). The target level is
//! computed from the distance labels alone, one constant-length interval
//! below the level where a cross edge is guaranteed, so the search can
//! never overshoot the first usable cross edge.
//!
//! The trace is reported over the induced point graph: consecutive nodes
//! sharing a representative produce no hop.

use crate::doubling::metric::{DistanceLabel, PointMetric};
use crate::doubling::net::NetTree;
use crate::error::{Error, Result};
use crate::router::{decide, DecisionCase, RouteTrace, TraceStep};

/// The level interval that must contain the first cross edge between the
/// ancestor chains of two points at estimated distance `d_est`, clamped to
/// `[0, top]`. The lower endpoint is the routing target level.
pub fn cross_edge_target_interval(
    d_est: f64,
    gamma: f64,
    delta: f64,
    top: usize,
) -> Result<(usize, usize)> {
    if !(d_est > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "distance estimate must be positive, got {d_est}"
        )));
    }
    if !(gamma > 4.0) {
        return Err(Error::InvalidParameter(format!(
            "gamma must exceed 4, got {gamma}"
        )));
    }
    if delta < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "delta must be nonnegative, got {delta}"
        )));
    }
    let lo = (d_est / ((gamma + 4.0) * (1.0 + delta))).log2().floor() as i64;
    let hi = (d_est / (gamma - 4.0)).log2().ceil() as i64;
    let lo = lo.clamp(0, top as i64) as usize;
    let hi = hi.clamp(0, top as i64) as usize;
    Ok((lo, hi))
}

/// Routes from point `p` to point `q`, returning the trace over the point
/// graph. The hop budget is a generous logarithmic failsafe; exceeding it
/// indicates a bug.
pub fn route_doubling(
    net: &NetTree,
    m: &PointMetric,
    dlabels: &[DistanceLabel],
    p: usize,
    q: usize,
) -> Result<RouteTrace> {
    let n = m.len();
    if p >= n {
        return Err(Error::VertexOutOfRange { v: p, n });
    }
    if q >= n {
        return Err(Error::VertexOutOfRange { v: q, n });
    }
    if p == q {
        return Err(Error::InvalidParameter(
            "source and destination coincide".into(),
        ));
    }

    let d_est = dlabels[p].estimate(&dlabels[q]);
    let delta = dlabels[p].delta().max(dlabels[q].delta());
    let (target, _) = cross_edge_target_interval(d_est, net.gamma, delta, net.top_level())?;
    let qleaf = net.leaf(q);
    let q_light = net.node(qleaf).light;

    let budget = 2 * (16 * net.max_light_seq_len() + 16) + 8 * (net.top_level() + 2) + 64;
    let mut node_steps = 0usize;

    let mut cur = net.leaf(p);
    let mut hops = vec![p];
    let mut steps: Vec<TraceStep> = Vec::new();
    let mut total = 0.0;

    while cur != qleaf {
        node_steps += 1;
        if node_steps > budget {
            return Err(Error::HopBudgetExceeded {
                src: p,
                dest: q,
                budget,
                visited: hops.len(),
            });
        }
        let node = net.node(cur);
        let stuck = || Error::NoViableNeighbour {
            at: cur,
            dest_rank: net.glabel(qleaf).rank,
        };

        let (next, case) = if net.is_node_ancestor(cur, qleaf) {
            // Descending: down q's ancestor chain, shortcut inside lights.
            if let Some((li, lv)) = node.light {
                let light = net.light(li);
                let (qli, qlv) = q_light.expect("a descendant of a light node is light");
                debug_assert_eq!(qli, li);
                let (next_local, _) = decide(light.labeling.view(lv), light.labeling.label(qlv))?;
                (light.nodes[next_local], DecisionCase::Descending)
            } else {
                let c = node
                    .children
                    .iter()
                    .copied()
                    .find(|&c| net.is_node_ancestor(c, qleaf))
                    .ok_or_else(stuck)?;
                (c, DecisionCase::Descending)
            }
        } else if node.level < target {
            // Ascending toward the target level.
            if let Some((li, lv)) = node.light {
                let light = net.light(li);
                let goal_level = target.min(net.node(light.root).level);
                if node.level >= goal_level {
                    // At the light root with the target above it.
                    (node.parent.ok_or_else(stuck)?, DecisionCase::Ascending)
                } else {
                    let goal = net.ancestor_at(cur, goal_level);
                    let glv = net.node(goal).light.expect("goal stays in the subtree").1;
                    let (next_local, _) =
                        decide(light.labeling.view(lv), light.labeling.label(glv))?;
                    (light.nodes[next_local], DecisionCase::Ascending)
                }
            } else {
                (node.parent.ok_or_else(stuck)?, DecisionCase::Ascending)
            }
        } else {
            // Searching: take a cross edge into q's ancestor chain, else climb.
            let hit = node
                .cross
                .iter()
                .copied()
                .filter(|&w| net.is_node_ancestor(w, qleaf))
                .min_by_key(|&w| net.glabel(w).rank);
            match hit {
                Some(w) => (w, DecisionCase::Searching),
                None => (node.parent.ok_or_else(stuck)?, DecisionCase::Searching),
            }
        };

        let (from_rep, to_rep) = (net.node(cur).rep, net.node(next).rep);
        if from_rep != to_rep {
            let w = m.distance(from_rep, to_rep);
            total += w;
            steps.push(TraceStep {
                case,
                from: from_rep,
                to: to_rep,
                weight: w,
                cumulative: total,
            });
            hops.push(to_rep);
        }
        cur = next;
    }

    Ok(RouteTrace {
        hops,
        steps,
        total_weight: total,
    })
}

/// Routes every pair over a worker pool (input order preserved).
pub fn route_doubling_pairs(
    net: &NetTree,
    m: &PointMetric,
    dlabels: &[DistanceLabel],
    pairs: &[(usize, usize)],
) -> Result<Vec<RouteTrace>> {
    crate::par::try_map(pairs, |&(p, q)| route_doubling(net, m, dlabels, p, q))
}

/// Sequential twin of [`route_doubling_pairs`] for benchmark comparisons.
pub fn route_doubling_pairs_seq(
    net: &NetTree,
    m: &PointMetric,
    dlabels: &[DistanceLabel],
    pairs: &[(usize, usize)],
) -> Result<Vec<RouteTrace>> {
    pairs
        .iter()
        .map(|&(p, q)| route_doubling(net, m, dlabels, p, q))
        .collect()
}

/// Smallest level at which the ancestors of `p` and `q` are joined by a
/// cross edge, found by walking both ancestor chains. `None` only if the
/// chains merge without ever being cross-connected, which the construction
/// rules out for distinct points.
pub fn first_cross_level(net: &NetTree, p: usize, q: usize) -> Option<usize> {
    let mut a = net.leaf(p);
    let mut b = net.leaf(q);
    loop {
        if a == b {
            return None;
        }
        if net.node(a).cross.contains(&b) {
            return Some(net.node(a).level);
        }
        match (net.node(a).parent, net.node(b).parent) {
            (Some(pa), Some(pb)) => {
                a = pa;
                b = pb;
            }
            _ => return None,
        }
    }
}

/// Weight of the reference path: climb from `p` to the first cross-connected
/// level, take the cross edge, descend to `q`. Hops between nodes sharing a
/// representative are free, like in the routed trace.
pub fn reference_path_weight(net: &NetTree, m: &PointMetric, p: usize, q: usize) -> Option<f64> {
    let level = first_cross_level(net, p, q)?;
    let climb = |leaf: usize| -> f64 {
        let mut v = leaf;
        let mut sum = 0.0;
        while net.node(v).level < level {
            let par = net.node(v).parent.expect("cross level is below the top");
            sum += m.distance(net.node(v).rep, net.node(par).rep);
            v = par;
        }
        sum
    };
    let pa = net.ancestor_at(net.leaf(p), level);
    let qa = net.ancestor_at(net.leaf(q), level);
    Some(climb(net.leaf(p)) + m.distance(net.node(pa).rep, net.node(qa).rep) + climb(net.leaf(q)))
}

/// Per-point storage accounting for the net-tree labelling.
#[derive(Debug, Clone, Copy)]
pub struct PointLabelBits {
    /// Whole-tree interval labels of every node the point represents.
    pub interval_bits: u64,
    /// Light-subtree 1-spanner labels of those nodes.
    pub light_bits: u64,
    /// Numbers held by the distance label (2 coordinates, or a matrix row).
    pub distance_numbers: u64,
}

impl PointLabelBits {
    pub fn structural_bits(&self) -> u64 {
        self.interval_bits + self.light_bits
    }
}

pub fn doubling_label_bits(net: &NetTree, dlabels: &[DistanceLabel]) -> Vec<PointLabelBits> {
    let width = crate::labels::ceil_log2(net.node_count() + 1);
    dlabels
        .iter()
        .enumerate()
        .map(|(p, dl)| {
            let mut interval_bits = 0;
            let mut light_bits = 0;
            for &v in net.nodes_of_point(p) {
                interval_bits += 2 * width;
                if let Some((li, lv)) = net.node(v).light {
                    let light = net.light(li);
                    let w = crate::labels::ceil_log2(light.nodes.len() + 1);
                    light_bits += 2 * w * (1 + light.graph.degree(lv) as u64);
                }
            }
            PointLabelBits {
                interval_bits,
                light_bits,
                distance_numbers: dl.numbers() as u64,
            }
        })
        .collect()
}
