//! Routing properties: arrival, exact traversed weight, the in-order
//! subsequence property, phase monotonicity, canonical-sequence progress
//! and the sidestep/lca replay — all replayed through `verify::check_trace`
//! plus direct oracles in this file.

use spanroute::gen::{gen_tree, TreeShape};
use spanroute::labels::assign_labels;
use spanroute::router::{route_pairs, route_pairs_seq, simulate, DecisionCase};
use spanroute::spanner::build_spanner;
use spanroute::verify::check_trace;

#[test]
fn exhaustive_small_tree_routing() {
    let n = 100;
    let t = gen_tree(TreeShape::RandomRecursive, n, 31);
    for k in [4usize, 8] {
        let (g, dec) = build_spanner(&t, k).unwrap();
        let labeling = assign_labels(&t, &g);
        let seq = dec.max_sequence_len();
        let budget = 16 * seq + 16;
        let hop_bound = 8 * seq + 4;
        let mut divergences = 0usize;
        for s in 0..n {
            for d in 0..n {
                if s == d {
                    continue;
                }
                let trace = simulate(&labeling, s, d, budget).unwrap();
                assert_eq!(*trace.hops.last().unwrap(), d);
                assert!(
                    trace.hop_count() <= hop_bound,
                    "{} hops > {hop_bound} for {s}->{d}, k={k}",
                    trace.hop_count()
                );
                let report = check_trace(&t, &dec, &labeling, &trace);
                assert!(
                    report.ok(),
                    "violations for {s}->{d}, k={k}: {:?}",
                    report.violations
                );
                divergences += report.second_hop_divergences;
            }
        }
        // Divergence from the two-step plan is informational; surface it.
        println!("k={k}: {divergences} greedy second-hop divergences over all pairs");
    }
}

#[test]
fn sampled_routing_on_larger_trees() {
    for &(n, seed) in &[(500usize, 41u64), (2000, 43)] {
        for &k in &[4usize, 8] {
            let t = gen_tree(TreeShape::RandomRecursive, n, seed);
            let (g, dec) = build_spanner(&t, k).unwrap();
            let labeling = assign_labels(&t, &g);
            let seq = dec.max_sequence_len();
            let budget = 16 * seq + 16;
            for i in 0..2000usize {
                let s = (i * 48271 + 7) % n;
                let mut d = (i * 16807 + 13) % n;
                if d == s {
                    d = (d + 1) % n;
                }
                let trace = simulate(&labeling, s, d, budget).unwrap();
                let expected = t.tree_distance(s, d).unwrap();
                assert!(
                    (trace.total_weight - expected).abs() <= 1e-9 * expected.max(1.0),
                    "weight {} != {expected} for {s}->{d}",
                    trace.total_weight
                );
                assert!(trace.hop_count() <= 8 * seq + 4);
            }
        }
    }
}

#[test]
fn case_log_reflects_the_route_structure() {
    // Path rooted in the middle gives unrelated endpoint pairs.
    let edges: Vec<_> = (1..40).map(|v| (v - 1, v, 1.0)).collect();
    let t = spanroute::tree::build_tree(&edges, 20).unwrap();
    let (g, dec) = build_spanner(&t, 4).unwrap();
    let labeling = assign_labels(&t, &g);
    let budget = 16 * dec.max_sequence_len() + 16;
    // 0 and 39 are on opposite sides of the root: the route starts
    // unrelated and must end with descend/direct decisions.
    let trace = simulate(&labeling, 0, 39, budget).unwrap();
    assert!(trace.steps.iter().any(|s| matches!(
        s.case,
        DecisionCase::AscendSide | DecisionCase::CrossSide
    )));
    assert!(matches!(
        trace.steps.last().unwrap().case,
        DecisionCase::Direct
    ));
    let report = check_trace(&t, &dec, &labeling, &trace);
    assert!(report.ok(), "{:?}", report.violations);
}

#[test]
fn deep_ancestor_routes_descend_monotonically() {
    let t = gen_tree(TreeShape::Path, 512, 0);
    let (g, dec) = build_spanner(&t, 4).unwrap();
    let labeling = assign_labels(&t, &g);
    let budget = 16 * dec.max_sequence_len() + 16;
    let trace = simulate(&labeling, 0, 511, budget).unwrap();
    // Strictly increasing positions along the path.
    for w in trace.hops.windows(2) {
        assert!(w[0] < w[1]);
    }
    let report = check_trace(&t, &dec, &labeling, &trace);
    assert!(report.ok(), "{:?}", report.violations);
    assert!(trace.hop_count() <= 8 * dec.max_sequence_len() + 4);
}

#[test]
fn parallel_and_sequential_batches_agree() {
    let t = gen_tree(TreeShape::RandomRecursive, 300, 77);
    let (g, dec) = build_spanner(&t, 4).unwrap();
    let labeling = assign_labels(&t, &g);
    let budget = 16 * dec.max_sequence_len() + 16;
    let pairs: Vec<(usize, usize)> = (0..500)
        .map(|i| ((i * 7) % 300, (i * 11 + 1) % 300))
        .filter(|(s, d)| s != d)
        .collect();
    let par = route_pairs(&labeling, &pairs, budget).unwrap();
    let seq = route_pairs_seq(&labeling, &pairs, budget).unwrap();
    assert_eq!(par.len(), seq.len());
    for (a, b) in par.iter().zip(&seq) {
        assert_eq!(a.hops, b.hops);
        assert_eq!(a.total_weight, b.total_weight);
    }
}
