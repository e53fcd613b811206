//! (1+ε)-spanners for doubling metrics built on the net tree, with the
//! tree-metric 1-spanner shortcutting light subtrees and a four-state
//! routing algorithm driven by distance labels.

pub mod metric;
pub mod net;
pub mod route;

pub use metric::{format_points, parse_points, DistanceLabel, PointMetric};
pub use net::{build_net_hierarchy, build_net_tree, format_net_tree, within, LightSubtree, NetNode, NetTree};
pub use route::{
    cross_edge_target_interval, doubling_label_bits, first_cross_level, reference_path_weight,
    route_doubling, route_doubling_pairs, route_doubling_pairs_seq, PointLabelBits,
};
