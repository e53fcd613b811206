//! spanroute: tree-metric 1-spanners with local routing, and a net-tree
//! extension for doubling metrics.
//!
//! The pipeline for a weighted tree is: build the 1-spanner by recursive
//! cut-vertex shortcutting ([`spanner`]), assign two-integer interval
//! labels and per-vertex local views ([`labels`]), then route between any
//! pair with purely local decisions ([`router`]). Routes follow the tree
//! path exactly (routing ratio 1) and take logarithmically many hops.
//!
//! For a finite doubling metric, [`doubling`] builds the net-tree
//! (1+ε)-spanner — nested nets, parent and cross edges, light subtrees
//! shortcut by the same 1-spanner machinery — and routes over it with a
//! four-state automaton driven by distance labels.
//!
//! [`gen`], [`oracle`], [`verify`] and [`experiment`] supply seeded
//! instance generators, brute-force oracles and the invariant-checking
//! harness behind the `spanroute` CLI.
//!
//! With the default `parallel` feature, batch routing and batch
//! verification fan out over rayon; disabling it falls back to identical
//! sequential code paths.

pub mod doubling;
pub mod error;
pub mod experiment;
pub mod gen;
pub mod labels;
pub mod oracle;
mod par;
pub mod router;
pub mod spanner;
pub mod tree;
pub mod verify;

pub use error::{Error, Result};
pub use labels::{assign_labels, is_descendant, IntervalLabel, Labeling, LocalView};
pub use router::{decide, simulate, RouteTrace};
pub use spanner::{build_spanner, CanonicalDecomposition, SpannerGraph};
pub use tree::{build_tree, RootedTree, VertexId};
