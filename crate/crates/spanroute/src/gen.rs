//! Seeded instance generators. A fixed seed fully determines the instance;
//! the generator is ChaCha8, so instances reproduce across platforms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::tree::{build_tree, RootedTree};

/// Tree instance families. The random model is the random recursive tree:
/// each new vertex attaches to a uniformly chosen earlier vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeShape {
    RandomRecursive,
    Path,
    Star,
    Caterpillar,
    Balanced { arity: usize },
}

impl TreeShape {
    pub fn name(self) -> String {
        match self {
            TreeShape::RandomRecursive => "random-recursive-tree".into(),
            TreeShape::Path => "path".into(),
            TreeShape::Star => "star".into(),
            TreeShape::Caterpillar => "caterpillar".into(),
            TreeShape::Balanced { arity } => format!("balanced-{arity}-ary"),
        }
    }
}

/// Generates a weighted tree with `n` vertices rooted at 0. Edge weights
/// are uniform in (0, 1].
pub fn gen_tree(shape: TreeShape, n: usize, seed: u64) -> RootedTree {
    assert!(n >= 1, "trees have at least one vertex");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    let spine = n.div_ceil(2);
    for v in 1..n {
        let parent = match shape {
            TreeShape::RandomRecursive => rng.gen_range(0..v),
            TreeShape::Path => v - 1,
            TreeShape::Star => 0,
            TreeShape::Caterpillar => {
                if v < spine {
                    v - 1
                } else {
                    (v - spine) % spine
                }
            }
            TreeShape::Balanced { arity } => (v - 1) / arity.max(1),
        };
        let w = 1.0 - rng.gen::<f64>(); // uniform in (0, 1]
        edges.push((parent, v, w));
    }
    build_tree(&edges, 0).expect("generated edges form a tree")
}

/// Point instance families for the doubling-metric pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointShape {
    /// Unit-spacing grid, row major, side `ceil(sqrt(n))`.
    Grid,
    /// Uniform points in the unit square.
    Uniform,
}

impl PointShape {
    pub fn name(self) -> &'static str {
        match self {
            PointShape::Grid => "grid-points",
            PointShape::Uniform => "uniform-points",
        }
    }
}

pub fn gen_points(shape: PointShape, n: usize, seed: u64) -> Vec<[f64; 2]> {
    assert!(n >= 1, "point sets have at least one point");
    match shape {
        PointShape::Grid => {
            let side = (n as f64).sqrt().ceil() as usize;
            (0..n)
                .map(|i| [(i % side) as f64, (i / side) as f64])
                .collect()
        }
        PointShape::Uniform => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..n).map(|_| [rng.gen::<f64>(), rng.gen::<f64>()]).collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_generation_is_deterministic() {
        let a = gen_tree(TreeShape::RandomRecursive, 64, 7);
        let b = gen_tree(TreeShape::RandomRecursive, 64, 7);
        for v in 0..64 {
            assert_eq!(a.parent(v), b.parent(v));
            assert_eq!(a.parent_edge_weight(v), b.parent_edge_weight(v));
        }
        let c = gen_tree(TreeShape::RandomRecursive, 64, 8);
        assert!((0..64).any(|v| a.parent(v) != c.parent(v)));
    }

    #[test]
    fn shapes_have_expected_structure() {
        let star = gen_tree(TreeShape::Star, 10, 1);
        assert_eq!(star.children(0).len(), 9);
        let path = gen_tree(TreeShape::Path, 10, 1);
        assert_eq!(path.max_degree(), 2);
        let cat = gen_tree(TreeShape::Caterpillar, 11, 1);
        assert_eq!(cat.len(), 11);
        let bin = gen_tree(TreeShape::Balanced { arity: 2 }, 15, 1);
        assert_eq!(bin.children(0).len(), 2);
    }

    #[test]
    fn grid_points_have_unit_spacing() {
        let pts = gen_points(PointShape::Grid, 9, 0);
        assert_eq!(pts[4], [1.0, 1.0]);
    }
}
