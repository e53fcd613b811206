use spanroute::gen::{gen_tree, TreeShape};
use spanroute::spanner::build_spanner;

fn main() {
    let mut max_c = 0.0f64;
    let shapes = [
        (TreeShape::RandomRecursive, vec![100usize, 500, 2000]),
        (TreeShape::Path, vec![500]),
        (TreeShape::Star, vec![500]),
        (TreeShape::Caterpillar, vec![500]),
    ];
    for (shape, sizes) in &shapes {
        for &n in sizes {
            for k in [4usize, 8, 16] {
                for seed in [1u64, 2, 3] {
                    let t = gen_tree(*shape, n, seed);
                    let (g, _) = build_spanner(&t, k).unwrap();
                    let ratio = g.total_weight() / t.total_weight();
                    let shape_bound = (k * k) as f64 * ((n as f64).log2() / (k as f64).log2() + 2.0);
                    let c = ratio / shape_bound;
                    if c > max_c {
                        max_c = c;
                        println!("new max C = {c:.5} at {} n={n} k={k} seed={seed} (ratio {ratio:.3}, shape {shape_bound:.1})", shape.name());
                    }
                }
            }
        }
    }
    // sweep sizes too (criterion 5 instances)
    for exp in 7..=13u32 {
        let n = 1usize << exp;
        let t = gen_tree(TreeShape::RandomRecursive, n, 1000 + exp as u64);
        let (g, _) = build_spanner(&t, 4).unwrap();
        let ratio = g.total_weight() / t.total_weight();
        let shape_bound = 16.0 * ((n as f64).log2() / 2.0 + 2.0);
        let c = ratio / shape_bound;
        if c > max_c { max_c = c; println!("new max C = {c:.5} at sweep n={n} (ratio {ratio:.3})"); }
    }
    println!("final max C = {max_c:.5}");
}
