//! Uniform families: exhaustive optimum against the bound, pruned and not.

use sunflower_core::bounds::uniform_bound;
use sunflower_core::partition::ratio_string;
use sunflower_core::search::{exhaustive_max_sum_uniform, SearchOptions};

fn main() -> sunflower_core::Result<()> {
    let plain = SearchOptions {
        bound_pruning: false,
        symmetry: false,
        ..Default::default()
    };
    for (n, s, c, t, k) in [(3, 1, 0, 3, 3), (4, 2, 1, 3, 3), (4, 2, 0, 2, 3)] {
        let pruned = exhaustive_max_sum_uniform(n, s, c, t, k, &SearchOptions::default())?;
        let full = exhaustive_max_sum_uniform(n, s, c, t, k, &plain)?;
        println!(
            "({n},{s},{c},{t},{k}): best {} / {}, bound {}, nodes {} pruned vs {} full",
            pruned.best_total,
            full.best_total,
            ratio_string(&uniform_bound(n, s, c, t, k)?),
            pruned.nodes_explored,
            full.nodes_explored
        );
    }
    let r = exhaustive_max_sum_uniform(4, 2, 0, 2, 3, &SearchOptions::default())?;
    print!("{}", r.witness_tuple.to_file_string());
    Ok(())
}
