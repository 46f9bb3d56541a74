//! Exhaustive maximum-sum search, with and without the layer caps.
//!
//!     cargo run --release --example search -- 5

use std::time::Instant;

use sunflower_core::bounds::s_formula;
use sunflower_core::search::{exhaustive_max_sum, SearchOptions};

fn main() -> sunflower_core::Result<()> {
    let n: u32 = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(4);
    for layer_bounds in [false, true] {
        let start = Instant::now();
        let r = exhaustive_max_sum(
            n,
            3,
            &SearchOptions {
                layer_bounds,
                ..Default::default()
            },
        )?;
        println!(
            "n={n} layer caps {layer_bounds}: best {} (formula {}), proven {}, {} nodes, {:?}",
            r.best_total,
            s_formula(n, 3)?,
            r.proven_optimal,
            r.nodes_explored,
            start.elapsed()
        );
    }
    Ok(())
}
