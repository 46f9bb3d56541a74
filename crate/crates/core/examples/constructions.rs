//! The extremal constructions, certified by the detector.

use sunflower_core::bounds::s_formula;
use sunflower_core::constructions::{product_extremal, sum_extremal};
use sunflower_core::detect::find_multicolor_sunflower;

fn main() -> sunflower_core::Result<()> {
    println!(
        "{:>3} {:>6} {:>8} {:>22}  certified",
        "n", "total", "formula", "product sizes"
    );
    for n in 3..=10 {
        let sum = sum_extremal(n, 3)?;
        let prod = product_extremal(n, 3)?;
        let free = [&sum, &prod].iter().all(|c| {
            c.tuple
                .as_ref()
                .is_some_and(|t| find_multicolor_sunflower(t).is_none())
        });
        println!(
            "{n:>3} {:>6} {:>8} {:>22}  {free}",
            sum.total,
            s_formula(n, 3)?,
            format!("{:?}", prod.sizes)
        );
    }
    // Past the enumeration limit only the sizes are produced.
    let big = sum_extremal(40, 5)?;
    println!(
        "n=40 k=5: total {} (materialized: {})",
        big.total,
        big.tuple.is_some()
    );
    Ok(())
}
