//! Closed-form bounds: the sum formula, its layer decomposition, the uniform
//! bound, and the averaging bound on products.

use sunflower_core::bounds::{amgm_product_bound, layer_cap, s_formula, uniform_bound};
use sunflower_core::partition::ratio_string;

fn main() -> sunflower_core::Result<()> {
    let (n, k) = (8, 4);
    let caps: Vec<u128> = (0..=n)
        .map(|s| layer_cap(n, k, s))
        .collect::<Result<_, _>>()?;
    println!(
        "n={n} k={k}: s_formula {} = sum of layer caps {caps:?}",
        s_formula(n, k)?
    );
    for (n, s, c, t, k) in [
        (3, 1, 0, 3, 3),
        (4, 2, 1, 3, 3),
        (4, 2, 0, 2, 3),
        (5, 2, 0, 2, 3),
    ] {
        println!(
            "uniform n={n} s={s} c={c} t={t} k={k}: {}",
            ratio_string(&uniform_bound(n, s, c, t, k)?)
        );
    }
    println!(
        "product bound n=4 k=3: {}",
        ratio_string(&amgm_product_bound(4, 3)?)
    );
    Ok(())
}
