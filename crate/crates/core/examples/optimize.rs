//! The product program: every KKT case, the direct maximizer, the winner.

use sunflower_core::optimizer::{
    direct_maximize, product_upper_scaled, solve_case1, solve_case2, solve_case3, solve_def_zero,
    solve_global, DEFAULT_TOL,
};

fn main() -> sunflower_core::Result<()> {
    for r in [
        solve_def_zero(),
        solve_case1(),
        solve_case2(),
        solve_case3(DEFAULT_TOL)?,
    ] {
        println!(
            "{:<8} {:.6}  residual {:.1e}  {}",
            r.case_label.as_str(),
            r.value,
            r.residual,
            r.point
        );
    }
    let d = direct_maximize();
    println!(
        "direct   {:.6}  from {} directions  {}",
        d.value, d.starts, d.point
    );
    let g = solve_global(DEFAULT_TOL)?;
    println!(
        "winner {} with value {:.9}; scaled coefficient {}",
        g.case_label.as_str(),
        g.value,
        product_upper_scaled()?
    );
    Ok(())
}
