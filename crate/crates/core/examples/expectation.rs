//! Random-partition averaging: exact E(P+Q) with a Monte Carlo companion,
//! and the membership probability of a fixed set.

use num_bigint::BigInt;
use sunflower_core::constructions::product_extremal;
use sunflower_core::partition::{
    count_four_partitions, mc_pq_expectation_threaded, membership_probability_check, ratio_string,
    UniformPartitionSpec,
};
use sunflower_core::SubsetMask;

fn main() -> sunflower_core::Result<()> {
    for n in 3..=6 {
        println!("p({n}) = {}", count_four_partitions(n));
    }
    let spec = UniformPartitionSpec::new(5, 2, 1, 3)?;
    let a = SubsetMask::from_elements([2, 4]);
    println!(
        "P(X2 ∪ X3 = {a}) = {}",
        ratio_string(&membership_probability_check(&spec, a, 3)?)
    );

    let ft = product_extremal(5, 3)?.tuple.expect("small");
    let r = mc_pq_expectation_threaded(&ft, 20_000, 7, 4)?;
    let mc = r.mc.as_ref().expect("estimate");
    println!(
        "product construction n=5: E(P+Q) = {} ~ {:.4}, MC {:.4} +/- {:.4}, bound applies {}",
        ratio_string(&r.exact),
        r.exact_f64(),
        mc.estimate,
        mc.stderr,
        r.bound_applies
    );
    assert!(
        r.exact <= num_rational::BigRational::from_integer(BigInt::from(6)) || !r.bound_applies
    );
    Ok(())
}
