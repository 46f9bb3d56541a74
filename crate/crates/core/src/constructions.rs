//! Explicit sunflower-free family tuples attaining the extremal values.
//!
//! Each constructor returns a [`ConstructionReport`] with the materialized
//! tuple (ground sets up to 24 elements) and exact size accounting. Above
//! that only the sizes are reported.

use num_bigint::BigUint;
use num_traits::One;
use serde_json::{json, Value};

use crate::bounds::{s_formula, uniform_bound};
use crate::error::{domain, Result};
use crate::family::{Family, FamilyTuple, MAX_FAMILIES};
use crate::set::{binomial, GroundSet, SubsetMask, MAX_ENUMERABLE, MAX_GROUND};

#[derive(Debug, Clone)]
pub struct ConstructionReport {
    pub n: u32,
    /// `None` when the ground set is too large to materialize.
    pub tuple: Option<FamilyTuple>,
    pub sizes: Vec<u128>,
    pub total: u128,
    pub product: BigUint,
    pub claimed_formula: &'static str,
}

impl ConstructionReport {
    fn new(
        n: u32,
        tuple: Option<FamilyTuple>,
        sizes: Vec<u128>,
        claimed_formula: &'static str,
    ) -> Self {
        if let Some(t) = &tuple {
            debug_assert_eq!(
                t.sizes().iter().map(|&s| s as u128).collect::<Vec<_>>(),
                sizes
            );
        }
        let total = sizes.iter().sum();
        let product = sizes
            .iter()
            .fold(BigUint::one(), |acc, &s| acc * BigUint::from(s));
        ConstructionReport {
            n,
            tuple,
            sizes,
            total,
            product,
            claimed_formula,
        }
    }

    pub fn k(&self) -> usize {
        self.sizes.len()
    }

    /// Flat JSON object; big integers are decimal strings.
    pub fn to_json(&self) -> Value {
        json!({
            "schema": 1,
            "claimed_formula": self.claimed_formula,
            "n": self.n,
            "k": self.k(),
            "sizes": self.sizes.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
            "total": self.total.to_string(),
            "product": self.product.to_string(),
            "materialized": self.tuple.is_some(),
        })
    }
}

fn check_k(k: u32) -> Result<()> {
    if k < 3 || k as usize > MAX_FAMILIES {
        return domain(format!("k={k} outside 3..={MAX_FAMILIES}"));
    }
    Ok(())
}

fn check_n(n: u32) -> Result<GroundSet> {
    if n > MAX_GROUND {
        return domain(format!("n={n} exceeds {MAX_GROUND}"));
    }
    GroundSet::new(n)
}

fn materialize(
    ground: GroundSet,
    families: impl FnOnce() -> Result<Vec<Family>>,
) -> Result<Option<FamilyTuple>> {
    if ground.n() > MAX_ENUMERABLE {
        return Ok(None);
    }
    FamilyTuple::new(families()?).map(Some)
}

/// `k-1` copies of `2^[n]` plus `{∅} ∪ {S : |S| >= n-k+2}`.
pub fn sum_extremal(n: u32, k: u32) -> Result<ConstructionReport> {
    check_k(k)?;
    if n < k {
        return domain(format!("sum_extremal needs n >= k, got n={n} k={k}"));
    }
    let ground = check_n(n)?;
    let threshold = n - k + 2;
    let last = 1
        + (threshold..=n)
            .map(|s| binomial(n as u64, s as u64))
            .sum::<u128>();
    let mut sizes = vec![1u128 << n; k as usize - 1];
    sizes.push(last);
    let tuple = materialize(ground, || {
        let full = Family::power_set(ground)?;
        let mut fams = vec![full; k as usize - 1];
        fams.push(Family::from_predicate(ground, |s| {
            s.is_empty() || s.len() >= threshold
        })?);
        Ok(fams)
    })?;
    let report = ConstructionReport::new(n, tuple, sizes, "s_formula");
    debug_assert_eq!(Some(report.total), s_formula(n, k).ok());
    Ok(report)
}

/// Two copies of `{S : 1 ∈ S or |S| >= n-1}`, one of
/// `{S : 1 ∉ S or |S| >= n-1}`, and `k-3` copies of `2^[n]`.
pub fn product_extremal(n: u32, k: u32) -> Result<ConstructionReport> {
    check_k(k)?;
    if n < 3 {
        return domain(format!("product_extremal needs n >= 3, got {n}"));
    }
    let ground = check_n(n)?;
    let half = 1u128 << (n - 1);
    let mut sizes = vec![half + 1, half + 1, half + n as u128];
    sizes.extend(std::iter::repeat_n(1u128 << n, k as usize - 3));
    let tuple = materialize(ground, || {
        let big = |s: SubsetMask| s.len() + 1 >= n;
        let with_one = Family::from_predicate(ground, |s| s.contains(1) || big(s))?;
        let without_one = Family::from_predicate(ground, |s| !s.contains(1) || big(s))?;
        let mut fams = vec![with_one.clone(), with_one, without_one];
        if k > 3 {
            let full = Family::power_set(ground)?;
            fams.extend(std::iter::repeat_n(full, k as usize - 3));
        }
        Ok(fams)
    })?;
    Ok(ConstructionReport::new(
        n,
        tuple,
        sizes,
        "product_lower_bound",
    ))
}

/// `k` copies of all `s`-subsets of `[n] \ {1}` with `n = m s`. Contains no
/// `m`-petal multicolor sunflower with empty core, since every partition of
/// `[n]` into `m` blocks of size `s` has a block containing 1.
pub fn tk_matching_extremal(s: u32, m: u32, k: u32) -> Result<ConstructionReport> {
    if s == 0 || m < 2 || k < m || k as usize > MAX_FAMILIES {
        return domain(format!(
            "tk_matching_extremal needs s >= 1, 2 <= m <= k <= {MAX_FAMILIES} (s={s} m={m} k={k})"
        ));
    }
    let n = m * s;
    if n > MAX_ENUMERABLE {
        return domain(format!("n = m*s = {n} exceeds {MAX_ENUMERABLE}"));
    }
    let ground = GroundSet::new(n)?;
    let each = binomial(n as u64 - 1, s as u64);
    let sizes = vec![each; k as usize];
    let tuple = materialize(ground, || {
        let fam = Family::new(ground, ground.subsets_of_size(s).filter(|x| !x.contains(1)))?;
        Ok(vec![fam; k as usize])
    })?;
    let report = ConstructionReport::new(n, tuple, sizes, "uniform_bound_first_branch");
    debug_assert_eq!(
        uniform_bound(n, s, 0, m, k).ok(),
        Some(num_rational::BigRational::from_integer(report.total.into()))
    );
    Ok(report)
}

/// `k-1` copies of all `s`-subsets of `[n]` plus one empty family.
pub fn uniform_tight(n: u32, s: u32, k: u32) -> Result<ConstructionReport> {
    check_k(k)?;
    if s == 0 || s > n {
        return domain(format!("uniform_tight needs 1 <= s <= n (n={n} s={s})"));
    }
    let ground = check_n(n)?;
    let each = binomial(n as u64, s as u64);
    let mut sizes = vec![each; k as usize - 1];
    sizes.push(0);
    let tuple = materialize(ground, || {
        let layer = Family::new(ground, ground.subsets_of_size(s))?;
        let mut fams = vec![layer; k as usize - 1];
        fams.push(Family::empty(ground));
        Ok(fams)
    })?;
    Ok(ConstructionReport::new(
        n,
        tuple,
        sizes,
        "uniform_bound_second_branch",
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detect::{find_multicolor_sunflower, find_uniform_sunflower};

    #[test]
    fn sum_extremal_examples() {
        let r = sum_extremal(3, 3).unwrap();
        assert_eq!(r.sizes, vec![8, 8, 5]);
        assert_eq!(r.total, 21);
        let r = sum_extremal(5, 3).unwrap();
        assert_eq!(r.sizes, vec![32, 32, 7]);
        assert_eq!(r.total, 71);
        assert!(sum_extremal(2, 3).is_err());
        assert!(find_multicolor_sunflower(r.tuple.as_ref().unwrap()).is_none());
    }

    #[test]
    fn product_extremal_small() {
        let r = product_extremal(4, 3).unwrap();
        assert_eq!(r.sizes, vec![9, 9, 12]);
        assert_eq!(r.product, BigUint::from(972u32));
        assert!(find_multicolor_sunflower(r.tuple.as_ref().unwrap()).is_none());
        let r = product_extremal(5, 4).unwrap();
        assert_eq!(r.sizes, vec![17, 17, 21, 32]);
        assert!(find_multicolor_sunflower(r.tuple.as_ref().unwrap()).is_none());
    }

    #[test]
    fn tk_matching_examples() {
        let r = tk_matching_extremal(2, 2, 3).unwrap();
        assert_eq!((r.n, r.sizes.clone(), r.total), (4, vec![3, 3, 3], 9));
        assert!(find_uniform_sunflower(r.tuple.as_ref().unwrap(), 2, 0)
            .unwrap()
            .is_none());
        let r = tk_matching_extremal(3, 2, 4).unwrap();
        assert_eq!((r.n, r.total), (6, 40));
        assert!(r.sizes.iter().all(|&s| s == 10));
        assert!(tk_matching_extremal(2, 3, 2).is_err());
    }

    #[test]
    fn uniform_tight_examples() {
        let r = uniform_tight(4, 2, 3).unwrap();
        assert_eq!((r.sizes.clone(), r.total), (vec![6, 6, 0], 12));
        assert!(find_multicolor_sunflower(r.tuple.as_ref().unwrap()).is_none());
        assert_eq!(uniform_tight(6, 2, 3).unwrap().total, 30);
    }

    #[test]
    fn large_ground_sets_report_sizes_only() {
        let r = sum_extremal(40, 3).unwrap();
        assert!(r.tuple.is_none());
        assert_eq!(r.total, s_formula(40, 3).unwrap());
        let r = product_extremal(30, 3).unwrap();
        assert!(r.tuple.is_none());
        assert_eq!(r.sizes[2], (1u128 << 29) + 30);
    }

    #[test]
    fn json_is_flat() {
        let v = product_extremal(4, 3).unwrap().to_json();
        assert_eq!(v["product"], "972");
        assert_eq!(v["schema"], 1);
        assert_eq!(v["k"], 3);
    }
}
