//! Closed-form extremal values and upper bounds.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow};

use crate::error::{domain, Result};
use crate::set::{binomial, MAX_GROUND};

/// Maximum total size of a sunflower-free `k`-tuple of families in `2^[n]`:
/// `(k-1) 2^n + 1 + sum_{s=n-k+2}^{n} C(n,s)`.
pub fn s_formula(n: u32, k: u32) -> Result<u128> {
    if k < 3 || n < k {
        return domain(format!("s_formula needs n >= k >= 3, got n={n} k={k}"));
    }
    if n > MAX_GROUND {
        return domain(format!("n={n} exceeds {MAX_GROUND}"));
    }
    let top: u128 = (n - k + 2..=n).map(|s| binomial(n as u64, s as u64)).sum();
    Ok((k as u128 - 1) * (1u128 << n) + 1 + top)
}

/// Smallest admissible core size for layer `s` when bounding the `k`-family
/// sum one layer at a time: the least `c >= 0` with `n >= c + k(s-c)`.
pub fn layer_core(n: u32, k: u32, s: u32) -> Result<u32> {
    if k < 2 || s == 0 || s + k > n + 1 {
        return domain(format!(
            "layer_core needs 1 <= s <= n-k+1 (n={n} k={k} s={s})"
        ));
    }
    let excess = (k * s).saturating_sub(n);
    Ok(excess.div_ceil(k - 1))
}

/// Per-layer cap on `sum_i |A_i ∩ C([n],s)|` for a sunflower-free
/// `k`-tuple: `k` for the empty layer, `(k-1) C(n,s)` for layers
/// `1..=n-k+1` (uniform bound at the layer's core size), and the trivial
/// `k C(n,s)` above.
pub fn layer_cap(n: u32, k: u32, s: u32) -> Result<u128> {
    if k < 3 || n < k || s > n {
        return domain(format!(
            "layer_cap needs n >= k >= 3 and s <= n (n={n} k={k} s={s})"
        ));
    }
    let c_ns = binomial(n as u64, s as u64);
    if s == 0 || s > n - k + 1 {
        return Ok(k as u128 * c_ns);
    }
    let c = layer_core(n, k, s)?;
    let b = uniform_bound(n, s, c, k, k)?;
    Ok(b.to_integer()
        .try_into()
        .expect("integer layer bound fits in u128"))
}

/// Sum of [`layer_cap`] over all layers; equals [`s_formula`].
pub fn layered_upper_bound(n: u32, k: u32) -> Result<u128> {
    (0..=n).map(|s| layer_cap(n, k, s)).sum()
}

/// Upper bound on `sum |A_i|` for `k` families of `s`-sets with no `t`-petal
/// multicolor sunflower of core size `c`.
///
/// With `m = floor((n-c)/(s-c))`, the bound is `(t-1) k / m * C(n,s)` when
/// `c + t(s-c) <= n <= c + k(s-c)` and `(t-1) C(n,s)` when
/// `n >= c + k(s-c)`. The two branches agree at `n = c + k(s-c)`.
pub fn uniform_bound(n: u32, s: u32, c: u32, t: u32, k: u32) -> Result<BigRational> {
    if s == 0 {
        return domain("uniform_bound needs s >= 1");
    }
    if c >= s {
        return domain(format!("core size c={c} must be below s={s}"));
    }
    if t < 2 || t > k {
        return domain(format!("petal count t={t} must lie in 2..=k={k}"));
    }
    if n > MAX_GROUND {
        return domain(format!("n={n} exceeds {MAX_GROUND}"));
    }
    let petal = (s - c) as u64;
    let need_t = c as u64 + t as u64 * petal;
    let need_k = c as u64 + k as u64 * petal;
    let n64 = n as u64;
    if n64 < need_t {
        return domain(format!("n={n} below c+t(s-c)={need_t}"));
    }
    let c_ns = BigInt::from(binomial(n64, s as u64));
    let t1 = BigInt::from(t - 1);
    if n64 >= need_k {
        return Ok(BigRational::from_integer(t1 * c_ns));
    }
    let m = (n64 - c as u64) / petal;
    Ok(BigRational::new(
        t1 * BigInt::from(k) * c_ns,
        BigInt::from(m),
    ))
}

/// Leading coefficient `((k-1)/k)^k` of the averaging bound on the product of
/// family sizes.
pub fn amgm_factor(k: u32) -> Result<BigRational> {
    if k < 3 {
        return domain(format!("amgm bound needs k >= 3, got {k}"));
    }
    let r = BigRational::new(BigInt::from(k - 1), BigInt::from(k));
    Ok(Pow::pow(r, k))
}

/// `((k-1)/k)^k * 2^{kn}`, the leading-order upper bound on the product of
/// family sizes of a sunflower-free `k`-tuple.
pub fn amgm_product_bound(n: u32, k: u32) -> Result<BigRational> {
    let factor = amgm_factor(k)?;
    let scale = BigInt::one() << (k as usize * n as usize);
    Ok(factor * BigRational::from_integer(scale))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn int(v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    #[test]
    fn s_formula_examples() {
        assert_eq!(s_formula(3, 3).unwrap(), 21);
        assert_eq!(s_formula(4, 3).unwrap(), 38);
        assert_eq!(s_formula(5, 4).unwrap(), 113);
        assert!(s_formula(2, 3).is_err());
        assert!(s_formula(5, 2).is_err());
    }

    #[test]
    fn layered_assembly_matches_formula() {
        for k in 3..=16 {
            for n in k..=40 {
                assert_eq!(
                    layered_upper_bound(n, k).unwrap(),
                    s_formula(n, k).unwrap(),
                    "n={n} k={k}"
                );
            }
        }
    }

    #[test]
    fn layer_core_is_admissible() {
        for k in 3..=8u32 {
            for n in k..=30 {
                for s in 1..=n - k + 1 {
                    let c = layer_core(n, k, s).unwrap();
                    assert!(c < s, "n={n} k={k} s={s} c={c}");
                    assert!(n >= c + k * (s - c));
                    assert!(c == 0 || n < (c - 1) + k * (s - c + 1), "not minimal");
                }
            }
        }
    }

    #[test]
    fn uniform_bound_examples() {
        assert_eq!(uniform_bound(4, 2, 0, 2, 3).unwrap(), int(9));
        assert_eq!(uniform_bound(4, 2, 1, 3, 3).unwrap(), int(12));
        assert_eq!(uniform_bound(3, 1, 0, 3, 3).unwrap(), int(6));
        // first branch with a genuine fraction: 1*3/2 * C(5,2)
        assert_eq!(
            uniform_bound(5, 2, 0, 2, 3).unwrap(),
            BigRational::new(30.into(), 2.into())
        );
    }

    #[test]
    fn uniform_bound_branches_agree_at_boundary() {
        for s in 1..=5u32 {
            for c in 0..s {
                for k in 2..=5u32 {
                    for t in 2..=k {
                        let n = c + k * (s - c);
                        let first = BigRational::new(
                            BigInt::from(t - 1)
                                * BigInt::from(k)
                                * BigInt::from(binomial(n as u64, s as u64)),
                            BigInt::from(k),
                        );
                        assert_eq!(uniform_bound(n, s, c, t, k).unwrap(), first);
                    }
                }
            }
        }
    }

    #[test]
    fn uniform_bound_domain_errors() {
        assert!(uniform_bound(4, 0, 0, 2, 3).is_err());
        assert!(uniform_bound(4, 2, 2, 2, 3).is_err());
        assert!(uniform_bound(4, 2, 0, 1, 3).is_err());
        assert!(uniform_bound(4, 2, 0, 4, 3).is_err());
        assert!(uniform_bound(3, 2, 0, 2, 3).is_err());
    }

    #[test]
    fn amgm_factor_values() {
        assert_eq!(
            amgm_factor(3).unwrap(),
            BigRational::new(8.into(), 27.into())
        );
        for k in 3..=16 {
            assert!(amgm_factor(k).unwrap().to_f64().unwrap() < 0.367880);
        }
        // 2^{kn} = 2^3 at n = 1
        assert_eq!(
            amgm_product_bound(1, 3).unwrap(),
            BigRational::new(64.into(), 27.into())
        );
    }
}
