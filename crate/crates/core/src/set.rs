//! Ground sets `[n]` and subsets encoded as bitmasks.
//!
//! Element `i` (1-based) of `[n]` lives in bit `i - 1`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Widest ground set a mask can hold.
pub const MAX_GROUND: u32 = 64;

/// Widest ground set for which whole power sets may be materialized.
pub const MAX_ENUMERABLE: u32 = 24;

/// The ambient set `[n] = {1, ..., n}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroundSet {
    n: u32,
}

impl GroundSet {
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 || n > MAX_GROUND {
            return domain(format!("ground set size {n} outside 1..={MAX_GROUND}"));
        }
        Ok(GroundSet { n })
    }

    /// Like [`GroundSet::new`] but additionally requires `n <= 24`, the
    /// limit for operations that enumerate the whole power set.
    pub fn enumerable(n: u32) -> Result<Self> {
        if n > MAX_ENUMERABLE {
            return domain(format!(
                "ground set size {n} exceeds enumeration limit {MAX_ENUMERABLE}"
            ));
        }
        Self::new(n)
    }

    #[inline]
    pub fn n(self) -> u32 {
        self.n
    }

    /// Mask with all `n` bits set.
    #[inline]
    pub fn full(self) -> SubsetMask {
        SubsetMask(full_bits(self.n))
    }

    #[inline]
    pub fn contains(self, s: SubsetMask) -> bool {
        s.0 & !full_bits(self.n) == 0
    }

    /// `2^n` as a count; only meaningful for enumerable ground sets.
    pub fn power_set_size(self) -> u64 {
        1u64 << self.n
    }

    /// Every subset of `[n]` in increasing mask order.
    pub fn subsets(self) -> impl Iterator<Item = SubsetMask> {
        assert!(self.n <= MAX_ENUMERABLE, "power set too large to enumerate");
        (0..self.power_set_size()).map(SubsetMask)
    }

    /// Every `s`-subset of `[n]` in increasing mask order.
    pub fn subsets_of_size(self, s: u32) -> KSubsets {
        KSubsets::new(self.n, s)
    }
}

#[inline]
pub(crate) fn full_bits(n: u32) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// A subset of `[n]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SubsetMask(pub u64);

impl SubsetMask {
    pub const EMPTY: SubsetMask = SubsetMask(0);

    /// Builds a mask from 1-based elements.
    pub fn from_elements<I: IntoIterator<Item = u32>>(elems: I) -> Self {
        let mut bits = 0u64;
        for e in elems {
            assert!((1..=MAX_GROUND).contains(&e), "element {e} out of range");
            bits |= 1u64 << (e - 1);
        }
        SubsetMask(bits)
    }

    #[inline]
    pub fn bits(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn contains(self, elem: u32) -> bool {
        (1..=MAX_GROUND).contains(&elem) && self.0 >> (elem - 1) & 1 == 1
    }

    #[inline]
    pub fn intersection(self, other: Self) -> Self {
        SubsetMask(self.0 & other.0)
    }

    #[inline]
    pub fn union(self, other: Self) -> Self {
        SubsetMask(self.0 | other.0)
    }

    #[inline]
    pub fn difference(self, other: Self) -> Self {
        SubsetMask(self.0 & !other.0)
    }

    #[inline]
    pub fn is_subset_of(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// 1-based elements in increasing order.
    pub fn elements(self) -> impl Iterator<Item = u32> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let tz = bits.trailing_zeros();
            bits &= bits - 1;
            Some(tz + 1)
        })
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.elements().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

/// Iterator over the `k`-subsets of `[n]` (Gosper's hack).
#[derive(Debug, Clone)]
pub struct KSubsets {
    next: Option<u64>,
    limit: u64,
}

impl KSubsets {
    pub(crate) fn new(n: u32, k: u32) -> Self {
        if k > n || n > 63 {
            // n = 64 would overflow the limit; nothing in the toolkit needs it.
            return KSubsets {
                next: None,
                limit: 0,
            };
        }
        let first = if k == 0 { 0 } else { (1u64 << k) - 1 };
        KSubsets {
            next: Some(first),
            limit: 1u64 << n,
        }
    }
}

impl Iterator for KSubsets {
    type Item = SubsetMask;

    fn next(&mut self) -> Option<SubsetMask> {
        let cur = self.next?;
        self.next = if cur == 0 {
            None
        } else {
            let c = cur & cur.wrapping_neg();
            let r = cur + c;
            let nxt = (((r ^ cur) >> 2) / c) | r;
            (nxt < self.limit).then_some(nxt)
        };
        Some(SubsetMask(cur))
    }
}

/// Binomial coefficient `C(n, k)`; exact for every `n <= 128`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step.
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ground_set_limits() {
        assert!(GroundSet::new(0).is_err());
        assert!(GroundSet::new(65).is_err());
        assert_eq!(GroundSet::new(64).unwrap().full().bits(), u64::MAX);
        assert!(GroundSet::enumerable(25).is_err());
        assert_eq!(GroundSet::new(3).unwrap().full(), SubsetMask(0b111));
    }

    #[test]
    fn mask_algebra() {
        let a = SubsetMask::from_elements([1, 2]);
        let b = SubsetMask::from_elements([1, 3]);
        assert_eq!(a.intersection(b), SubsetMask::from_elements([1]));
        assert_eq!(a.union(b).len(), 3);
        assert_eq!(a.difference(b), SubsetMask::from_elements([2]));
        assert!(SubsetMask::EMPTY.is_subset_of(a));
        assert_eq!(a.elements().collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(format!("{}", SubsetMask::EMPTY), "{}");
        assert_eq!(format!("{}", b), "{1,3}");
    }

    #[test]
    fn k_subsets_count_matches_binomial() {
        for n in 0..=12u32 {
            for k in 0..=n + 1 {
                let got = KSubsets::new(n, k).count() as u128;
                assert_eq!(got, binomial(n as u64, k as u64), "n={n} k={k}");
                assert!(KSubsets::new(n, k).all(|s| s.len() == k));
            }
        }
    }

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(4, 4), 1);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(64, 32), 1_832_624_140_942_590_534);
    }
}
