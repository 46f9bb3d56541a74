//! Random-partition averaging: exact expectations over ordered partitions
//! of `[n]`, with full-enumeration cross-checks and a seeded Monte Carlo
//! companion.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::detect::{find_multicolor_sunflower, find_uniform_sunflower};
use crate::error::{domain, Error, Result};
use crate::family::{Family, FamilyTuple};
use crate::graphs::PetalGraph;
use crate::set::{binomial, GroundSet, KSubsets, SubsetMask};

/// Largest `n` for which ordered partitions are enumerated explicitly.
pub const ENUMERATION_LIMIT: u32 = 10;

/// Largest `n` for which the four-part expectation is cross-checked by
/// enumerating all `4^n` assignments.
pub const PQ_ENUMERATION_LIMIT: u32 = 8;

/// Number of independent Monte Carlo streams. Fixed so that results do not
/// depend on the worker count.
pub const MC_STREAMS: u64 = 16;

/// `p(n) = 4^n - 3*3^n + 3*2^n - 1`: ordered partitions of `[n]` into four
/// parts with the last three nonempty.
pub fn count_four_partitions(n: u32) -> BigInt {
    let p = |b: u32| BigInt::from(b).pow(n);
    p(4) - BigInt::from(3) * p(3) + BigInt::from(3) * p(2) - BigInt::from(1)
}

/// Counts the same partitions by enumerating all `4^n` assignments.
pub fn enumerate_four_partitions(n: u32) -> Result<u64> {
    if n > 12 {
        return domain(format!("enumeration limited to n <= 12, got {n}"));
    }
    let mut count = 0;
    for_each_four_partition(n, |_| count += 1);
    Ok(count)
}

/// A four-part ordered partition `X1 ∪ X2 ∪ X3 ∪ X4` of `[n]` with `X2`,
/// `X3`, `X4` nonempty.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FourPartSample {
    pub parts: [SubsetMask; 4],
}

impl FourPartSample {
    pub fn new(ground: GroundSet, parts: [SubsetMask; 4]) -> Result<Self> {
        let mut union = 0u64;
        for p in parts {
            if p.bits() & union != 0 {
                return domain("partition parts overlap");
            }
            union |= p.bits();
        }
        if union != ground.full().bits() {
            return domain("partition parts do not cover the ground set");
        }
        if parts[1..].iter().any(|p| p.is_empty()) {
            return domain("parts X2, X3, X4 must be nonempty");
        }
        Ok(FourPartSample { parts })
    }

    /// Candidate petal set `X1 ∪ X_{slot+2}` for `slot` in `0..3`.
    #[inline]
    pub fn petal_set(&self, slot: usize) -> SubsetMask {
        self.parts[0].union(self.parts[slot + 1])
    }
}

/// Visits every valid four-part partition of `[n]`.
fn for_each_four_partition(n: u32, mut f: impl FnMut(&[SubsetMask; 4])) {
    let total = 1u64 << (2 * n);
    for code in 0..total {
        let mut parts = [0u64; 4];
        for e in 0..n {
            parts[(code >> (2 * e) & 3) as usize] |= 1 << e;
        }
        if parts[1] != 0 && parts[2] != 0 && parts[3] != 0 {
            f(&parts.map(SubsetMask));
        }
    }
}

/// Part sizes `|X1| = n-(c+k(s-c))`, `|X2| = c`, `|X3..X_{k+2}| = s-c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UniformPartitionSpec {
    pub n: u32,
    pub s: u32,
    pub c: u32,
    pub k: u32,
}

impl UniformPartitionSpec {
    pub fn new(n: u32, s: u32, c: u32, k: u32) -> Result<Self> {
        if s == 0 || c >= s || k < 2 {
            return domain(format!("need s >= 1, c < s, k >= 2 (s={s} c={c} k={k})"));
        }
        if (n as u64) < c as u64 + k as u64 * (s - c) as u64 {
            return domain(format!("n={n} below c+k(s-c)"));
        }
        GroundSet::new(n)?;
        Ok(UniformPartitionSpec { n, s, c, k })
    }

    pub fn part_sizes(&self) -> Vec<u32> {
        let mut sizes = vec![self.n - (self.c + self.k * (self.s - self.c)), self.c];
        sizes.extend(std::iter::repeat_n(self.s - self.c, self.k as usize));
        sizes
    }

    /// Number of ordered partitions with these part sizes (multinomial).
    pub fn partition_count(&self) -> BigUint {
        let mut left = self.n as u64;
        let mut acc = BigUint::from(1u32);
        for size in self.part_sizes() {
            acc *= BigUint::from(binomial(left, size as u64));
            left -= size as u64;
        }
        acc
    }

    fn ground(&self) -> GroundSet {
        GroundSet::new(self.n).expect("validated")
    }
}

/// Subsets of `mask` with exactly `size` elements.
fn subsets_within(mask: u64, size: u32) -> impl Iterator<Item = u64> {
    let positions: Vec<u32> = SubsetMask(mask).elements().map(|e| e - 1).collect();
    KSubsets::new(positions.len() as u32, size).map(move |local| {
        SubsetMask(local.bits())
            .elements()
            .fold(0u64, |acc, idx| acc | 1u64 << positions[(idx - 1) as usize])
    })
}

/// Visits every ordered partition matching `spec`; `parts[0]` is `X1`.
fn for_each_uniform_partition(spec: &UniformPartitionSpec, mut f: impl FnMut(&[u64])) {
    let sizes = spec.part_sizes();
    let mut parts = vec![0u64; sizes.len()];
    fn rec(
        depth: usize,
        remaining: u64,
        sizes: &[u32],
        parts: &mut [u64],
        f: &mut dyn FnMut(&[u64]),
    ) {
        if depth == sizes.len() {
            f(parts);
            return;
        }
        for sub in subsets_within(remaining, sizes[depth]) {
            parts[depth] = sub;
            rec(depth + 1, remaining & !sub, sizes, parts, f);
        }
    }
    rec(0, spec.ground().full().bits(), &sizes, &mut parts, &mut f);
}

fn check_enumerable(n: u32) -> Result<()> {
    if n > ENUMERATION_LIMIT {
        return domain(format!(
            "partition enumeration limited to n <= {ENUMERATION_LIMIT}, got {n}"
        ));
    }
    Ok(())
}

/// Probability, over a uniform ordered partition matching `spec`, that
/// `X2 ∪ X_slot = a`. `slot` is 1-based in `3..=k+2`. Computed by full
/// enumeration.
pub fn membership_probability_check(
    spec: &UniformPartitionSpec,
    a: SubsetMask,
    slot: u32,
) -> Result<BigRational> {
    check_enumerable(spec.n)?;
    if a.len() != spec.s || !spec.ground().contains(a) {
        return domain(format!(
            "set {a} must be an {}-subset of [{}]",
            spec.s, spec.n
        ));
    }
    if slot < 3 || slot > spec.k + 2 {
        return domain(format!("slot {slot} outside 3..={}", spec.k + 2));
    }
    let idx = (slot - 1) as usize;
    let (mut hits, mut total) = (0u64, 0u64);
    for_each_uniform_partition(spec, |parts| {
        total += 1;
        if parts[1] | parts[idx] == a.bits() {
            hits += 1;
        }
    });
    Ok(BigRational::new(hits.into(), total.into()))
}

/// Ordered pairs `(B1, B2)` in `f x g` with `B1 \ B2`, `B2 \ B1` nonempty
/// and `B1 ∪ B2 ≠ [n]`.
pub fn good_pair_count(f: &Family, g: &Family) -> Result<u64> {
    if f.ground() != g.ground() {
        return domain("good_pair_count needs a shared ground set");
    }
    let full = f.ground().full().bits();
    let mut count = 0;
    for b1 in f.members() {
        for b2 in g.members() {
            let (x, y) = (b1.bits(), b2.bits());
            if x & !y != 0 && y & !x != 0 && x | y != full {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// A Monte Carlo estimate and its standard error.
#[derive(Debug, Clone, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
}

/// An exact expectation, optionally cross-checked by enumeration and
/// accompanied by a Monte Carlo estimate and the bound it is compared to.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpectationReport {
    pub exact: BigRational,
    /// Same expectation obtained by enumerating every partition, when small
    /// enough to do so.
    pub enumerated: Option<BigRational>,
    pub mc: Option<McEstimate>,
    /// Upper bound the expectation is asserted against.
    pub bound: BigRational,
    /// Whether the tuple meets the hypotheses under which the bound holds.
    pub bound_applies: bool,
}

impl ExpectationReport {
    pub fn within_bound(&self) -> bool {
        self.exact <= self.bound
    }

    pub fn exact_f64(&self) -> f64 {
        self.exact.to_f64().unwrap_or(f64::NAN)
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "schema": 1,
            "exact_value": ratio_string(&self.exact),
            "exact_approx": self.exact_f64(),
            "enumerated_value": self.enumerated.as_ref().map(ratio_string),
            "bound": ratio_string(&self.bound),
            "bound_applies": self.bound_applies,
            "within_bound": self.within_bound(),
        });
        if let Some(mc) = &self.mc {
            v["mc_estimate"] = json!(mc.estimate);
            v["mc_stderr"] = json!(mc.stderr);
            v["sample_count"] = json!(mc.samples);
            v["seed"] = json!(mc.seed);
        }
        v
    }
}

/// `"num/den"` rendering of an exact value.
pub fn ratio_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Expected number of edges of the petal graph built from a uniform ordered
/// partition, for a tuple of `s`-uniform families. The closed form is
/// `k * sum |A_i| / C(n,s)`; for `n <= 10` it is recomputed by enumerating
/// every partition. When the tuple has no `k`-petal sunflower of core size
/// `c`, the value must not exceed `(k-1)k`.
pub fn expected_edge_count_uniform(
    ft: &FamilyTuple,
    spec: &UniformPartitionSpec,
) -> Result<ExpectationReport> {
    let k = spec.k as usize;
    if ft.k() != k {
        return domain(format!(
            "tuple has {} families, partition spec expects {k}",
            ft.k()
        ));
    }
    if ft.ground().n() != spec.n {
        return domain("tuple and partition spec disagree on n");
    }
    if let Some(i) = ft.families().iter().position(|f| !f.is_uniform(spec.s)) {
        return domain(format!("family {} is not {}-uniform", i + 1, spec.s));
    }
    let c_ns = binomial(spec.n as u64, spec.s as u64);
    let exact = BigRational::new(
        BigInt::from(k as u128 * ft.total() as u128),
        BigInt::from(c_ns),
    );

    let enumerated = if spec.n <= ENUMERATION_LIMIT {
        let (mut edges, mut count) = (BigInt::zero(), BigInt::zero());
        for_each_uniform_partition(spec, |parts| {
            let mut e = 0u64;
            for fam in ft.families() {
                for slot in 2..parts.len() {
                    if fam.contains(SubsetMask(parts[1] | parts[slot])) {
                        e += 1;
                    }
                }
            }
            edges += e;
            count += 1;
        });
        let value = BigRational::new(edges, count);
        if value != exact {
            return Err(Error::Inconsistent(format!(
                "closed form {} vs enumeration {}",
                ratio_string(&exact),
                ratio_string(&value)
            )));
        }
        Some(value)
    } else {
        None
    };

    let bound = BigRational::from_integer(BigInt::from((k - 1) * k));
    let bound_applies = find_uniform_sunflower(ft, k, spec.c)?.is_none();
    let report = ExpectationReport {
        exact,
        enumerated,
        mc: None,
        bound,
        bound_applies,
    };
    if bound_applies && !report.within_bound() {
        return Err(Error::Inconsistent(format!(
            "sunflower-free tuple has expected edge count {} above (k-1)k",
            ratio_string(&report.exact)
        )));
    }
    Ok(report)
}

/// The 3x3 petal graph of `sample`: row `i` is adjacent to slot `j` iff
/// `X1 ∪ X_{j+2}` belongs to family `i`.
pub fn petal_graph(ft: &FamilyTuple, sample: &FourPartSample) -> Result<PetalGraph> {
    if ft.k() != 3 {
        return domain(format!("petal graphs need three families, got {}", ft.k()));
    }
    let mut rows = [0u16; 3];
    for (i, fam) in ft.families().iter().enumerate() {
        for slot in 0..3 {
            if fam.contains(sample.petal_set(slot)) {
                rows[i] |= 1 << slot;
            }
        }
    }
    PetalGraph::from_rows(&rows)
}

/// `(P, Q)` for one partition, evaluated from their indicator sums:
/// `P` sums `1/2 [Y1 ∈ B1, Y2 ∈ B2]` over ordered distinct family pairs and
/// ordered distinct slot pairs; `Q` sums `1/2 [Y1 ∈ B1, Y2 ∈ B2, Y2 ∈ B3]`
/// over ordered distinct family triples and ordered distinct slot pairs.
pub fn pq_statistic(ft: &FamilyTuple, sample: &FourPartSample) -> Result<(u32, u32)> {
    let g = petal_graph(ft, sample)?;
    let (mut p2, mut q2) = (0u32, 0u32);
    for b1 in 0..3 {
        for b2 in 0..3 {
            if b1 == b2 {
                continue;
            }
            for y1 in 0..3 {
                for y2 in 0..3 {
                    if y1 == y2 || !g.has_edge(b1, y1) || !g.has_edge(b2, y2) {
                        continue;
                    }
                    p2 += 1;
                    let b3 = 3 - b1 - b2;
                    if g.has_edge(b3, y2) {
                        q2 += 1;
                    }
                }
            }
        }
    }
    debug_assert!(p2 % 2 == 0 && q2 % 2 == 0);
    Ok((p2 / 2, q2 / 2))
}

fn check_three(ft: &FamilyTuple) -> Result<()> {
    if ft.k() != 3 {
        return domain(format!(
            "the P+Q expectation needs three families, got {}",
            ft.k()
        ));
    }
    Ok(())
}

/// Integer numerator `N` with `E(P+Q) = 3N / p(n)`:
/// `N = sum_{i != j} good(A_i, A_j) + 2 sum_i good(A_i, A_j ∩ A_l)`.
pub fn pq_numerator(ft: &FamilyTuple) -> Result<u64> {
    check_three(ft)?;
    let f = ft.families();
    let mut pairs = 0;
    for i in 0..3 {
        for j in 0..3 {
            if i != j {
                pairs += good_pair_count(&f[i], &f[j])?;
            }
        }
    }
    // Intersections are built once per unordered pair.
    let caps = [
        f[1].intersection(&f[2]),
        f[2].intersection(&f[0]),
        f[0].intersection(&f[1]),
    ];
    let mut triples = 0;
    for i in 0..3 {
        triples += good_pair_count(&f[i], &caps[i])?;
    }
    Ok(pairs + 2 * triples)
}

/// Whether the `E(P+Q) <= 6` bound applies: the tuple is sunflower-free and
/// no set lies in all three families.
pub fn pq_bound_applies(ft: &FamilyTuple) -> bool {
    ft.common_part().is_empty() && find_multicolor_sunflower(ft).is_none()
}

/// Exact `E(P+Q)` over a uniform four-part partition.
///
/// For `n <= 8` the value is recomputed by evaluating [`pq_statistic`] on
/// every partition. When [`pq_bound_applies`], the value must be at most 6.
pub fn exact_pq_expectation(ft: &FamilyTuple) -> Result<ExpectationReport> {
    check_three(ft)?;
    let n = ft.ground().n();
    let p = count_four_partitions(n);
    if p.is_zero() {
        return domain(format!(
            "no four-part partitions with three nonempty parts exist for n={n}"
        ));
    }
    let exact = BigRational::new(BigInt::from(3) * BigInt::from(pq_numerator(ft)?), p.clone());

    let enumerated = if n <= PQ_ENUMERATION_LIMIT {
        let mut sum = 0u64;
        let mut failure = None;
        for_each_four_partition(n, |parts| {
            let sample = FourPartSample { parts: *parts };
            match pq_statistic(ft, &sample) {
                Ok((pv, qv)) => sum += (pv + qv) as u64,
                Err(e) => failure = Some(e),
            }
        });
        if let Some(e) = failure {
            return Err(e);
        }
        let value = BigRational::new(BigInt::from(sum), p);
        if value != exact {
            return Err(Error::Inconsistent(format!(
                "closed form {} vs enumeration {}",
                ratio_string(&exact),
                ratio_string(&value)
            )));
        }
        Some(value)
    } else {
        None
    };

    let bound = BigRational::from_integer(BigInt::from(6));
    let report = ExpectationReport {
        exact,
        enumerated,
        mc: None,
        bound,
        bound_applies: pq_bound_applies(ft),
    };
    if report.bound_applies && !report.within_bound() {
        return Err(Error::Inconsistent(format!(
            "sunflower-free tuple with empty common part has E(P+Q) = {} > 6",
            ratio_string(&report.exact)
        )));
    }
    Ok(report)
}

/// Draws a uniform valid four-part partition by rejection from uniform
/// assignments of each element to one of four parts.
pub fn sample_four_partition<R: Rng>(ground: GroundSet, rng: &mut R) -> FourPartSample {
    loop {
        let mut parts = [0u64; 4];
        for e in 0..ground.n() {
            parts[rng.random_range(0..4usize)] |= 1 << e;
        }
        if parts[1] != 0 && parts[2] != 0 && parts[3] != 0 {
            return FourPartSample {
                parts: parts.map(SubsetMask),
            };
        }
    }
}

/// Monte Carlo estimate of `E(P+Q)`, single worker.
pub fn mc_pq_expectation(ft: &FamilyTuple, samples: u64, seed: u64) -> Result<ExpectationReport> {
    mc_pq_expectation_threaded(ft, samples, seed, 1)
}

/// Monte Carlo estimate of `E(P+Q)` over [`MC_STREAMS`] fixed streams; stream
/// `w` is seeded with `seed + w`. The worker count only affects scheduling.
pub fn mc_pq_expectation_threaded(
    ft: &FamilyTuple,
    samples: u64,
    seed: u64,
    threads: usize,
) -> Result<ExpectationReport> {
    check_three(ft)?;
    if samples == 0 {
        return Err(Error::Usage("sample count must be positive".into()));
    }
    let ground = ft.ground();
    if count_four_partitions(ground.n()).is_zero() {
        return domain(format!("no valid partitions for n={}", ground.n()));
    }
    let mut report = exact_pq_expectation(ft)?;

    let stream_len = |w: u64| samples / MC_STREAMS + u64::from(w < samples % MC_STREAMS);
    let run_stream = |w: u64| -> Result<(f64, f64)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(w));
        let (mut s1, mut s2) = (0.0, 0.0);
        for _ in 0..stream_len(w) {
            let sample = sample_four_partition(ground, &mut rng);
            let (pv, qv) = pq_statistic(ft, &sample)?;
            let x = (pv + qv) as f64;
            s1 += x;
            s2 += x * x;
        }
        Ok((s1, s2))
    };

    let threads = threads.clamp(1, MC_STREAMS as usize);
    let mut sums: Vec<Option<Result<(f64, f64)>>> = (0..MC_STREAMS).map(|_| None).collect();
    if threads == 1 {
        for (w, slot) in sums.iter_mut().enumerate() {
            *slot = Some(run_stream(w as u64));
        }
    } else {
        std::thread::scope(|scope| {
            let chunks: Vec<_> = sums.chunks_mut(MC_STREAMS as usize / threads + 1).collect();
            let mut base = 0u64;
            for chunk in chunks {
                let start = base;
                base += chunk.len() as u64;
                let run = &run_stream;
                scope.spawn(move || {
                    for (off, slot) in chunk.iter_mut().enumerate() {
                        *slot = Some(run(start + off as u64));
                    }
                });
            }
        });
    }
    // Reduce in stream order so the floating-point result is schedule-free.
    let (mut s1, mut s2) = (0.0, 0.0);
    for r in sums {
        let (a, b) = r.expect("every stream ran")?;
        s1 += a;
        s2 += b;
    }
    let nf = samples as f64;
    let mean = s1 / nf;
    let var = if samples > 1 {
        ((s2 - nf * mean * mean) / (nf - 1.0)).max(0.0)
    } else {
        0.0
    };
    report.mc = Some(McEstimate {
        estimate: mean,
        stderr: (var / nf).sqrt(),
        samples,
        seed,
    });
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{product_extremal, uniform_tight};

    fn g(n: u32) -> GroundSet {
        GroundSet::new(n).unwrap()
    }

    fn int(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    #[test]
    fn four_partition_counts() {
        assert_eq!(count_four_partitions(2), BigInt::from(0));
        assert_eq!(count_four_partitions(3), BigInt::from(6));
        assert_eq!(count_four_partitions(4), BigInt::from(60));
        for n in 1..=8 {
            assert_eq!(
                count_four_partitions(n),
                BigInt::from(enumerate_four_partitions(n).unwrap())
            );
        }
    }

    #[test]
    fn good_pairs_on_power_sets() {
        let p2 = Family::power_set(g(2)).unwrap();
        assert_eq!(good_pair_count(&p2, &p2).unwrap(), 0);
        let p3 = Family::power_set(g(3)).unwrap();
        assert_eq!(good_pair_count(&p3, &p3).unwrap(), 6);
        let e = Family::new(g(3), [SubsetMask::EMPTY]).unwrap();
        assert_eq!(good_pair_count(&e, &e).unwrap(), 0);
    }

    #[test]
    fn spec_sizes_and_count() {
        let spec = UniformPartitionSpec::new(5, 2, 1, 3).unwrap();
        assert_eq!(spec.part_sizes(), vec![1, 1, 1, 1, 1]);
        assert_eq!(spec.partition_count(), BigUint::from(120u32));
        assert!(UniformPartitionSpec::new(3, 2, 1, 3).is_err());
        assert!(UniformPartitionSpec::new(5, 2, 2, 3).is_err());
    }

    #[test]
    fn membership_probability_examples() {
        let spec = UniformPartitionSpec::new(5, 2, 1, 3).unwrap();
        let a = SubsetMask::from_elements([1, 2]);
        assert_eq!(
            membership_probability_check(&spec, a, 3).unwrap(),
            BigRational::new(1.into(), 10.into())
        );
        let spec = UniformPartitionSpec::new(3, 1, 0, 3).unwrap();
        assert_eq!(
            membership_probability_check(&spec, SubsetMask::from_elements([2]), 4).unwrap(),
            BigRational::new(1.into(), 3.into())
        );
        assert!(membership_probability_check(&spec, SubsetMask::from_elements([1, 2]), 3).is_err());
        assert!(membership_probability_check(&spec, SubsetMask::from_elements([1]), 2).is_err());
        assert!(membership_probability_check(&spec, SubsetMask::from_elements([1]), 6).is_err());
    }

    #[test]
    fn edge_expectation_examples() {
        let tuple = uniform_tight(4, 2, 3).unwrap().tuple.unwrap();
        let spec = UniformPartitionSpec::new(4, 2, 1, 3).unwrap();
        let r = expected_edge_count_uniform(&tuple, &spec).unwrap();
        assert_eq!(r.exact, int(6));
        assert_eq!(r.enumerated, Some(int(6)));
        assert!(r.bound_applies);

        let empty = FamilyTuple::new(vec![Family::empty(g(4)); 3]).unwrap();
        assert_eq!(
            expected_edge_count_uniform(&empty, &spec).unwrap().exact,
            int(0)
        );

        let single = FamilyTuple::new(vec![
            Family::new(g(4), [SubsetMask::from_elements([1, 3])]).unwrap(),
            Family::empty(g(4)),
            Family::empty(g(4)),
        ])
        .unwrap();
        let r = expected_edge_count_uniform(&single, &spec).unwrap();
        assert_eq!(r.exact, BigRational::new(3.into(), 6.into()));
        assert_eq!(r.enumerated.unwrap(), r.exact);

        let mixed = FamilyTuple::new(vec![
            Family::power_set(g(4)).unwrap(),
            Family::empty(g(4)),
            Family::empty(g(4)),
        ])
        .unwrap();
        assert!(expected_edge_count_uniform(&mixed, &spec).is_err());
    }

    #[test]
    fn pq_statistic_on_templates() {
        let ground = g(3);
        let sample = FourPartSample::new(
            ground,
            [
                SubsetMask::EMPTY,
                SubsetMask(1),
                SubsetMask(2),
                SubsetMask(4),
            ],
        )
        .unwrap();
        let empty = FamilyTuple::new(vec![Family::empty(ground); 3]).unwrap();
        assert_eq!(pq_statistic(&empty, &sample).unwrap(), (0, 0));
        // Families 1 and 2 contain every petal set: the graph is K_{2,3}.
        let all = Family::new(ground, [SubsetMask(1), SubsetMask(2), SubsetMask(4)]).unwrap();
        let k23 = FamilyTuple::new(vec![all.clone(), all, Family::empty(ground)]).unwrap();
        assert_eq!(pq_statistic(&k23, &sample).unwrap(), (6, 0));
    }

    #[test]
    fn exact_pq_examples() {
        let empty = FamilyTuple::new(vec![Family::empty(g(4)); 3]).unwrap();
        assert_eq!(exact_pq_expectation(&empty).unwrap().exact, int(0));
        let n2 = FamilyTuple::new(vec![Family::empty(g(2)); 3]).unwrap();
        assert!(matches!(exact_pq_expectation(&n2), Err(Error::Domain(_))));

        let t = product_extremal(4, 3).unwrap().tuple.unwrap();
        let common = t.common_part();
        let trimmed = FamilyTuple::new(
            t.families()
                .iter()
                .map(|f| {
                    Family::new(
                        f.ground(),
                        f.members().iter().copied().filter(|s| !common.contains(*s)),
                    )
                    .unwrap()
                })
                .collect(),
        )
        .unwrap();
        let r = exact_pq_expectation(&trimmed).unwrap();
        assert!(r.bound_applies);
        assert!(r.within_bound());
        assert_eq!(r.enumerated.as_ref(), Some(&r.exact));
    }

    #[test]
    fn mc_is_deterministic_and_thread_independent() {
        let t = product_extremal(4, 3).unwrap().tuple.unwrap();
        let a = mc_pq_expectation(&t, 3000, 7).unwrap();
        let b = mc_pq_expectation(&t, 3000, 7).unwrap();
        let c = mc_pq_expectation_threaded(&t, 3000, 7, 4).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.mc, c.mc);
        let mc = a.mc.clone().unwrap();
        assert!(
            (mc.estimate - a.exact_f64()).abs() <= 4.0 * mc.stderr,
            "{mc:?} vs {}",
            a.exact_f64()
        );
        assert!(mc_pq_expectation(&t, 0, 7).is_err());
    }

    #[test]
    fn pq_matches_graph_stats_pointwise() {
        use crate::graphs::graph_stats;
        use rand::seq::IndexedRandom;
        let ground = g(4);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let all: Vec<SubsetMask> = ground.subsets().collect();
        for _ in 0..200 {
            let fams = (0..3)
                .map(|_| {
                    let size = rng.random_range(0..=all.len());
                    Family::new(ground, all.choose_multiple(&mut rng, size).copied()).unwrap()
                })
                .collect();
            let ft = FamilyTuple::new(fams).unwrap();
            let sample = sample_four_partition(ground, &mut rng);
            let stats = graph_stats(&petal_graph(&ft, &sample).unwrap()).unwrap();
            assert_eq!(pq_statistic(&ft, &sample).unwrap(), (stats.m2, stats.t));
        }
    }

    #[test]
    fn mc_zero_tuple() {
        let empty = FamilyTuple::new(vec![Family::empty(g(4)); 3]).unwrap();
        let mc = mc_pq_expectation(&empty, 100, 1).unwrap().mc.unwrap();
        assert_eq!((mc.estimate, mc.stderr), (0.0, 0.0));
    }
}
