//! Exhaustive maximum-sum oracles over sunflower-free family tuples.
//!
//! Both searches fix every family but the last and complete the last one
//! with every set that does not close a sunflower. An optimal tuple is
//! inclusion-maximal, so its last family is exactly that completion, and the
//! search space shrinks from `(2^{2^n})^k` to `(2^{2^n})^{k-1}` choices.

use std::cmp::Reverse;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;

use serde_json::{json, Value};

use crate::bounds::layer_cap;
use crate::constructions::sum_extremal;
use crate::detect::{
    find_multicolor_sunflower, find_uniform_sunflower, is_multicolor_sunflower, next_combination,
};
use crate::error::{domain, Error, Result};
use crate::family::{Family, FamilyTuple};
use crate::set::{binomial, GroundSet, SubsetMask};

pub const DEFAULT_BUDGET: u64 = 1_000_000_000;
const CHECKPOINT_EVERY: u64 = 10_000_000;

/// Largest ground set for the full-family search (`2^n` sets must fit in a
/// 64-bit index mask).
pub const MAX_SEARCH_N: u32 = 6;

#[derive(Debug, Clone)]
pub struct SearchOptions {
    /// Node limit; the search stops unproven once it is exceeded.
    pub budget: u64,
    pub threads: usize,
    /// Prune with the bound-based estimate of the best completion.
    pub bound_pruning: bool,
    /// Only visit family prefixes in nondecreasing order.
    pub symmetry: bool,
    /// Additionally cap each layer by the uniform-family bound. Off by
    /// default: those caps sum to the value the search is meant to confirm.
    pub layer_bounds: bool,
    /// Start from the known construction instead of from nothing. `None`
    /// seeds only when `n >= 4`.
    pub seed_with_construction: Option<bool>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            budget: DEFAULT_BUDGET,
            threads: 1,
            bound_pruning: true,
            symmetry: true,
            layer_bounds: false,
            seed_with_construction: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub best_total: u64,
    pub witness_tuple: FamilyTuple,
    pub nodes_explored: u64,
    pub proven_optimal: bool,
}

impl SearchResult {
    pub fn to_json(&self) -> Value {
        json!({
            "schema": 1,
            "best_total": self.best_total,
            "sizes": self.witness_tuple.sizes(),
            "nodes_explored": self.nodes_explored,
            "proven_optimal": self.proven_optimal,
            "witness": self.witness_tuple.to_file_string(),
        })
    }
}

/// Families as index masks, ordered by size (descending) then by member
/// list. The least key among optima is reported.
type CanonicalKey = Vec<(Reverse<u32>, Vec<u32>)>;

fn canonical_key(families: &[u64]) -> CanonicalKey {
    let mut key: CanonicalKey = families
        .iter()
        .map(|&m| {
            let members: Vec<u32> = SubsetMask(m).elements().map(|e| e - 1).collect();
            (Reverse(m.count_ones()), members)
        })
        .collect();
    key.sort();
    key
}

fn key_to_masks(key: &CanonicalKey) -> Vec<u64> {
    key.iter()
        .map(|(_, members)| members.iter().fold(0u64, |m, &i| m | 1 << i))
        .collect()
}

struct Incumbent {
    value: u64,
    key: Option<CanonicalKey>,
}

struct Shared {
    best: AtomicU64,
    nodes: AtomicU64,
    exhausted: AtomicBool,
    incumbent: Mutex<Incumbent>,
    budget: u64,
}

impl Shared {
    fn new(budget: u64) -> Self {
        Shared {
            best: AtomicU64::new(0),
            nodes: AtomicU64::new(0),
            exhausted: AtomicBool::new(false),
            incumbent: Mutex::new(Incumbent {
                value: 0,
                key: None,
            }),
            budget,
        }
    }

    /// Records a feasible tuple; ties keep the lexicographically least key.
    fn offer(&self, value: u64, families: &[u64]) {
        let mut inc = self.incumbent.lock().unwrap();
        if value < inc.value {
            return;
        }
        let key = canonical_key(families);
        if value > inc.value || inc.key.as_ref().is_none_or(|k| key < *k) {
            inc.value = value;
            inc.key = Some(key);
            self.best.fetch_max(value, Ordering::Relaxed);
        }
    }

    /// Adds locally counted nodes; returns false once the budget is spent.
    fn charge(&self, local: u64) -> bool {
        let before = self.nodes.fetch_add(local, Ordering::Relaxed);
        let after = before + local;
        if before / CHECKPOINT_EVERY != after / CHECKPOINT_EVERY {
            log::info!(
                "search checkpoint: {after} nodes, incumbent {}",
                self.best.load(Ordering::Relaxed)
            );
        }
        if after > self.budget {
            self.exhausted.store(true, Ordering::Relaxed);
        }
        !self.exhausted.load(Ordering::Relaxed)
    }
}

/// Maximum of `sum |A_i|` over sunflower-free triples of families in `2^[n]`.
///
/// Only `k = 3` is supported. The first two families are decided one set at
/// a time; the third is the completion. With `n <= 3` every leaf is visited
/// and ties resolve to the least canonical tuple; above that the search
/// prunes on the incumbent and reports the first optimum it finds.
pub fn exhaustive_max_sum(n: u32, k: u32, opts: &SearchOptions) -> Result<SearchResult> {
    if k != 3 {
        return domain(format!("exhaustive_max_sum supports k = 3 only, got {k}"));
    }
    if n == 0 || n > MAX_SEARCH_N {
        return domain(format!(
            "exhaustive_max_sum needs 1 <= n <= {MAX_SEARCH_N}, got {n}"
        ));
    }
    let ground = GroundSet::new(n)?;
    let sets = 1usize << n;
    let full_idx: u64 = if sets == 64 {
        u64::MAX
    } else {
        (1u64 << sets) - 1
    };

    // completes[a][b]: sets x with (a, b, x) a multicolor sunflower.
    let mut completes = vec![0u64; sets * sets];
    for a in 0..sets {
        for b in 0..sets {
            let mut m = 0u64;
            for x in 0..sets {
                let trio = [
                    SubsetMask(a as u64),
                    SubsetMask(b as u64),
                    SubsetMask(x as u64),
                ];
                if is_multicolor_sunflower(&trio)? {
                    m |= 1 << x;
                }
            }
            completes[a * sets + b] = m;
        }
    }

    let layer_masks: Vec<u64> = (0..=n)
        .map(|s| {
            (0..sets)
                .filter(|&x| (x as u64).count_ones() == s)
                .fold(0u64, |m, x| m | 1 << x)
        })
        .collect();
    let layer_caps: Option<Vec<u64>> = if opts.layer_bounds && n >= 3 {
        Some(
            (0..=n)
                .map(|s| layer_cap(n, 3, s).map(|c| c as u64))
                .collect::<Result<_>>()?,
        )
    } else {
        None
    };

    let collect_ties = n <= 3;
    let shared = Shared::new(opts.budget);
    if opts.seed_with_construction.unwrap_or(n >= 4) && n >= 3 {
        let seed = sum_extremal(n, 3)?.tuple.expect("small n materializes");
        let masks: Vec<u64> = seed
            .families()
            .iter()
            .map(|f| f.members().iter().fold(0u64, |m, s| m | 1 << s.bits()))
            .collect();
        shared.offer(seed.total() as u64, &masks);
    }

    let ctx = SumCtx {
        sets,
        full_idx,
        completes: &completes,
        layer_masks: &layer_masks,
        layer_caps: layer_caps.as_deref(),
        opts,
        collect_ties,
        shared: &shared,
    };

    // Split the tree after a few decisions for the worker pool.
    let split_depth = if opts.threads > 1 { 3.min(sets) } else { 0 };
    let mut tasks = Vec::new();
    ctx.collect_tasks(SumState::root(), split_depth, &mut tasks);
    let next = AtomicU64::new(0);
    std::thread::scope(|scope| {
        for _ in 0..opts.threads.max(1) {
            scope.spawn(|| {
                let mut local = 0u64;
                loop {
                    let i = next.fetch_add(1, Ordering::Relaxed) as usize;
                    if i >= tasks.len() || shared.exhausted.load(Ordering::Relaxed) {
                        break;
                    }
                    ctx.dfs(tasks[i], &mut local);
                }
                shared.charge(local);
            });
        }
    });

    let proven = !shared.exhausted.load(Ordering::Relaxed);
    let inc = shared.incumbent.into_inner().unwrap();
    let masks = inc
        .key
        .as_ref()
        .map(key_to_masks)
        .unwrap_or_else(|| vec![0; 3]);
    let witness = FamilyTuple::new(
        masks
            .iter()
            .map(|&m| Family::from_index_bits(ground, m & full_idx))
            .collect::<Result<_>>()?,
    )?;
    if let Some(w) = find_multicolor_sunflower(&witness) {
        return Err(Error::Inconsistent(format!(
            "search witness contains sunflower {:?}",
            w.sets
        )));
    }
    Ok(SearchResult {
        best_total: inc.value,
        witness_tuple: witness,
        nodes_explored: shared.nodes.load(Ordering::Relaxed),
        proven_optimal: proven,
    })
}

#[derive(Clone, Copy)]
struct SumState {
    next: usize,
    f1: u64,
    f2: u64,
    forbidden: u64,
    /// No set decided so far separates the two families.
    tied: bool,
}

impl SumState {
    fn root() -> Self {
        SumState {
            next: 0,
            f1: 0,
            f2: 0,
            forbidden: 0,
            tied: true,
        }
    }
}

struct SumCtx<'a> {
    sets: usize,
    full_idx: u64,
    completes: &'a [u64],
    layer_masks: &'a [u64],
    layer_caps: Option<&'a [u64]>,
    opts: &'a SearchOptions,
    collect_ties: bool,
    shared: &'a Shared,
}

impl SumCtx<'_> {
    fn add_first(&self, st: &mut SumState, x: usize) {
        let mut b = st.f2;
        while b != 0 {
            let y = b.trailing_zeros() as usize;
            b &= b - 1;
            st.forbidden |= self.completes[x * self.sets + y];
        }
        st.f1 |= 1 << x;
    }

    fn add_second(&self, st: &mut SumState, x: usize) {
        let mut a = st.f1;
        while a != 0 {
            let y = a.trailing_zeros() as usize;
            a &= a - 1;
            st.forbidden |= self.completes[y * self.sets + x];
        }
        st.f2 |= 1 << x;
    }

    /// Children of `st` in search order: both, first only, second only, neither.
    fn children(&self, st: &SumState) -> impl Iterator<Item = SumState> + '_ {
        let st = *st;
        let x = st.next;
        (0..4u8).filter_map(move |choice| {
            let (in1, in2) = (choice & 2 == 0, choice & 1 == 0);
            // With the families tied so far, the first must win the first split.
            if self.opts.symmetry && st.tied && in2 && !in1 {
                return None;
            }
            let mut c = st;
            if in1 {
                self.add_first(&mut c, x);
            }
            if in2 {
                self.add_second(&mut c, x);
            }
            c.tied = st.tied && in1 == in2;
            c.next = x + 1;
            Some(c)
        })
    }

    fn upper_bound(&self, st: &SumState) -> u64 {
        let decided = if st.next >= 64 {
            u64::MAX
        } else {
            (1u64 << st.next) - 1
        };
        let undecided = self.full_idx & !decided;
        let allowed = self.full_idx & !st.forbidden;
        let plain = (st.f1.count_ones()
            + st.f2.count_ones()
            + 2 * undecided.count_ones()
            + allowed.count_ones()) as u64;
        match self.layer_caps {
            None => plain,
            Some(caps) => {
                let layered: u64 = self
                    .layer_masks
                    .iter()
                    .zip(caps)
                    .map(|(&l, &cap)| {
                        let here = (st.f1 & l).count_ones()
                            + (st.f2 & l).count_ones()
                            + 2 * (undecided & l).count_ones()
                            + (allowed & l).count_ones();
                        (here as u64).min(cap)
                    })
                    .sum();
                plain.min(layered)
            }
        }
    }

    fn collect_tasks(&self, st: SumState, depth: usize, out: &mut Vec<SumState>) {
        if depth == 0 || st.next == self.sets {
            out.push(st);
            return;
        }
        for c in self.children(&st) {
            self.collect_tasks(c, depth - 1, out);
        }
    }

    fn dfs(&self, st: SumState, local: &mut u64) {
        *local += 1;
        if *local >= 4096 {
            let ok = self.shared.charge(*local);
            *local = 0;
            if !ok {
                return;
            }
        }
        if self.opts.bound_pruning {
            let ub = self.upper_bound(&st);
            let best = self.shared.best.load(Ordering::Relaxed);
            if ub < best || (ub == best && !self.collect_ties && best > 0) {
                return;
            }
        }
        if st.next == self.sets {
            let third = self.full_idx & !st.forbidden;
            let value = (st.f1.count_ones() + st.f2.count_ones() + third.count_ones()) as u64;
            let best = self.shared.best.load(Ordering::Relaxed);
            if value > best || (value == best && (self.collect_ties || best == 0)) {
                self.shared.offer(value, &[st.f1, st.f2, third]);
            }
            return;
        }
        for c in self.children(&st) {
            self.dfs(c, local);
            if self.shared.exhausted.load(Ordering::Relaxed) {
                return;
            }
        }
    }
}

/// Maximum of `sum |A_i|` over `k`-tuples of `s`-uniform families on `[n]`
/// with no `t`-petal multicolor sunflower of core size `c` drawn from `t`
/// distinct families.
pub fn exhaustive_max_sum_uniform(
    n: u32,
    s: u32,
    c: u32,
    t: u32,
    k: u32,
    opts: &SearchOptions,
) -> Result<SearchResult> {
    if s == 0 || c >= s || s > n {
        return domain(format!("need 0 <= c < s <= n (n={n} s={s} c={c})"));
    }
    if !(1..=k).contains(&t) || !(2..=8).contains(&k) {
        return domain(format!("need 1 <= t <= k and 2 <= k <= 8 (t={t} k={k})"));
    }
    let ground = GroundSet::new(n)?;
    let count = binomial(n as u64, s as u64);
    if count > 20 {
        return domain(format!(
            "C(n,s) = {count} sets is beyond exhaustive reach (limit 20)"
        ));
    }
    let sets: Vec<SubsetMask> = ground.subsets_of_size(s).collect();
    let m = sets.len();

    // Blocks: index sets of t members forming a sunflower with core size c.
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    if t >= 2 {
        let mut comb: Vec<usize> = (0..t as usize).collect();
        if t as usize <= m {
            loop {
                let members: Vec<SubsetMask> = comb.iter().map(|&i| sets[i]).collect();
                let core = members[0].intersection(members[1]);
                if core.len() == c && is_multicolor_sunflower(&members)? {
                    blocks.push(comb.clone());
                }
                if !next_combination(&mut comb, m) {
                    break;
                }
            }
        }
    }

    let shared = Shared::new(opts.budget);
    let mut ctx = UniformCtx {
        m,
        k: k as usize,
        blocks: &blocks,
        opts,
        shared: &shared,
        local: 0,
        chosen: Vec::with_capacity(k as usize),
    };
    ctx.dfs(0);
    if ctx.local > 0 {
        shared.charge(ctx.local);
    }

    let proven = !shared.exhausted.load(Ordering::Relaxed);
    let inc = shared.incumbent.into_inner().unwrap();
    let masks = inc
        .key
        .as_ref()
        .map(key_to_masks)
        .unwrap_or_else(|| vec![0; k as usize]);
    let witness = FamilyTuple::new(
        masks
            .iter()
            .map(|&mask| {
                Family::new(
                    ground,
                    (0..m).filter(|&i| mask >> i & 1 == 1).map(|i| sets[i]),
                )
            })
            .collect::<Result<_>>()?,
    )?;
    if t >= 2 {
        if let Some(w) = find_uniform_sunflower(&witness, t as usize, c)? {
            return Err(Error::Inconsistent(format!(
                "search witness contains sunflower {:?}",
                w.sets
            )));
        }
    }
    Ok(SearchResult {
        best_total: inc.value,
        witness_tuple: witness,
        nodes_explored: shared.nodes.load(Ordering::Relaxed),
        proven_optimal: proven,
    })
}

struct UniformCtx<'a> {
    m: usize,
    k: usize,
    blocks: &'a [Vec<usize>],
    opts: &'a SearchOptions,
    shared: &'a Shared,
    local: u64,
    chosen: Vec<u64>,
}

/// Whether the sets `items` can be drawn from distinct families of `fams`,
/// each set from a family containing it.
fn assignable(items: &[usize], fams: &[u64], used: u32) -> bool {
    let Some((&first, rest)) = items.split_first() else {
        return true;
    };
    (0..fams.len()).any(|f| {
        used >> f & 1 == 0 && fams[f] >> first & 1 == 1 && assignable(rest, fams, used | 1 << f)
    })
}

impl UniformCtx<'_> {
    fn dfs(&mut self, depth: usize) {
        self.local += 1;
        if self.local >= 4096 {
            let ok = self.shared.charge(self.local);
            self.local = 0;
            if !ok {
                return;
            }
        }
        let current: u64 = self.chosen.iter().map(|f| f.count_ones() as u64).sum();
        if depth == self.k - 1 {
            let mut forbidden = 0u64;
            for block in self.blocks {
                for (pos, &x) in block.iter().enumerate() {
                    if forbidden >> x & 1 == 1 {
                        continue;
                    }
                    let rest: Vec<usize> = block
                        .iter()
                        .enumerate()
                        .filter(|&(p, _)| p != pos)
                        .map(|(_, &y)| y)
                        .collect();
                    if assignable(&rest, &self.chosen, 0) {
                        forbidden |= 1 << x;
                    }
                }
            }
            let all = if self.m == 64 {
                u64::MAX
            } else {
                (1u64 << self.m) - 1
            };
            let last = all & !forbidden;
            let value = current + last.count_ones() as u64;
            let mut fams = self.chosen.clone();
            fams.push(last);
            self.shared.offer(value, &fams);
            return;
        }
        if self.opts.bound_pruning {
            let ub = current + ((self.k - depth) * self.m) as u64;
            if ub < self.shared.best.load(Ordering::Relaxed) {
                return;
            }
        }
        let start = if self.opts.symmetry {
            self.chosen.last().copied().unwrap_or(0)
        } else {
            0
        };
        let end = 1u64 << self.m;
        for mask in start..end {
            self.chosen.push(mask);
            // The prefix was free; only blocks touching the new family matter.
            let free = self.blocks.iter().all(|b| !assignable(b, &self.chosen, 0));
            if free {
                self.dfs(depth + 1);
            }
            self.chosen.pop();
            if self.shared.exhausted.load(Ordering::Relaxed) {
                return;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{s_formula, uniform_bound};
    use num_traits::ToPrimitive;

    #[test]
    fn sum_search_n3() {
        let r = exhaustive_max_sum(3, 3, &SearchOptions::default()).unwrap();
        assert_eq!(r.best_total as u128, s_formula(3, 3).unwrap());
        assert!(r.proven_optimal);
        // Two full families and one of size five.
        assert_eq!(r.witness_tuple.sizes(), vec![8, 8, 5]);
    }

    #[test]
    fn sum_search_deterministic_and_thread_independent() {
        let a = exhaustive_max_sum(3, 3, &SearchOptions::default()).unwrap();
        let b = exhaustive_max_sum(
            3,
            3,
            &SearchOptions {
                threads: 4,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(a.best_total, b.best_total);
        assert_eq!(a.witness_tuple, b.witness_tuple);
    }

    #[test]
    fn sum_search_small_ground_sets() {
        // n = 1: sets ∅ and {1}; no two distinct nonempty petals exist.
        let r = exhaustive_max_sum(1, 3, &SearchOptions::default()).unwrap();
        assert_eq!(r.best_total, 6);
        let r = exhaustive_max_sum(2, 3, &SearchOptions::default()).unwrap();
        assert!(r.proven_optimal);
        // Every triple of families on [2], judged by the detector.
        let ground = GroundSet::new(2).unwrap();
        let fams: Vec<Family> = (0..16)
            .map(|m| Family::from_index_bits(ground, m).unwrap())
            .collect();
        let mut best = 0;
        for a in &fams {
            for b in &fams {
                for c in &fams {
                    let ft = FamilyTuple::new(vec![a.clone(), b.clone(), c.clone()]).unwrap();
                    if find_multicolor_sunflower(&ft).is_none() {
                        best = best.max(ft.total() as u64);
                    }
                }
            }
        }
        assert_eq!(r.best_total, best);
    }

    #[test]
    fn sum_search_n4_with_and_without_layer_caps() {
        for layer_bounds in [false, true] {
            let r = exhaustive_max_sum(
                4,
                3,
                &SearchOptions {
                    layer_bounds,
                    ..Default::default()
                },
            )
            .unwrap();
            assert_eq!(r.best_total, 38);
            assert!(r.proven_optimal);
        }
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let opts = SearchOptions {
            budget: 10_000,
            ..Default::default()
        };
        let r = exhaustive_max_sum(5, 3, &opts).unwrap();
        assert!(!r.proven_optimal);
        assert!(r.best_total >= 71);
    }

    #[test]
    fn sum_search_domain() {
        assert!(exhaustive_max_sum(3, 4, &SearchOptions::default()).is_err());
        assert!(exhaustive_max_sum(7, 3, &SearchOptions::default()).is_err());
    }

    fn uniform(n: u32, s: u32, c: u32, t: u32, k: u32) -> SearchResult {
        exhaustive_max_sum_uniform(n, s, c, t, k, &SearchOptions::default()).unwrap()
    }

    #[test]
    fn uniform_search_matches_bound() {
        for &(n, s, c, t, k, want) in &[
            (3, 1, 0, 3, 3, 6u64),
            (4, 2, 1, 3, 3, 12),
            (4, 2, 0, 2, 3, 9),
        ] {
            let r = uniform(n, s, c, t, k);
            assert_eq!(r.best_total, want, "({n},{s},{c},{t},{k})");
            assert!(r.proven_optimal);
            let b = uniform_bound(n, s, c, t, k).unwrap();
            assert_eq!(b.to_u64(), Some(want));
        }
    }

    #[test]
    fn pruning_does_not_change_the_optimum() {
        let plain = SearchOptions {
            bound_pruning: false,
            symmetry: false,
            ..Default::default()
        };
        for &(n, s, c, t, k) in &[(3, 1, 0, 3, 3), (4, 2, 0, 2, 3)] {
            let pruned = uniform(n, s, c, t, k);
            let full = exhaustive_max_sum_uniform(n, s, c, t, k, &plain).unwrap();
            assert_eq!(pruned.best_total, full.best_total);
            assert_eq!(pruned.witness_tuple, full.witness_tuple);
            assert!(full.nodes_explored >= pruned.nodes_explored);
        }
    }

    #[test]
    fn uniform_single_petal_is_unconstrained() {
        assert_eq!(uniform(3, 1, 0, 1, 3).best_total, 9);
    }
}
