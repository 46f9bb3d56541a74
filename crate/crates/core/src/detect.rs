//! Multicolor sunflower detection.
//!
//! A multicolor sunflower takes one set from each of several families so
//! that all pairwise intersections coincide (the core) and every set strictly
//! contains the core.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::FamilyTuple;
use crate::set::SubsetMask;

/// One set per participating family plus their common core.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SunflowerWitness {
    pub core: SubsetMask,
    /// Member sets, ordered by family index.
    pub sets: Vec<SubsetMask>,
    /// Family index each set was drawn from, strictly increasing.
    pub colors: Vec<usize>,
}

impl SunflowerWitness {
    /// Re-checks the witness against `ft` from scratch.
    pub fn verify(&self, ft: &FamilyTuple) -> bool {
        if self.sets.len() != self.colors.len() || self.sets.len() < 2 {
            return false;
        }
        if self.colors.windows(2).any(|w| w[0] >= w[1]) || self.colors.iter().any(|&c| c >= ft.k())
        {
            return false;
        }
        let drawn = self
            .sets
            .iter()
            .zip(&self.colors)
            .all(|(s, &c)| ft.family(c).contains(*s));
        drawn
            && is_multicolor_sunflower(&self.sets).unwrap_or(false)
            && pairwise_core(&self.sets).ok().flatten() == Some(self.core)
    }

    pub fn core_size(&self) -> u32 {
        self.core.len()
    }
}

/// The common pairwise intersection of `sets`, if every pair meets in the
/// same set.
pub fn pairwise_core(sets: &[SubsetMask]) -> Result<Option<SubsetMask>> {
    if sets.len() < 2 {
        return Err(Error::Usage("pairwise_core needs at least two sets".into()));
    }
    let core = sets[0].intersection(sets[1]);
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            if sets[i].intersection(sets[j]) != core {
                return Ok(None);
            }
        }
    }
    Ok(Some(core))
}

/// True iff `sets` share a common pairwise core that each set strictly
/// contains.
pub fn is_multicolor_sunflower(sets: &[SubsetMask]) -> Result<bool> {
    Ok(match pairwise_core(sets)? {
        Some(core) => sets.iter().all(|&s| s != core),
        None => false,
    })
}

/// Searches for a multicolor sunflower taking one set from every family.
///
/// `None` certifies the tuple sunflower-free.
pub fn find_multicolor_sunflower(ft: &FamilyTuple) -> Option<SunflowerWitness> {
    let colors: Vec<usize> = (0..ft.k()).collect();
    search_colors(ft, &colors, None)
}

/// Searches for a `t`-petal sunflower with core size `c` whose sets come from
/// `t` distinct families of the tuple.
///
/// Sunflowers with fewer than two petals are not recognised, so `t < 2`
/// always yields `None`.
pub fn find_uniform_sunflower(
    ft: &FamilyTuple,
    t: usize,
    c: u32,
) -> Result<Option<SunflowerWitness>> {
    if t == 0 || t > ft.k() {
        return Err(Error::Domain(format!(
            "petal count t={t} must lie in 1..={}",
            ft.k()
        )));
    }
    if t < 2 {
        return Ok(None);
    }
    let mut colors: Vec<usize> = (0..t).collect();
    loop {
        if let Some(w) = search_colors(ft, &colors, Some(c)) {
            return Ok(Some(w));
        }
        if !next_combination(&mut colors, ft.k()) {
            return Ok(None);
        }
    }
}

/// Advances `comb` to the next increasing `len`-combination of `0..n`.
pub(crate) fn next_combination(comb: &mut [usize], n: usize) -> bool {
    let t = comb.len();
    let mut i = t;
    while i > 0 {
        i -= 1;
        if comb[i] < n - t + i {
            comb[i] += 1;
            for j in i + 1..t {
                comb[j] = comb[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

struct Search {
    /// Candidate members per search level, empty set removed.
    levels: Vec<Vec<SubsetMask>>,
    /// Family index of each level.
    order: Vec<usize>,
    full: SubsetMask,
    core_size: Option<u32>,
    chosen: Vec<SubsetMask>,
}

fn search_colors(
    ft: &FamilyTuple,
    colors: &[usize],
    core_size: Option<u32>,
) -> Option<SunflowerWitness> {
    let min_len = core_size.map_or(1, |c| c + 1);
    // Smallest families first keeps the branching factor low near the root.
    let mut order = colors.to_vec();
    order.sort_by_key(|&c| (ft.family(c).len(), c));
    let levels: Vec<Vec<SubsetMask>> = order
        .iter()
        .map(|&c| {
            ft.family(c)
                .members()
                .iter()
                .copied()
                .filter(|s| s.len() >= min_len)
                .collect()
        })
        .collect();
    if levels.iter().any(Vec::is_empty) {
        return None;
    }
    let mut search = Search {
        levels,
        order,
        full: ft.ground().full(),
        core_size,
        chosen: Vec::with_capacity(colors.len()),
    };
    if !search.descend(0, SubsetMask::EMPTY, SubsetMask::EMPTY) {
        return None;
    }
    let mut pairs: Vec<(usize, SubsetMask)> = search
        .order
        .iter()
        .copied()
        .zip(search.chosen.iter().copied())
        .collect();
    pairs.sort_by_key(|p| p.0);
    let core = search.chosen[0].intersection(search.chosen[1]);
    Some(SunflowerWitness {
        core,
        sets: pairs.iter().map(|p| p.1).collect(),
        colors: pairs.iter().map(|p| p.0).collect(),
    })
}

impl Search {
    /// `core` is meaningful from depth 2 on; `petals` is the union of the
    /// chosen sets minus the core.
    fn descend(&mut self, depth: usize, core: SubsetMask, petals: SubsetMask) -> bool {
        if depth == self.levels.len() {
            return true;
        }
        // Every remaining set needs a fresh petal element.
        if depth >= 2 && core.union(petals) == self.full {
            return false;
        }
        for idx in 0..self.levels[depth].len() {
            let a = self.levels[depth][idx];
            match depth {
                0 => {
                    self.chosen.push(a);
                    if self.descend(1, SubsetMask::EMPTY, SubsetMask::EMPTY) {
                        return true;
                    }
                    self.chosen.pop();
                }
                1 => {
                    let first = self.chosen[0];
                    let c = first.intersection(a);
                    if c == first || c == a {
                        continue;
                    }
                    if self.core_size.is_some_and(|cs| c.len() != cs) {
                        continue;
                    }
                    self.chosen.push(a);
                    let p = first.union(a).difference(c);
                    if self.descend(2, c, p) {
                        return true;
                    }
                    self.chosen.pop();
                }
                _ => {
                    if !core.is_subset_of(a) || a == core || !a.intersection(petals).is_empty() {
                        continue;
                    }
                    self.chosen.push(a);
                    if self.descend(depth + 1, core, petals.union(a.difference(core))) {
                        return true;
                    }
                    self.chosen.pop();
                }
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::Family;
    use crate::set::GroundSet;

    fn s(elems: &[u32]) -> SubsetMask {
        SubsetMask::from_elements(elems.iter().copied())
    }

    fn tuple(n: u32, fams: &[&[&[u32]]]) -> FamilyTuple {
        let g = GroundSet::new(n).unwrap();
        FamilyTuple::new(
            fams.iter()
                .map(|f| Family::new(g, f.iter().map(|e| s(e))).unwrap())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn pairwise_core_examples() {
        assert_eq!(
            pairwise_core(&[s(&[1, 2]), s(&[1, 3]), s(&[1, 4])]).unwrap(),
            Some(s(&[1]))
        );
        assert_eq!(
            pairwise_core(&[s(&[1, 2]), s(&[1, 2, 3]), s(&[1, 4])]).unwrap(),
            None
        );
        assert_eq!(
            pairwise_core(&[s(&[1]), s(&[2]), s(&[3])]).unwrap(),
            Some(SubsetMask::EMPTY)
        );
        assert!(matches!(pairwise_core(&[s(&[1])]), Err(Error::Usage(_))));
    }

    #[test]
    fn sunflower_predicate_examples() {
        assert!(is_multicolor_sunflower(&[s(&[1, 2]), s(&[1, 3]), s(&[1, 4])]).unwrap());
        assert!(!is_multicolor_sunflower(&[s(&[1]), s(&[1, 2]), s(&[1, 3])]).unwrap());
        assert!(!is_multicolor_sunflower(&[s(&[]), s(&[1]), s(&[2])]).unwrap());
    }

    #[test]
    fn finds_simple_witness() {
        let ft = tuple(4, &[&[&[1, 2]], &[&[1, 3]], &[&[1, 4]]]);
        let w = find_multicolor_sunflower(&ft).unwrap();
        assert_eq!(w.core, s(&[1]));
        assert_eq!(w.sets, vec![s(&[1, 2]), s(&[1, 3]), s(&[1, 4])]);
        assert_eq!(w.colors, vec![0, 1, 2]);
        assert!(w.verify(&ft));
    }

    #[test]
    fn empty_petal_is_not_a_witness() {
        let ft = tuple(3, &[&[&[], &[1]], &[&[1, 2]], &[&[1, 3]]]);
        assert_eq!(find_multicolor_sunflower(&ft), None);
    }

    #[test]
    fn witness_order_follows_families_not_search_order() {
        // Family sizes force the search to visit family 2 first.
        let ft = tuple(
            4,
            &[
                &[&[1, 2], &[2, 3], &[3, 4]],
                &[&[1, 3], &[1, 4]],
                &[&[1, 4]],
            ],
        );
        let w = find_multicolor_sunflower(&ft).unwrap();
        assert_eq!(w.colors, vec![0, 1, 2]);
        assert!(w.verify(&ft));
    }

    #[test]
    fn uniform_detector_examples() {
        let sets: &[&[u32]] = &[&[2, 3], &[2, 4], &[3, 4]];
        let ft = tuple(4, &[sets, sets, sets]);
        assert_eq!(find_uniform_sunflower(&ft, 2, 0).unwrap(), None);
        let w = find_uniform_sunflower(&ft, 2, 1).unwrap().unwrap();
        assert_eq!(w.core_size(), 1);
        assert_eq!(w.sets.len(), 2);
        assert!(w.verify(&ft));
        assert_eq!(find_uniform_sunflower(&ft, 1, 0).unwrap(), None);
        assert!(find_uniform_sunflower(&ft, 4, 0).is_err());
    }

    #[test]
    fn uniform_detector_uses_distinct_families() {
        // Both sets live only in family 0, so no two distinct families work.
        let ft = tuple(4, &[&[&[1, 2], &[3, 4]], &[], &[]]);
        assert_eq!(find_uniform_sunflower(&ft, 2, 0).unwrap(), None);
        let ft = tuple(4, &[&[&[1, 2]], &[], &[&[3, 4]]]);
        let w = find_uniform_sunflower(&ft, 2, 0).unwrap().unwrap();
        assert_eq!(w.colors, vec![0, 2]);
    }

    #[test]
    fn combinations_enumerate_in_order() {
        let mut c = vec![0, 1];
        let mut all = vec![c.clone()];
        while next_combination(&mut c, 4) {
            all.push(c.clone());
        }
        assert_eq!(all.len(), 6);
        assert_eq!(all.last().unwrap(), &vec![2, 3]);
    }
}
