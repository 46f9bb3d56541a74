//! Set families, family tuples and the plain-text family file format.
//!
//! File format:
//!
//! ```text
//! n=<int>
//! 1,2,3        one set per line, 1-based elements
//!              an empty line is the empty set
//! 0x1f         hexadecimal mask lines are accepted too
//! ---          separates consecutive families of a tuple
//! ```
//!
//! Lines starting with `#` are comments.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{domain, Error, Result};
use crate::set::{GroundSet, SubsetMask};

/// Largest number of families in a tuple.
pub const MAX_FAMILIES: usize = 16;

/// Separator line between families in a tuple file.
pub const FAMILY_SEPARATOR: &str = "---";

/// A duplicate-free family of subsets of a common ground set.
///
/// Members are kept sorted by mask; membership queries go through a hash set.
#[derive(Debug, Clone)]
pub struct Family {
    ground: GroundSet,
    members: Vec<SubsetMask>,
    index: HashSet<SubsetMask>,
}

impl PartialEq for Family {
    fn eq(&self, other: &Self) -> bool {
        self.ground == other.ground && self.members == other.members
    }
}

impl Eq for Family {}

impl Family {
    pub fn empty(ground: GroundSet) -> Self {
        Family {
            ground,
            members: Vec::new(),
            index: HashSet::new(),
        }
    }

    /// Builds a family, silently dropping duplicates.
    pub fn new<I: IntoIterator<Item = SubsetMask>>(ground: GroundSet, sets: I) -> Result<Self> {
        let mut index = HashSet::new();
        let mut members = Vec::new();
        for s in sets {
            if !ground.contains(s) {
                return domain(format!("set {s} is not a subset of [{}]", ground.n()));
            }
            if index.insert(s) {
                members.push(s);
            }
        }
        members.sort_unstable();
        Ok(Family {
            ground,
            members,
            index,
        })
    }

    /// The whole power set `2^[n]`.
    pub fn power_set(ground: GroundSet) -> Result<Self> {
        GroundSet::enumerable(ground.n())?;
        Family::new(ground, ground.subsets())
    }

    /// All members satisfying `pred`.
    pub fn from_predicate(ground: GroundSet, pred: impl Fn(SubsetMask) -> bool) -> Result<Self> {
        GroundSet::enumerable(ground.n())?;
        Family::new(ground, ground.subsets().filter(|&s| pred(s)))
    }

    /// Members given as a bitmask over subset indices (bit `x` set iff mask `x`
    /// is a member). Requires `n <= 6`.
    pub fn from_index_bits(ground: GroundSet, bits: u64) -> Result<Self> {
        if ground.n() > 6 {
            return domain("index-bit families need n <= 6");
        }
        let mut b = bits;
        let mut sets = Vec::new();
        while b != 0 {
            sets.push(SubsetMask(b.trailing_zeros() as u64));
            b &= b - 1;
        }
        Family::new(ground, sets)
    }

    #[inline]
    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    #[inline]
    pub fn members(&self) -> &[SubsetMask] {
        &self.members
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.members.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    #[inline]
    pub fn contains(&self, s: SubsetMask) -> bool {
        self.index.contains(&s)
    }

    pub fn intersection(&self, other: &Family) -> Family {
        let members: Vec<_> = self
            .members
            .iter()
            .copied()
            .filter(|s| other.contains(*s))
            .collect();
        let index = members.iter().copied().collect();
        Family {
            ground: self.ground,
            members,
            index,
        }
    }

    /// Copy with `s` removed.
    pub fn without(&self, s: SubsetMask) -> Family {
        Family::new(
            self.ground,
            self.members.iter().copied().filter(|&m| m != s),
        )
        .expect("subset of a valid family")
    }

    /// True when every member has exactly `s` elements.
    pub fn is_uniform(&self, s: u32) -> bool {
        self.members.iter().all(|m| m.len() == s)
    }
}

/// `k` families over one ground set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyTuple {
    ground: GroundSet,
    families: Vec<Family>,
}

impl FamilyTuple {
    pub fn new(families: Vec<Family>) -> Result<Self> {
        if families.len() < 2 || families.len() > MAX_FAMILIES {
            return domain(format!(
                "a family tuple needs between 2 and {MAX_FAMILIES} families, got {}",
                families.len()
            ));
        }
        let ground = families[0].ground();
        if families.iter().any(|f| f.ground() != ground) {
            return domain("families of a tuple must share one ground set");
        }
        Ok(FamilyTuple { ground, families })
    }

    #[inline]
    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.families.len()
    }

    #[inline]
    pub fn families(&self) -> &[Family] {
        &self.families
    }

    pub fn family(&self, i: usize) -> &Family {
        &self.families[i]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.families.iter().map(Family::len).collect()
    }

    pub fn total(&self) -> usize {
        self.families.iter().map(Family::len).sum()
    }

    /// The tuple with its families reordered: family `i` of the result is
    /// family `perm[i]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Result<FamilyTuple> {
        let mut seen = vec![false; self.k()];
        if perm.len() != self.k()
            || perm
                .iter()
                .any(|&p| p >= self.k() || std::mem::replace(&mut seen[p], true))
        {
            return Err(Error::Usage("not a permutation of the families".into()));
        }
        FamilyTuple::new(perm.iter().map(|&p| self.families[p].clone()).collect())
    }

    /// Copy with family `i` replaced.
    pub fn with_family(&self, i: usize, fam: Family) -> Result<FamilyTuple> {
        let mut families = self.families.clone();
        families[i] = fam;
        FamilyTuple::new(families)
    }

    /// Sets common to every family.
    pub fn common_part(&self) -> Family {
        self.families[1..]
            .iter()
            .fold(self.families[0].clone(), |acc, f| acc.intersection(f))
    }

    /// Renders the tuple in the family file format.
    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        writeln!(out, "n={}", self.ground.n()).unwrap();
        for (i, fam) in self.families.iter().enumerate() {
            if i > 0 {
                writeln!(out, "{FAMILY_SEPARATOR}").unwrap();
            }
            for m in fam.members() {
                let elems: Vec<String> = m.elements().map(|e| e.to_string()).collect();
                writeln!(out, "{}", elems.join(",")).unwrap();
            }
        }
        out
    }

    pub fn write_file(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_file_string())?;
        Ok(())
    }
}

/// Parses the family file format. Returns the ground set and one family per
/// `---`-separated block.
pub fn parse_families(text: &str) -> Result<(GroundSet, Vec<Family>)> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let (header_no, header) = loop {
        match lines.next() {
            None => {
                return Err(Error::Parse {
                    line: 1,
                    msg: "missing header line n=<int>".into(),
                })
            }
            Some((_, l)) if l.starts_with('#') => continue,
            Some(h) => break h,
        }
    };
    let n: u32 = header
        .strip_prefix("n=")
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| Error::Parse {
            line: header_no,
            msg: format!("expected header n=<int>, found {header:?}"),
        })?;
    let ground = GroundSet::new(n).map_err(|e| Error::Parse {
        line: header_no,
        msg: e.to_string(),
    })?;

    let mut blocks: Vec<Vec<(usize, SubsetMask)>> = vec![Vec::new()];
    for (no, line) in lines {
        if line.starts_with('#') {
            continue;
        }
        if line == FAMILY_SEPARATOR {
            blocks.push(Vec::new());
            continue;
        }
        let set = parse_set_line(line, ground).map_err(|msg| Error::Parse { line: no, msg })?;
        blocks.last_mut().unwrap().push((no, set));
    }

    let mut families = Vec::with_capacity(blocks.len());
    for block in blocks {
        let mut seen = HashSet::new();
        for &(no, s) in &block {
            if !seen.insert(s) {
                return Err(Error::Parse {
                    line: no,
                    msg: format!("duplicate set {s} in family"),
                });
            }
        }
        families.push(Family::new(ground, block.into_iter().map(|(_, s)| s))?);
    }
    Ok((ground, families))
}

fn parse_set_line(line: &str, ground: GroundSet) -> std::result::Result<SubsetMask, String> {
    if line.is_empty() {
        return Ok(SubsetMask::EMPTY);
    }
    let set = if let Some(hex) = line.strip_prefix("0x").or_else(|| line.strip_prefix("0X")) {
        SubsetMask(u64::from_str_radix(hex, 16).map_err(|e| format!("bad hex mask {line:?}: {e}"))?)
    } else {
        let mut bits = 0u64;
        for tok in line.split(',') {
            let tok = tok.trim();
            let e: u32 = tok.parse().map_err(|_| format!("bad element {tok:?}"))?;
            if e == 0 || e > ground.n() {
                return Err(format!("element {e} outside [1, {}]", ground.n()));
            }
            bits |= 1u64 << (e - 1);
        }
        SubsetMask(bits)
    };
    if !ground.contains(set) {
        return Err(format!("mask {line} exceeds [{}]", ground.n()));
    }
    Ok(set)
}

/// Reads a tuple file (at least two families).
pub fn read_tuple(path: &Path) -> Result<FamilyTuple> {
    let text = std::fs::read_to_string(path)?;
    let (_, families) = parse_families(&text)?;
    FamilyTuple::new(families)
}
