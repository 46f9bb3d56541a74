//! Petal incidence graphs: bipartite matching, König covers, and the
//! classification of 3x3 graphs with matching number at most two.
//!
//! Rows (`V1`) are families, columns (`V2`) are the candidate petal sets
//! produced by one partition of the ground set.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest supported side length.
pub const MAX_SIDE: usize = 16;

/// A `k x k` bipartite graph stored as one column bitmask per row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PetalGraph {
    k: usize,
    rows: [u16; MAX_SIDE],
}

impl PetalGraph {
    pub fn empty(k: usize) -> Result<Self> {
        if k == 0 || k > MAX_SIDE {
            return Err(Error::Domain(format!(
                "graph side {k} outside 1..={MAX_SIDE}"
            )));
        }
        Ok(PetalGraph {
            k,
            rows: [0; MAX_SIDE],
        })
    }

    /// Builds a graph from row bitmasks (bit `j` of `rows[i]` is edge `(i, j)`).
    pub fn from_rows(rows: &[u16]) -> Result<Self> {
        let mut g = PetalGraph::empty(rows.len())?;
        let mask = col_mask(g.k);
        for (i, &r) in rows.iter().enumerate() {
            if r & !mask != 0 {
                return Err(Error::Domain(format!("row {i} has columns beyond {}", g.k)));
            }
            g.rows[i] = r;
        }
        Ok(g)
    }

    /// Builds a graph from an edge list of `(row, column)` pairs.
    pub fn from_edges(k: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = PetalGraph::empty(k)?;
        for &(i, j) in edges {
            if i >= k || j >= k {
                return Err(Error::Domain(format!("edge ({i},{j}) outside {k}x{k}")));
            }
            g.rows[i] |= 1 << j;
        }
        Ok(g)
    }

    pub fn complete(k: usize) -> Result<Self> {
        PetalGraph::from_rows(&vec![col_mask(k); k])
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn rows(&self) -> &[u16] {
        &self.rows[..self.k]
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.rows[i] >> j & 1 == 1
    }

    pub fn with_edge(mut self, i: usize, j: usize) -> Self {
        self.rows[i] |= 1 << j;
        self
    }

    pub fn edge_count(&self) -> u32 {
        self.rows().iter().map(|r| r.count_ones()).sum()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.k).flat_map(move |i| {
            (0..self.k)
                .filter(move |&j| self.has_edge(i, j))
                .map(move |j| (i, j))
        })
    }

    /// Column `j` as a row bitmask.
    pub fn column(&self, j: usize) -> u16 {
        (0..self.k)
            .filter(|&i| self.has_edge(i, j))
            .fold(0, |m, i| m | 1 << i)
    }

    pub fn column_degree(&self, j: usize) -> u32 {
        self.column(j).count_ones()
    }

    /// True when every edge of `self` is an edge of `other`.
    pub fn is_subgraph_of(&self, other: &PetalGraph) -> bool {
        self.k == other.k
            && self
                .rows()
                .iter()
                .zip(other.rows())
                .all(|(a, b)| a & !b == 0)
    }

    /// Relabels rows by `row_perm` and columns by `col_perm`: edge `(i, j)`
    /// becomes `(row_perm[i], col_perm[j])`.
    pub fn relabel(&self, row_perm: &[usize], col_perm: &[usize]) -> PetalGraph {
        let mut out = PetalGraph {
            k: self.k,
            rows: [0; MAX_SIDE],
        };
        for (i, j) in self.edges() {
            out.rows[row_perm[i]] |= 1 << col_perm[j];
        }
        out
    }
}

#[inline]
fn col_mask(k: usize) -> u16 {
    if k >= 16 {
        u16::MAX
    } else {
        (1u16 << k) - 1
    }
}

impl fmt::Display for PetalGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.k {
            if i > 0 {
                f.write_str("\n")?;
            }
            for j in 0..self.k {
                f.write_str(if self.has_edge(i, j) { "1" } else { "0" })?;
            }
        }
        Ok(())
    }
}

impl FromStr for PetalGraph {
    type Err = Error;

    /// Parses `k` rows of `0`/`1` characters separated by newlines or `/`.
    fn from_str(s: &str) -> Result<Self> {
        let lines: Vec<&str> = s
            .split(['\n', '/'])
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .collect();
        let k = lines.len();
        let mut g = PetalGraph::empty(k)?;
        for (i, line) in lines.iter().enumerate() {
            if line.len() != k {
                return Err(Error::Parse {
                    line: i + 1,
                    msg: format!("expected {k} columns, got {}", line.len()),
                });
            }
            for (j, ch) in line.chars().enumerate() {
                match ch {
                    '1' => g.rows[i] |= 1 << j,
                    '0' => {}
                    other => {
                        return Err(Error::Parse {
                            line: i + 1,
                            msg: format!("unexpected character {other:?}"),
                        })
                    }
                }
            }
        }
        Ok(g)
    }
}

/// A maximum matching as `(row, column)` pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    pub pairs: Vec<(usize, usize)>,
}

impl Matching {
    pub fn size(&self) -> usize {
        self.pairs.len()
    }
}

/// Maximum matching by augmenting paths.
pub fn max_matching(g: &PetalGraph) -> Matching {
    let k = g.k();
    let mut col_owner: Vec<Option<usize>> = vec![None; k];
    for i in 0..k {
        let mut seen = vec![false; k];
        augment(g, i, &mut seen, &mut col_owner);
    }
    let mut pairs: Vec<(usize, usize)> = col_owner
        .iter()
        .enumerate()
        .filter_map(|(j, o)| o.map(|i| (i, j)))
        .collect();
    pairs.sort_unstable();
    Matching { pairs }
}

fn augment(g: &PetalGraph, i: usize, seen: &mut [bool], col_owner: &mut [Option<usize>]) -> bool {
    for j in 0..g.k() {
        if !g.has_edge(i, j) || seen[j] {
            continue;
        }
        seen[j] = true;
        if col_owner[j].is_none_or(|owner| augment(g, owner, seen, col_owner)) {
            col_owner[j] = Some(i);
            return true;
        }
    }
    false
}

/// A vertex set split by side, as bitmasks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct VertexCover {
    pub rows: u16,
    pub cols: u16,
}

impl VertexCover {
    pub fn size(&self) -> u32 {
        self.rows.count_ones() + self.cols.count_ones()
    }

    pub fn covers(&self, g: &PetalGraph) -> bool {
        g.edges()
            .all(|(i, j)| self.rows >> i & 1 == 1 || self.cols >> j & 1 == 1)
    }
}

/// Minimum vertex cover built from a maximum matching: with `Z` the vertices
/// reachable from unmatched rows along alternating paths, the cover is
/// `(rows \ Z) ∪ (cols ∩ Z)`.
pub fn min_vertex_cover(g: &PetalGraph) -> VertexCover {
    let k = g.k();
    let m = max_matching(g);
    let mut row_match = vec![None; k];
    let mut col_match = vec![None; k];
    for &(i, j) in &m.pairs {
        row_match[i] = Some(j);
        col_match[j] = Some(i);
    }
    let mut z_rows = 0u16;
    let mut z_cols = 0u16;
    let mut stack: Vec<usize> = (0..k).filter(|&i| row_match[i].is_none()).collect();
    for &i in &stack {
        z_rows |= 1 << i;
    }
    while let Some(i) = stack.pop() {
        for (j, &matched) in col_match.iter().enumerate().take(k) {
            if !g.has_edge(i, j) || row_match[i] == Some(j) || z_cols >> j & 1 == 1 {
                continue;
            }
            z_cols |= 1 << j;
            if let Some(i2) = matched {
                if z_rows >> i2 & 1 == 0 {
                    z_rows |= 1 << i2;
                    stack.push(i2);
                }
            }
        }
    }
    VertexCover {
        rows: col_mask(k) & !z_rows,
        cols: z_cols,
    }
}

/// Counts used by the product-bound averaging argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GraphStats {
    /// Matchings of size two.
    pub m2: u32,
    /// Subgraphs made of a column vertex, two of its edges, and one more
    /// edge disjoint from those three vertices.
    pub t: u32,
    pub matching_number: u32,
    pub cover_size: u32,
}

/// Statistics of a 3x3 petal graph.
pub fn graph_stats(g: &PetalGraph) -> Result<GraphStats> {
    if g.k() != 3 {
        return Err(Error::Domain(format!(
            "graph_stats needs a 3x3 graph, got {0}x{0}",
            g.k()
        )));
    }
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let mut m2 = 0;
    for (a, &(i1, j1)) in edges.iter().enumerate() {
        for &(i2, j2) in &edges[a + 1..] {
            if i1 != i2 && j1 != j2 {
                m2 += 1;
            }
        }
    }
    let mut t = 0;
    for v in 0..3 {
        let col = g.column(v);
        // With three rows, two neighbours of v leave one row for the extra
        // edge, which must also avoid column v.
        for (r1, r2) in [(0, 1), (0, 2), (1, 2)] {
            if col >> r1 & 1 == 1 && col >> r2 & 1 == 1 {
                let r3 = 3 - r1 - r2;
                t += (g.rows[r3] & !(1 << v)).count_ones();
            }
        }
    }
    Ok(GraphStats {
        m2,
        t,
        matching_number: max_matching(g).size() as u32,
        cover_size: min_vertex_cover(g).size(),
    })
}

/// The three extremal 3x3 graphs with matching number two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Template {
    /// `K_{2,3}` with the two-vertex side among the rows.
    G1,
    /// Two vertex-disjoint paths with two edges each.
    G2,
    /// A four-edge path whose endpoints are rows.
    G3,
}

impl Template {
    pub const ALL: [Template; 3] = [Template::G1, Template::G2, Template::G3];

    pub fn graph(self) -> PetalGraph {
        let rows: [u16; 3] = match self {
            Template::G1 => [0b111, 0b111, 0b000],
            Template::G2 => [0b011, 0b100, 0b100],
            Template::G3 => [0b001, 0b011, 0b010],
        };
        PetalGraph::from_rows(&rows).expect("3x3 template")
    }

    pub fn name(self) -> &'static str {
        match self {
            Template::G1 => "G1",
            Template::G2 => "G2",
            Template::G3 => "G3",
        }
    }
}

const PERMS3: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

/// True when `g` embeds into `template` after independently permuting rows
/// and columns.
pub fn embeds_into(g: &PetalGraph, template: Template) -> bool {
    let t = template.graph();
    PERMS3
        .iter()
        .any(|rp| PERMS3.iter().any(|cp| g.relabel(rp, cp).is_subgraph_of(&t)))
}

/// Every template that `g` embeds into (side-preserving, up to relabelling).
///
/// Requires a 3x3 graph whose columns have degree at most two and whose
/// matching number is at most two; under those conditions the result is
/// never empty.
pub fn classify(g: &PetalGraph) -> Result<Vec<Template>> {
    if g.k() != 3 {
        return Err(Error::Precondition(format!(
            "classify needs a 3x3 graph, got {0}x{0}",
            g.k()
        )));
    }
    if let Some(j) = (0..3).find(|&j| g.column_degree(j) > 2) {
        return Err(Error::Precondition(format!(
            "column {j} has degree {} > 2",
            g.column_degree(j)
        )));
    }
    let nu = max_matching(g).size();
    if nu > 2 {
        return Err(Error::Precondition(format!("matching number {nu} > 2")));
    }
    Ok(Template::ALL
        .into_iter()
        .filter(|&t| embeds_into(g, t))
        .collect())
}

/// Outcome of the exhaustive structure-lemma check.
#[derive(Debug, Clone, Serialize)]
pub struct StructureLemmaReport {
    /// 3x3 graphs whose columns all have degree at most two.
    pub graphs_scanned: u32,
    /// Those among them with matching number at most two.
    pub qualifying: u32,
    /// Largest `m2 + t` over qualifying graphs.
    pub max_stat: u32,
    /// First graph that failed classification or exceeded `m2 + t <= 6`.
    #[serde(serialize_with = "ser_graph_opt")]
    pub counterexample: Option<PetalGraph>,
}

fn ser_graph_opt<S: serde::Serializer>(
    g: &Option<PetalGraph>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match g {
        Some(g) => s.serialize_some(&g.to_string()),
        None => s.serialize_none(),
    }
}

impl StructureLemmaReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Column neighbourhoods of size at most two among three rows.
const SMALL_COLUMNS: [u16; 7] = [0b000, 0b001, 0b010, 0b100, 0b011, 0b101, 0b110];

/// Every 3x3 graph with column degrees at most two, in a fixed order.
pub fn low_degree_graphs() -> impl Iterator<Item = PetalGraph> {
    SMALL_COLUMNS.into_iter().flat_map(|c0| {
        SMALL_COLUMNS.into_iter().flat_map(move |c1| {
            SMALL_COLUMNS.into_iter().map(move |c2| {
                let mut rows = [0u16; 3];
                for (j, col) in [c0, c1, c2].into_iter().enumerate() {
                    for (i, row) in rows.iter_mut().enumerate() {
                        if col >> i & 1 == 1 {
                            *row |= 1 << j;
                        }
                    }
                }
                PetalGraph::from_rows(&rows).expect("3x3")
            })
        })
    })
}

/// Checks, over all 343 graphs with column degrees at most two, that every
/// graph with matching number at most two embeds into some template and has
/// `m2 + t <= 6`.
pub fn verify_structure_lemma() -> StructureLemmaReport {
    let mut report = StructureLemmaReport {
        graphs_scanned: 0,
        qualifying: 0,
        max_stat: 0,
        counterexample: None,
    };
    for g in low_degree_graphs() {
        report.graphs_scanned += 1;
        if max_matching(&g).size() > 2 {
            continue;
        }
        report.qualifying += 1;
        let stats = graph_stats(&g).expect("3x3");
        report.max_stat = report.max_stat.max(stats.m2 + stats.t);
        let ok = classify(&g).map(|c| !c.is_empty()).unwrap_or(false) && stats.m2 + stats.t <= 6;
        if !ok && report.counterexample.is_none() {
            report.counterexample = Some(g);
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stats(t: Template) -> (u32, u32) {
        let s = graph_stats(&t.graph()).unwrap();
        (s.m2, s.t)
    }

    #[test]
    fn template_statistics() {
        assert_eq!(stats(Template::G1), (6, 0));
        assert_eq!(stats(Template::G2), (4, 2));
        assert_eq!(stats(Template::G3), (3, 2));
    }

    #[test]
    fn matching_examples() {
        assert_eq!(max_matching(&PetalGraph::complete(3).unwrap()).size(), 3);
        assert_eq!(max_matching(&PetalGraph::empty(3).unwrap()).size(), 0);
        for t in Template::ALL {
            assert_eq!(max_matching(&t.graph()).size(), 2);
        }
    }

    #[test]
    fn cover_examples() {
        let c = min_vertex_cover(&Template::G1.graph());
        assert_eq!(
            c,
            VertexCover {
                rows: 0b011,
                cols: 0
            }
        );
        let single = PetalGraph::from_edges(3, &[(1, 2)]).unwrap();
        assert_eq!(min_vertex_cover(&single).size(), 1);
        let c = min_vertex_cover(&Template::G3.graph());
        assert_eq!(c.size(), 2);
        assert!(c.covers(&Template::G3.graph()));
    }

    #[test]
    fn classify_examples() {
        assert_eq!(
            classify(&PetalGraph::empty(3).unwrap()).unwrap(),
            Template::ALL.to_vec()
        );
        assert_eq!(classify(&Template::G2.graph()).unwrap(), vec![Template::G2]);
        let pm = PetalGraph::from_edges(3, &[(0, 0), (1, 1), (2, 2)]).unwrap();
        let err = classify(&pm).unwrap_err();
        assert!(err.to_string().contains("matching number 3"), "{err}");
        let heavy = PetalGraph::from_edges(3, &[(0, 0), (1, 0), (2, 0)]).unwrap();
        assert!(classify(&heavy)
            .unwrap_err()
            .to_string()
            .contains("degree 3"));
    }

    #[test]
    fn structure_lemma_holds() {
        let r = verify_structure_lemma();
        assert_eq!(r.graphs_scanned, 343);
        assert!(r.qualifying > 0);
        assert_eq!(r.max_stat, 6);
        assert!(r.passed(), "{:?}", r.counterexample);
    }

    #[test]
    fn fixed_labelling_reading_fails() {
        // Without relabelling, a K_{2,3} on rows 1,2 is not a subgraph of G1.
        let g = PetalGraph::from_rows(&[0, 0b111, 0b111]).unwrap();
        assert!(!Template::ALL.iter().any(|t| g.is_subgraph_of(&t.graph())));
        assert_eq!(classify(&g).unwrap(), vec![Template::G1]);
    }

    #[test]
    fn stats_domain() {
        assert!(graph_stats(&PetalGraph::empty(4).unwrap()).is_err());
    }

    #[test]
    fn text_round_trip() {
        let g = Template::G3.graph();
        assert_eq!(g.to_string(), "100\n110\n010");
        assert_eq!("100/110/010".parse::<PetalGraph>().unwrap(), g);
        assert!("10/1".parse::<PetalGraph>().is_err());
    }
}
