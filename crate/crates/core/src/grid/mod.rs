//! Subsets of `[n]²` with row and column labels, and the combinatorics of
//! upper-interval graphs `Γ[v, w0]`.
//!
//! Rows and columns are 1-indexed; row 1 is drawn at the top.

mod boxes;
mod interval;
mod split;
mod young;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use boxes::{bounding_boxes, boxes_alternate, spanning_corners, BoundingBox, BoxColor};
pub use interval::{
    deletion_region, graph_of_interval_bruteforce, graph_of_permutation, graph_of_upper_interval,
    is_sandwiched, squares_match_noninversions, BRUTEFORCE_MAX_N,
};
pub use split::{block_antidiagonal_split, BlockSplit};
pub use young::{complement_young_shape, durfee, young_shape, YoungDiagram};

use crate::error::{Error, Result};
use crate::perm::{Permutation, MAX_N};

/// A multiset of labels from `[m]`, listed in weakly increasing order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Multiset {
    entries: Vec<usize>,
}

impl Multiset {
    pub fn new(mut entries: Vec<usize>) -> Result<Self> {
        if entries.contains(&0) {
            return Err(Error::Parse("labels start at 1".into()));
        }
        entries.sort_unstable();
        Ok(Self { entries })
    }

    /// `{1, 2, ..., n}`.
    pub fn identity(n: usize) -> Self {
        Self {
            entries: (1..=n).collect(),
        }
    }

    /// Every `n`-element multiset of `[m]`, in lexicographic order.
    pub fn all(m: usize, n: usize) -> Vec<Multiset> {
        (1..=m)
            .combinations_with_replacement(n)
            .map(|entries| Multiset { entries })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    /// Label in position `i` (1-indexed).
    pub fn at(&self, i: usize) -> usize {
        self.entries[i - 1]
    }

    pub fn check_universe(&self, m: usize) -> Result<()> {
        match self.entries.iter().find(|&&x| x > m) {
            Some(&label) => Err(Error::LabelOutOfRange { label, bound: m }),
            None => Ok(()),
        }
    }

    pub fn has_repeats(&self) -> bool {
        self.entries.windows(2).any(|w| w[0] == w[1])
    }

    /// `j̄_i = m + 1 - j_{len + 1 - i}`: reflection inside the universe `[m]`.
    pub fn bar(&self, m: usize) -> Multiset {
        Multiset {
            entries: self.entries.iter().rev().map(|&j| m + 1 - j).collect(),
        }
    }

    /// Labels of the positions that survive deleting `removed` (1-indexed).
    pub fn delete_positions(&self, removed: &BTreeSet<usize>) -> Multiset {
        Multiset {
            entries: self
                .entries
                .iter()
                .enumerate()
                .filter(|(p, _)| !removed.contains(&(p + 1)))
                .map(|(_, &x)| x)
                .collect(),
        }
    }

    /// Labels in positions `from..=to` (1-indexed).
    pub fn slice(&self, from: usize, to: usize) -> Multiset {
        Multiset {
            entries: self.entries[from - 1..to].to_vec(),
        }
    }
}

impl fmt::Display for Multiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.entries.iter().join(","))
    }
}

impl FromStr for Multiset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('{').trim_end_matches('}');
        let entries = if s.contains(',') || s.contains(char::is_whitespace) {
            s.split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad label {t:?}")))
                })
                .collect::<Result<Vec<_>>>()?
        } else {
            s.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as usize)
                        .ok_or_else(|| Error::Parse(format!("bad multiset {s:?}")))
                })
                .collect::<Result<Vec<_>>>()?
        };
        Multiset::new(entries)
    }
}

impl Serialize for Multiset {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.entries.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Multiset {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let entries = Vec::<usize>::deserialize(deserializer)?;
        Multiset::new(entries).map_err(serde::de::Error::custom)
    }
}

/// A subset `P ⊆ [n]²` together with row labels `R` and column labels `C`.
///
/// Row `i` is kept as a bitmask whose bit `j - 1` marks cell `(i, j)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LabeledGrid {
    n: usize,
    rows: Vec<u64>,
    row_labels: Multiset,
    col_labels: Multiset,
}

impl LabeledGrid {
    /// Empty grid with identity labels.
    pub fn empty(n: usize) -> Self {
        assert!(n <= MAX_N, "grid size {n} exceeds {MAX_N}");
        Self {
            n,
            rows: vec![0; n],
            row_labels: Multiset::identity(n),
            col_labels: Multiset::identity(n),
        }
    }

    pub fn full(n: usize) -> Self {
        let mut g = Self::empty(n);
        let mask = full_mask(n);
        g.rows.iter_mut().for_each(|r| *r = mask);
        g
    }

    pub fn from_cells(n: usize, cells: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Self::empty(n);
        for (i, j) in cells {
            g.check_cell(i, j)?;
            g.insert(i, j);
        }
        Ok(g)
    }

    /// Replaces the labels; both must have length `n`.
    pub fn with_labels(mut self, row_labels: Multiset, col_labels: Multiset) -> Result<Self> {
        for labels in [&row_labels, &col_labels] {
            if labels.len() != self.n {
                return Err(Error::SizeMismatch {
                    left: labels.len(),
                    right: self.n,
                });
            }
        }
        self.row_labels = row_labels;
        self.col_labels = col_labels;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn row_labels(&self) -> &Multiset {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &Multiset {
        &self.col_labels
    }

    fn check_cell(&self, i: usize, j: usize) -> Result<()> {
        for x in [i, j] {
            if x == 0 || x > self.n {
                return Err(Error::IndexOutOfRange { index: x, bound: self.n });
            }
        }
        Ok(())
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        (1..=self.n).contains(&i) && (1..=self.n).contains(&j) && self.rows[i - 1] >> (j - 1) & 1 == 1
    }

    pub fn insert(&mut self, i: usize, j: usize) {
        self.rows[i - 1] |= 1 << (j - 1);
    }

    pub fn remove(&mut self, i: usize, j: usize) {
        self.rows[i - 1] &= !(1 << (j - 1));
    }

    /// Row bitmask: bit `j - 1` set iff `(i, j)` is a cell.
    pub fn row_mask(&self, i: usize) -> u64 {
        self.rows[i - 1]
    }

    pub fn col_mask(&self, j: usize) -> u64 {
        (1..=self.n)
            .filter(|&i| self.contains(i, j))
            .fold(0, |m, i| m | 1 << (i - 1))
    }

    /// Cells in row-major order.
    pub fn cells(&self) -> Vec<(usize, usize)> {
        (1..=self.n)
            .flat_map(|i| (1..=self.n).filter(move |&j| self.contains(i, j)).map(move |j| (i, j)))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Same cell set, labels ignored.
    pub fn same_cells(&self, other: &LabeledGrid) -> bool {
        self.n == other.n && self.rows == other.rows
    }

    pub fn is_subset(&self, other: &LabeledGrid) -> bool {
        self.n == other.n && self.rows.iter().zip(&other.rows).all(|(a, b)| a & !b == 0)
    }

    pub fn difference(&self, other: &LabeledGrid) -> LabeledGrid {
        let mut out = self.clone();
        for (r, o) in out.rows.iter_mut().zip(&other.rows) {
            *r &= !o;
        }
        out
    }

    pub fn union(&self, other: &LabeledGrid) -> LabeledGrid {
        let mut out = self.clone();
        for (r, o) in out.rows.iter_mut().zip(&other.rows) {
            *r |= o;
        }
        out
    }

    /// Columns `c` with `(r, c)` a cell.
    pub fn row_support(&self, r: usize) -> Result<BTreeSet<usize>> {
        if r == 0 || r > self.n {
            return Err(Error::IndexOutOfRange { index: r, bound: self.n });
        }
        Ok(mask_to_set(self.rows[r - 1]))
    }

    /// Rows `r` with `(r, c)` a cell.
    pub fn col_support(&self, c: usize) -> Result<BTreeSet<usize>> {
        if c == 0 || c > self.n {
            return Err(Error::IndexOutOfRange { index: c, bound: self.n });
        }
        Ok(mask_to_set(self.col_mask(c)))
    }

    /// No two equally labeled rows share a support, and likewise for columns.
    pub fn is_admissible(&self) -> bool {
        let rows: Vec<u64> = (1..=self.n).map(|i| self.row_mask(i)).collect();
        let cols: Vec<u64> = (1..=self.n).map(|j| self.col_mask(j)).collect();
        distinct_within_labels(&rows, &self.row_labels) && distinct_within_labels(&cols, &self.col_labels)
    }

    /// `P_I^J`: deletes rows `I` and columns `J`, re-indexing the rest in order
    /// and carrying labels along.
    pub fn delete_rows_cols(&self, rows: &BTreeSet<usize>, cols: &BTreeSet<usize>) -> LabeledGrid {
        let keep_rows: Vec<usize> = (1..=self.n).filter(|i| !rows.contains(i)).collect();
        let keep_cols: Vec<usize> = (1..=self.n).filter(|j| !cols.contains(j)).collect();
        assert_eq!(
            keep_rows.len(),
            keep_cols.len(),
            "deleting {} rows and {} columns leaves a non-square grid",
            rows.len(),
            cols.len()
        );
        let m = keep_rows.len();
        let mut out = LabeledGrid::empty(m);
        for (a, &i) in keep_rows.iter().enumerate() {
            for (b, &j) in keep_cols.iter().enumerate() {
                if self.contains(i, j) {
                    out.insert(a + 1, b + 1);
                }
            }
        }
        out.row_labels = self.row_labels.delete_positions(rows);
        out.col_labels = self.col_labels.delete_positions(cols);
        out
    }

    /// Deletes a single row and a single column.
    pub fn delete_row_col(&self, row: usize, col: usize) -> LabeledGrid {
        self.delete_rows_cols(&BTreeSet::from([row]), &BTreeSet::from([col]))
    }

    /// Side of the largest contiguous square block of cells (0 if empty).
    pub fn largest_square(&self) -> usize {
        let n = self.n;
        let mut best = 0;
        let mut prev = vec![0usize; n + 1];
        for i in 1..=n {
            let mut cur = vec![0usize; n + 1];
            for j in 1..=n {
                if self.contains(i, j) {
                    cur[j] = 1 + prev[j].min(prev[j - 1]).min(cur[j - 1]);
                    best = best.max(cur[j]);
                }
            }
            prev = cur;
        }
        best
    }

    /// Sub-grid on rows `r0..=r1` and columns `c0..=c1`, labels carried along.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> LabeledGrid {
        assert_eq!(r1 + 1 - r0, c1 + 1 - c0, "block must be square");
        let m = r1 + 1 - r0;
        let mut out = LabeledGrid::empty(m);
        for i in r0..=r1 {
            for j in c0..=c1 {
                if self.contains(i, j) {
                    out.insert(i + 1 - r0, j + 1 - c0);
                }
            }
        }
        out.row_labels = self.row_labels.slice(r0, r1);
        out.col_labels = self.col_labels.slice(c0, c1);
        out
    }

    /// Reflection across the antidiagonal: `(i, j) -> (n+1-j, n+1-i)`, with
    /// labels `(C̄, R̄)` inside the universe `[m]`.
    pub fn antidiagonal_reflect(&self, m: usize) -> LabeledGrid {
        let n = self.n;
        let mut out = LabeledGrid::empty(n);
        for (i, j) in self.cells() {
            out.insert(n + 1 - j, n + 1 - i);
        }
        out.row_labels = self.col_labels.bar(m);
        out.col_labels = self.row_labels.bar(m);
        out
    }

    /// ASCII picture, one line per row: `x` for cells of `marked`, `o` for
    /// other cells, `.` for non-cells.
    pub fn render(&self, marked: Option<&Permutation>) -> String {
        let mut out = String::new();
        for i in 1..=self.n {
            for j in 1..=self.n {
                let ch = if marked.is_some_and(|v| v.n() == self.n && v.at(i) == j) {
                    'x'
                } else if self.contains(i, j) {
                    'o'
                } else {
                    '.'
                };
                out.push(ch);
                if j < self.n {
                    out.push(' ');
                }
            }
            out.push('\n');
        }
        out
    }
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn mask_to_set(mut mask: u64) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    while mask != 0 {
        out.insert(mask.trailing_zeros() as usize + 1);
        mask &= mask - 1;
    }
    out
}

fn distinct_within_labels(masks: &[u64], labels: &Multiset) -> bool {
    for a in 0..masks.len() {
        for b in a + 1..masks.len() {
            if labels.entries[a] == labels.entries[b] && masks[a] == masks[b] {
                return false;
            }
        }
    }
    true
}

impl fmt::Debug for LabeledGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "LabeledGrid(n={}, R={}, C={})", self.n, self.row_labels, self.col_labels)?;
        f.write_str(&self.render(None))
    }
}

#[derive(Serialize, Deserialize)]
struct GridDocument {
    n: usize,
    cells: Vec<[usize; 2]>,
    row_labels: Multiset,
    col_labels: Multiset,
}

impl Serialize for LabeledGrid {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        GridDocument {
            n: self.n,
            cells: self.cells().into_iter().map(|(i, j)| [i, j]).collect(),
            row_labels: self.row_labels.clone(),
            col_labels: self.col_labels.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LabeledGrid {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let doc = GridDocument::deserialize(deserializer)?;
        if doc.n > MAX_N {
            return Err(serde::de::Error::custom(format!("grid size {} too large", doc.n)));
        }
        LabeledGrid::from_cells(doc.n, doc.cells.into_iter().map(|[i, j]| (i, j)))
            .and_then(|g| g.with_labels(doc.row_labels, doc.col_labels))
            .map_err(serde::de::Error::custom)
    }
}
