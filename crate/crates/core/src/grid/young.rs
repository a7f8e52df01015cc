use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::LabeledGrid;
use crate::error::{Error, Result};

/// A partition `λ_1 >= λ_2 >= ...` drawn in English notation.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct YoungDiagram {
    parts: Vec<usize>,
}

impl YoungDiagram {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Shape(format!("{parts:?} is not weakly decreasing")));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Self { parts })
    }

    pub fn empty() -> Self {
        Self { parts: Vec::new() }
    }

    /// `(n, n-1, ..., 1)`.
    pub fn staircase(n: usize) -> Self {
        Self {
            parts: (1..=n).rev().collect(),
        }
    }

    /// `n^n`.
    pub fn square(n: usize) -> Self {
        Self { parts: vec![n; n] }
    }

    /// Every partition fitting in an `n × n` box.
    pub fn all_in_box(n: usize) -> Vec<YoungDiagram> {
        (0..=n)
            .combinations_with_replacement(n)
            .map(|mut parts| {
                parts.reverse();
                YoungDiagram::new(parts).expect("sorted")
            })
            .collect()
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// `λ_i`, 1-indexed, zero past the last part.
    pub fn part(&self, i: usize) -> usize {
        self.parts.get(i - 1).copied().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn fits_in_box(&self, n: usize) -> bool {
        self.parts.len() <= n && self.parts.first().is_none_or(|&p| p <= n)
    }

    pub fn contains(&self, other: &YoungDiagram) -> bool {
        (1..=other.parts.len()).all(|i| self.part(i) >= other.part(i))
    }

    /// Cells `(i, j)` with `j <= λ_i`.
    pub fn to_grid(&self, n: usize) -> Result<LabeledGrid> {
        self.check_box(n)?;
        LabeledGrid::from_cells(n, (1..=n).flat_map(|i| (1..=self.part(i)).map(move |j| (i, j))))
    }

    /// The skew shape `n^n / λ`: cells `(i, j)` with `j > λ_i`.
    pub fn complement_grid(&self, n: usize) -> Result<LabeledGrid> {
        self.check_box(n)?;
        LabeledGrid::from_cells(n, (1..=n).flat_map(|i| (self.part(i) + 1..=n).map(move |j| (i, j))))
    }

    fn check_box(&self, n: usize) -> Result<()> {
        if self.fits_in_box(n) {
            Ok(())
        } else {
            Err(Error::Shape(format!("{self} does not fit in {n}x{n}")))
        }
    }
}

impl fmt::Display for YoungDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.parts.iter().join(","))
    }
}

/// Largest `s` with `λ_s >= s`.
pub fn durfee(lambda: &YoungDiagram) -> usize {
    (1..=lambda.parts.len())
        .take_while(|&s| lambda.part(s) >= s)
        .last()
        .unwrap_or(0)
}

/// `λ` when every row of `P` is left-justified with weakly decreasing length.
pub fn young_shape(grid: &LabeledGrid) -> Option<YoungDiagram> {
    let n = grid.n();
    let mut parts = Vec::with_capacity(n);
    for i in 1..=n {
        let mask = grid.row_mask(i);
        let len = mask.count_ones() as usize;
        // left-justified: bits 0..len set
        if mask != low_bits(len) {
            return None;
        }
        parts.push(len);
    }
    YoungDiagram::new(parts).ok()
}

/// `μ` when `P = n^n / μ`, i.e. every row is right-justified with weakly
/// increasing length.
pub fn complement_young_shape(grid: &LabeledGrid) -> Option<YoungDiagram> {
    let n = grid.n();
    let mut parts = Vec::with_capacity(n);
    for i in 1..=n {
        let mask = grid.row_mask(i);
        let missing = n - mask.count_ones() as usize;
        if mask != low_bits(n) & !low_bits(missing) {
            return None;
        }
        parts.push(missing);
    }
    YoungDiagram::new(parts).ok()
}

fn low_bits(k: usize) -> u64 {
    if k >= 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}
