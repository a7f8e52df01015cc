//! Row and column label multisets up to label-pattern equivalence.
//!
//! Whether `M(R, C)` restricted to a grid is admissible, and which rows or
//! columns of `X(R, C)` coincide, depends only on which adjacent entries of
//! the sorted multisets are equal. A pattern is a bitmask over the `n - 1`
//! adjacent pairs; bit `i` set means entries `i + 1` and `i + 2` are equal.

use itertools::Itertools;
use klimm_core::grid::Multiset;
use rand::seq::index::sample;
use rand::Rng;

pub type LabelPattern = u32;

fn distinct_labels(pattern: LabelPattern, n: usize) -> usize {
    n - pattern.count_ones() as usize
}

/// Every pattern for `n` labels that can be realized inside `[m]`.
pub fn label_patterns(n: usize, m: usize) -> Vec<LabelPattern> {
    let gaps = n.saturating_sub(1);
    (0..1u32 << gaps)
        .filter(|&p| distinct_labels(p, n) <= m)
        .collect()
}

/// Every ordered pair of patterns, as enumerated by [`label_patterns`].
pub fn pattern_pairs(n: usize, m: usize) -> Vec<(LabelPattern, LabelPattern)> {
    let ps = label_patterns(n, m);
    ps.iter().cartesian_product(ps.iter()).map(|(&a, &b)| (a, b)).collect()
}

/// A multiset of `[m]` with the given pattern, its distinct labels drawn
/// uniformly from `[m]`.
pub fn realize(pattern: LabelPattern, n: usize, m: usize, rng: &mut impl Rng) -> Multiset {
    let d = distinct_labels(pattern, n);
    let mut labels = sample(rng, m, d).into_vec();
    labels.sort_unstable();
    let mut entries = Vec::with_capacity(n);
    let mut next = 0;
    for i in 0..n {
        if i > 0 && pattern & (1 << (i - 1)) == 0 {
            next += 1;
        }
        entries.push(labels[next] + 1);
    }
    Multiset::new(entries).expect("sorted labels")
}

/// The pattern of a multiset.
pub fn pattern_of(labels: &Multiset) -> LabelPattern {
    labels
        .entries()
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[0] == w[1])
        .fold(0, |acc, (i, _)| acc | 1 << i)
}

/// A multiset of `n` labels from `[m]`, uniformly over multisets.
pub fn random_multiset(n: usize, m: usize, rng: &mut impl Rng) -> Multiset {
    let all = Multiset::all(m, n);
    all[rng.gen_range(0..all.len())].clone()
}
