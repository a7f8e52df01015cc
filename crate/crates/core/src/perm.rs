//! Permutations of `[n]` in one-line notation.
//!
//! Positions and values are 1-indexed throughout: `v.at(i)` is `v(i)` for
//! `1 <= i <= n`.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported `n`. Grid rows are stored as `u64` bitmasks.
pub const MAX_N: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    word: Vec<u8>,
}

/// A pair `<i, j>` with `i < j` and `v(i) < v(j)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NonInversion {
    pub i: usize,
    pub j: usize,
}

impl Permutation {
    pub fn new(word: Vec<usize>) -> Result<Self> {
        let n = word.len();
        if n > MAX_N {
            return Err(Error::CostGuard { n, max: MAX_N });
        }
        let mut seen = vec![false; n + 1];
        for &x in &word {
            if x == 0 || x > n || seen[x] {
                return Err(Error::NotAPermutation { n, word });
            }
            seen[x] = true;
        }
        Ok(Self {
            word: word.into_iter().map(|x| x as u8).collect(),
        })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            word: (1..=n as u8).collect(),
        }
    }

    /// `w0 = n (n-1) ... 1`.
    pub fn longest_element(n: usize) -> Self {
        Self {
            word: (1..=n as u8).rev().collect(),
        }
    }

    /// All permutations of `[n]` in lexicographic order.
    pub fn all(n: usize) -> impl Iterator<Item = Permutation> {
        (1..=n as u8)
            .permutations(n)
            .map(|word| Permutation { word })
    }

    pub fn n(&self) -> usize {
        self.word.len()
    }

    /// `v(i)`, 1-indexed.
    pub fn at(&self, i: usize) -> usize {
        self.word[i - 1] as usize
    }

    pub fn word(&self) -> Vec<usize> {
        self.word.iter().map(|&x| x as usize).collect()
    }

    pub(crate) fn raw(&self) -> &[u8] {
        &self.word
    }

    pub fn is_identity(&self) -> bool {
        self.word.iter().enumerate().all(|(i, &x)| x as usize == i + 1)
    }

    /// Number of inversions.
    pub fn length(&self) -> usize {
        let w = &self.word;
        let mut count = 0;
        for i in 0..w.len() {
            for j in i + 1..w.len() {
                if w[i] > w[j] {
                    count += 1;
                }
            }
        }
        count
    }

    /// Non-inversions in lexicographic order.
    pub fn non_inversions(&self) -> Vec<NonInversion> {
        let w = &self.word;
        let mut out = Vec::new();
        for i in 0..w.len() {
            for j in i + 1..w.len() {
                if w[i] < w[j] {
                    out.push(NonInversion { i: i + 1, j: j + 1 });
                }
            }
        }
        out
    }

    /// Number of inversions `(a, b)` with `a = i` or `b = i`.
    pub fn inversions_at(&self, i: usize) -> usize {
        let w = &self.word;
        let p = i - 1;
        (0..w.len())
            .filter(|&q| (q < p && w[q] > w[p]) || (q > p && w[q] < w[p]))
            .count()
    }

    fn check_same_size(&self, other: &Permutation) -> Result<()> {
        if self.n() != other.n() {
            return Err(Error::SizeMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        Ok(())
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        self.check_same_size(other)?;
        Ok(Permutation {
            word: other.word.iter().map(|&x| self.word[x as usize - 1]).collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut word = vec![0u8; self.n()];
        for (i, &x) in self.word.iter().enumerate() {
            word[x as usize - 1] = (i + 1) as u8;
        }
        Permutation { word }
    }

    /// `v s_i`: swaps the entries in positions `i` and `i + 1`.
    pub fn swap_positions(&self, i: usize) -> Permutation {
        let mut word = self.word.clone();
        word.swap(i - 1, i);
        Permutation { word }
    }

    /// True iff `s_i` is a right descent, i.e. `v(i) > v(i + 1)`.
    pub fn has_right_descent(&self, i: usize) -> bool {
        self.word[i - 1] > self.word[i]
    }

    /// Bruhat order via the sorted-prefix criterion.
    pub fn bruhat_leq(&self, other: &Permutation) -> Result<bool> {
        self.check_same_size(other)?;
        Ok(bruhat_leq_raw(&self.word, &other.word))
    }

    /// True iff some subsequence of `self` is order-isomorphic to `pattern`.
    pub fn contains_pattern(&self, pattern: &Permutation) -> Result<bool> {
        let k = pattern.n();
        if k > self.n() {
            return Err(Error::PatternTooLong {
                pattern: k,
                host: self.n(),
            });
        }
        if k == 0 {
            return Ok(true);
        }
        let mut chosen = Vec::with_capacity(k);
        Ok(occurs_from(&self.word, &pattern.word, 0, &mut chosen))
    }

    /// Like [`Permutation::contains_pattern`], but a pattern longer than the
    /// host is simply avoided.
    pub fn avoids(&self, pattern: &Permutation) -> bool {
        pattern.n() > self.n() || !self.contains_pattern(pattern).unwrap_or(false)
    }

    /// True iff `self` avoids both 1324 and 2143.
    pub fn avoids_1324_and_2143(&self) -> bool {
        self.avoids(&pattern_1324()) && self.avoids(&pattern_2143())
    }

    /// Returns the first of 1324, 2143 that occurs in `self`, if any.
    pub fn forbidden_pattern(&self) -> Option<Permutation> {
        [pattern_1324(), pattern_2143()]
            .into_iter()
            .find(|p| !self.avoids(p))
    }

    /// Deletes `v(i)` from the one-line notation and standardizes the rest.
    pub fn delete_entry(&self, i: usize) -> Result<Permutation> {
        let n = self.n();
        if i == 0 || i > n {
            return Err(Error::IndexOutOfRange { index: i, bound: n });
        }
        let removed = self.word[i - 1];
        let word = self
            .word
            .iter()
            .enumerate()
            .filter(|&(p, _)| p != i - 1)
            .map(|(_, &x)| if x > removed { x - 1 } else { x })
            .collect();
        Ok(Permutation { word })
    }

    /// True iff `w([j]) = [j]` for some `1 <= j < n`.
    pub fn is_in_maximal_parabolic(&self) -> bool {
        let mut max = 0;
        for (j, &x) in self.word.iter().enumerate().take(self.n().saturating_sub(1)) {
            max = max.max(x as usize);
            if max == j + 1 {
                return true;
            }
        }
        false
    }

    /// Lexicographic rank in `S_n` (Lehmer code), 0-based.
    pub fn rank(&self) -> usize {
        let n = self.n();
        let mut rank = 0;
        for i in 0..n {
            let smaller = self.word[i + 1..]
                .iter()
                .filter(|&&x| x < self.word[i])
                .count();
            rank = rank * (n - i) + smaller;
        }
        rank
    }

    /// Compact form for `n <= 9` (`2413`), comma-separated otherwise.
    pub fn to_compact(&self) -> String {
        if self.n() <= 9 {
            self.word.iter().map(|x| x.to_string()).collect()
        } else {
            self.word.iter().join(",")
        }
    }
}

pub fn pattern_1324() -> Permutation {
    Permutation {
        word: vec![1, 3, 2, 4],
    }
}

pub fn pattern_2143() -> Permutation {
    Permutation {
        word: vec![2, 1, 4, 3],
    }
}

/// `1 2 ... k`.
pub fn increasing_pattern(k: usize) -> Permutation {
    Permutation::identity(k)
}

pub(crate) fn bruhat_leq_raw(x: &[u8], y: &[u8]) -> bool {
    let n = x.len();
    let mut px: Vec<u8> = Vec::with_capacity(n);
    let mut py: Vec<u8> = Vec::with_capacity(n);
    for i in 0..n {
        let a = x[i];
        let pos = px.partition_point(|&e| e < a);
        px.insert(pos, a);
        let b = y[i];
        let pos = py.partition_point(|&e| e < b);
        py.insert(pos, b);
        if px.iter().zip(&py).any(|(a, b)| a > b) {
            return false;
        }
    }
    true
}

fn occurs_from(host: &[u8], pattern: &[u8], start: usize, chosen: &mut Vec<u8>) -> bool {
    let depth = chosen.len();
    if depth == pattern.len() {
        return true;
    }
    let remaining = pattern.len() - depth;
    for p in start..=host.len() - remaining {
        let candidate = host[p];
        // relative order with every earlier pick must match the pattern
        let consistent = chosen
            .iter()
            .zip(pattern)
            .all(|(&c, &q)| (c < candidate) == (q < pattern[depth]));
        if consistent {
            chosen.push(candidate);
            if occurs_from(host, pattern, p + 1, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_compact())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({})", self.to_compact())
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Accepts `2,4,1,3`, `2 4 1 3`, or the compact `2413` when `n <= 9`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let word: Vec<usize> = if s.contains(',') || s.contains(char::is_whitespace) {
            s.split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad permutation entry {t:?}")))
                })
                .collect::<Result<_>>()?
        } else {
            s.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as usize)
                        .ok_or_else(|| Error::Parse(format!("bad permutation {s:?}")))
                })
                .collect::<Result<_>>()?
        };
        Permutation::new(word)
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_compact())
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashSet;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn length_examples() {
        assert_eq!(Permutation::identity(4).length(), 0);
        assert_eq!(p("4321").length(), 6);
        assert_eq!(p("2413").length(), 3);
        for n in 1..8 {
            assert_eq!(Permutation::longest_element(n).length(), n * (n - 1) / 2);
        }
    }

    #[test]
    fn non_inversion_examples() {
        let ni: Vec<_> = p("2413").non_inversions().iter().map(|x| (x.i, x.j)).collect();
        assert_eq!(ni, vec![(1, 2), (1, 4), (3, 4)]);
        assert_eq!(Permutation::identity(5).non_inversions().len(), 10);
        assert!(p("4321").non_inversions().is_empty());
    }

    #[test]
    fn longest_element_examples() {
        assert_eq!(Permutation::longest_element(1), p("1"));
        assert_eq!(Permutation::longest_element(4), p("4321"));
    }

    #[test]
    fn compose_and_inverse() {
        let v = p("2413");
        assert_eq!(v.compose(&Permutation::identity(4)).unwrap(), v);
        assert_eq!(v.inverse(), p("3142"));
        let w0 = Permutation::longest_element(4);
        assert!(w0.compose(&w0).unwrap().is_identity());
        assert!(v.compose(&v.inverse()).unwrap().is_identity());
        assert!(matches!(v.compose(&p("123")), Err(Error::SizeMismatch { .. })));
    }

    #[test]
    fn bruhat_examples() {
        for v in Permutation::all(4) {
            assert!(Permutation::identity(4).bruhat_leq(&v).unwrap());
        }
        assert!(p("2143").bruhat_leq(&p("3412")).unwrap());
        for v in Permutation::all(4) {
            for x in Permutation::all(4) {
                if v.length() > x.length() && v != x {
                    assert!(!v.bruhat_leq(&x).unwrap());
                }
            }
        }
        assert!(p("12").bruhat_leq(&p("123")).is_err());
    }

    /// Transitive closure of `u < u t` with `l(u t) = l(u) + 1`.
    fn bruhat_closure(n: usize) -> HashSet<(Permutation, Permutation)> {
        let perms: Vec<_> = Permutation::all(n).collect();
        let mut rel: HashSet<(Permutation, Permutation)> =
            perms.iter().map(|u| (u.clone(), u.clone())).collect();
        let mut covers = Vec::new();
        for u in &perms {
            for a in 0..n {
                for b in a + 1..n {
                    let mut w = u.word();
                    w.swap(a, b);
                    let t = Permutation::new(w).unwrap();
                    if t.length() == u.length() + 1 {
                        covers.push((u.clone(), t));
                    }
                }
            }
        }
        rel.extend(covers.iter().cloned());
        loop {
            let mut added = false;
            let snapshot: Vec<_> = rel.iter().cloned().collect();
            for (a, b) in &snapshot {
                for (c, d) in &covers {
                    if b == c && rel.insert((a.clone(), d.clone())) {
                        added = true;
                    }
                }
            }
            if !added {
                break;
            }
        }
        rel
    }

    #[test]
    fn bruhat_matches_cover_closure() {
        for n in 1..=4 {
            let rel = bruhat_closure(n);
            for x in Permutation::all(n) {
                for y in Permutation::all(n) {
                    assert_eq!(
                        x.bruhat_leq(&y).unwrap(),
                        rel.contains(&(x.clone(), y.clone())),
                        "{x} {y}"
                    );
                }
            }
        }
    }

    #[test]
    fn pattern_examples() {
        let v = p("2413");
        assert!(!v.contains_pattern(&pattern_1324()).unwrap());
        assert!(!v.contains_pattern(&pattern_2143()).unwrap());
        assert!(p("52143").contains_pattern(&pattern_2143()).unwrap());
        assert!(v.contains_pattern(&v).unwrap());
        assert!(matches!(
            p("21").contains_pattern(&v),
            Err(Error::PatternTooLong { .. })
        ));
    }

    #[test]
    fn delete_entry_examples() {
        let v = p("62785314");
        assert_eq!(v.at(2), 2);
        assert_eq!(v.delete_entry(2).unwrap(), p("5674213"));
        for i in 1..=5 {
            assert_eq!(
                Permutation::identity(5).delete_entry(i).unwrap(),
                Permutation::identity(4)
            );
        }
        assert_eq!(p("2413").delete_entry(1).unwrap(), p("312"));
        assert!(p("2413").delete_entry(5).is_err());
        assert!(p("2413").delete_entry(0).is_err());
    }

    #[test]
    fn maximal_parabolic_examples() {
        assert!(Permutation::identity(4).is_in_maximal_parabolic());
        for n in 2..7 {
            assert!(!Permutation::longest_element(n).is_in_maximal_parabolic());
        }
        assert!(p("2134").is_in_maximal_parabolic());
    }

    #[test]
    fn parse_forms() {
        assert_eq!(p("2,4,1,3"), p("2413"));
        assert_eq!(p("2 4 1 3"), p("2413"));
        let long: Permutation = "6 10 4 7 8 9 5 3 1 2".parse().unwrap();
        assert_eq!(long.n(), 10);
        assert_eq!(long.to_compact(), "6,10,4,7,8,9,5,3,1,2");
        assert!("2213".parse::<Permutation>().is_err());
        assert!("2x13".parse::<Permutation>().is_err());
    }

    #[test]
    fn rank_is_lexicographic_index() {
        for (idx, v) in Permutation::all(5).enumerate() {
            assert_eq!(v.rank(), idx);
        }
    }

    fn lis(word: &[usize]) -> usize {
        let mut best = vec![1; word.len()];
        for i in 0..word.len() {
            for j in 0..i {
                if word[j] < word[i] {
                    best[i] = best[i].max(best[j] + 1);
                }
            }
        }
        best.into_iter().max().unwrap_or(0)
    }

    fn perm_strategy(max_n: usize) -> impl Strategy<Value = Permutation> {
        (1..=max_n)
            .prop_flat_map(|n| Just((1..=n).collect::<Vec<_>>()).prop_shuffle())
            .prop_map(|w| Permutation::new(w).unwrap())
    }

    proptest! {
        #[test]
        fn adjacent_swap_changes_length_by_one(v in perm_strategy(9), s in 1usize..9) {
            prop_assume!(s < v.n());
            let w = v.swap_positions(s);
            prop_assert_eq!(w.length().abs_diff(v.length()), 1);
        }

        #[test]
        fn increasing_pattern_matches_lis(v in perm_strategy(9), k in 1usize..6) {
            prop_assume!(k <= v.n());
            let contains = v.contains_pattern(&increasing_pattern(k)).unwrap();
            prop_assert_eq!(contains, lis(&v.word()) >= k);
        }

        #[test]
        fn deletion_drops_inversions_at_position(v in perm_strategy(9), i in 1usize..10) {
            prop_assume!(i <= v.n());
            let x = v.delete_entry(i).unwrap();
            prop_assert_eq!(x.length(), v.length() - v.inversions_at(i));
        }
    }
}
