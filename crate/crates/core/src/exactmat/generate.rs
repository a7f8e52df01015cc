use itertools::Itertools;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{det, is_k_positive, ratio, Rational, RationalMatrix};
use crate::error::{Error, Result};

/// Trials allowed by [`gen_k_positive_not_higher`] before giving up.
pub const DEFAULT_BUDGET: usize = 10_000;

/// Registry name of the generator used by [`gen_k_positive_not_higher`].
pub const DEFAULT_GENERATOR: &str = "corner-shift";

/// A random positive rational `p/q` with `1 <= p <= max_num`, `1 <= q <= max_den`.
pub fn random_rational(rng: &mut impl Rng, max_num: i64, max_den: i64) -> Rational {
    ratio(rng.gen_range(1..=max_num), rng.gen_range(1..=max_den))
}

fn elementary(n: usize, row: usize, col: usize, value: Rational) -> RationalMatrix {
    let mut e = RationalMatrix::identity(n);
    e.set(row, col, value);
    e
}

/// Reduced word `s_1 … s_{n-1} s_1 … s_{n-2} … s_1` for the longest element
/// (0-indexed generators).
fn longest_word(n: usize) -> Vec<usize> {
    (1..n).rev().flat_map(|j| 0..j).collect()
}

fn totally_positive(n: usize, rng: &mut impl Rng) -> RationalMatrix {
    let word = longest_word(n);
    let mut m = RationalMatrix::identity(n);
    for &i in &word {
        m = m.mul(&elementary(n, i + 1, i, random_rational(rng, 9, 4))).expect("square");
    }
    let diag = RationalMatrix::from_fn(n, n, |i, j| {
        if i == j {
            random_rational(rng, 9, 4)
        } else {
            Rational::zero()
        }
    });
    m = m.mul(&diag).expect("square");
    for &i in word.iter().rev() {
        m = m.mul(&elementary(n, i, i + 1, random_rational(rng, 9, 4))).expect("square");
    }
    m
}

/// A totally positive `n × n` matrix: lower bidiagonal factors along a
/// reduced word of the longest element, a positive diagonal, then upper
/// bidiagonal factors, all parameters positive rationals from `seed`.
pub fn gen_totally_positive(n: usize, seed: u64) -> RationalMatrix {
    totally_positive(n, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn is_sharp(m: &RationalMatrix, k: usize) -> bool {
    is_k_positive(m, k).expect("k in range") && !is_k_positive(m, k + 1).expect("k + 1 in range")
}

/// A way of producing matrices that are `k`-positive but not `(k+1)`-positive.
/// Every returned matrix has been checked exactly.
pub trait KPositiveGenerator: Send + Sync {
    fn name(&self) -> &'static str;

    fn generate(&self, n: usize, k: usize, seed: u64, budget: usize) -> Option<RationalMatrix>;
}

/// Perturbs a totally positive matrix entrywise by rationals of magnitude at
/// most a tenth of its smallest entry and keeps the first exact hit.
pub struct Perturbation;

impl KPositiveGenerator for Perturbation {
    fn name(&self) -> &'static str {
        "perturbation"
    }

    fn generate(&self, n: usize, k: usize, seed: u64, budget: usize) -> Option<RationalMatrix> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..budget {
            let t = totally_positive(n, &mut rng);
            let smallest = t.entries().iter().min().expect("nonempty").clone();
            let delta = smallest / Rational::from_integer(10.into());
            let mut m = t;
            for i in 0..n {
                for j in 0..n {
                    let u = ratio(rng.gen_range(-1000..=1000), 1000);
                    let e = m.get(i, j) + &delta * u;
                    m.set(i, j, e);
                }
            }
            if is_sharp(&m, k) {
                return Some(m);
            }
        }
        None
    }
}

/// Lowers the `(1,1)` entry of a totally positive `T` by `t`.
///
/// A minor through `(1,1)` becomes `det T[α,β] - t det T[α∖1,β∖1]`, so it
/// stays positive exactly while `t` is below the ratio of those two
/// determinants; all other minors are untouched. `t` is taken halfway between
/// the smallest ratio over sizes `<= k` and the smallest ratio at size `k+1`.
pub struct CornerShift;

impl CornerShift {
    fn smallest_ratio(t: &RationalMatrix, s: usize) -> Rational {
        let n = t.rows();
        let through_first: Vec<Vec<usize>> = (2..=n)
            .combinations(s - 1)
            .map(|rest| std::iter::once(1).chain(rest).collect())
            .collect();
        let mut best: Option<Rational> = None;
        for rows in &through_first {
            for cols in &through_first {
                let full = det(&t.submatrix(rows, cols).expect("in range")).expect("square");
                let inner = det(&t.submatrix(&rows[1..], &cols[1..]).expect("in range")).expect("square");
                let r = full / inner;
                if best.as_ref().is_none_or(|b| r < *b) {
                    best = Some(r);
                }
            }
        }
        best.expect("at least one minor")
    }
}

impl KPositiveGenerator for CornerShift {
    fn name(&self) -> &'static str {
        "corner-shift"
    }

    fn generate(&self, n: usize, k: usize, seed: u64, budget: usize) -> Option<RationalMatrix> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..budget {
            let t = totally_positive(n, &mut rng);
            let low = (1..=k).map(|s| Self::smallest_ratio(&t, s)).min().expect("k >= 1");
            let high = Self::smallest_ratio(&t, k + 1);
            if high >= low || !high.is_positive() {
                continue;
            }
            let shift = (low + high) / Rational::from_integer(2.into());
            let mut m = t;
            let corner = m.get(0, 0) - shift;
            m.set(0, 0, corner);
            if is_sharp(&m, k) {
                return Some(m);
            }
        }
        None
    }
}

type Constructor = fn() -> Box<dyn KPositiveGenerator>;

const GENERATORS: &[(&str, Constructor)] = &[
    ("perturbation", || Box::new(Perturbation)),
    ("corner-shift", || Box::new(CornerShift)),
];

pub fn generator(name: &str) -> Option<Box<dyn KPositiveGenerator>> {
    GENERATORS.iter().find(|(n, _)| *n == name).map(|(_, make)| make())
}

pub fn generator_names() -> Vec<&'static str> {
    GENERATORS.iter().map(|(n, _)| *n).collect()
}

/// A matrix that is `k`-positive with some `(k+1)`-minor `<= 0`, from the
/// default generator; `None` when the budget runs out.
pub fn gen_k_positive_not_higher(n: usize, k: usize, seed: u64, budget: usize) -> Result<Option<RationalMatrix>> {
    if k == 0 || k >= n {
        return Err(Error::PositivityPrecondition { k });
    }
    let g = generator(DEFAULT_GENERATOR).expect("default generator is registered");
    Ok(g.generate(n, k, seed, budget))
}
