//! Dense matrices over the rationals with exact determinants.
//!
//! Matrix indices in the public API are 1-indexed, matching the grids in
//! [`crate::grid`]; [`RationalMatrix::get`] is the one 0-indexed accessor.

mod generate;

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use generate::{
    gen_k_positive_not_higher, gen_totally_positive, generator, generator_names, random_rational,
    CornerShift, KPositiveGenerator, Perturbation, DEFAULT_BUDGET, DEFAULT_GENERATOR,
};

use crate::error::{Error, Result};
use crate::grid::{LabeledGrid, Multiset};

/// Exact rational number: arbitrary-precision numerator and a positive,
/// coprime denominator.
pub type Rational = num_rational::BigRational;

pub fn rational(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// `"p/q"`, or `"p"` for integers.
pub fn format_rational(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = Rational::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let entries = (0..rows)
            .flat_map(|i| (0..cols).map(move |j| (i, j)))
            .map(|(i, j)| f(i, j))
            .collect();
        Self { rows, cols, entries }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Ok(Self::from_fn(r, c, |i, j| rational(rows[i][j])))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// 0-indexed entry.
    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        self.entries[i * self.cols + j] = value;
    }

    /// `m_{i,j}`, 1-indexed.
    pub fn entry(&self, i: usize, j: usize) -> &Rational {
        self.get(i - 1, j - 1)
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &RationalMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::SizeMismatch {
                left: self.cols,
                right: other.rows,
            });
        }
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).map(|k| self.get(i, k) * other.get(k, j)).sum()
        }))
    }

    fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::Shape(format!("{}x{} matrix is not square", self.rows, self.cols)))
        }
    }

    /// Submatrix on the given rows and columns (1-indexed, in the given order).
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Result<Self> {
        for &i in rows {
            check_index(i, self.rows)?;
        }
        for &j in cols {
            check_index(j, self.cols)?;
        }
        Ok(Self::from_fn(rows.len(), cols.len(), |a, b| {
            self.entry(rows[a], cols[b]).clone()
        }))
    }

    /// `M` with rows `rows` and columns `cols` removed (1-indexed).
    pub fn remove(&self, rows: &[usize], cols: &[usize]) -> Result<Self> {
        for &i in rows {
            check_index(i, self.rows)?;
        }
        for &j in cols {
            check_index(j, self.cols)?;
        }
        let keep_r: Vec<usize> = (1..=self.rows).filter(|i| !rows.contains(i)).collect();
        let keep_c: Vec<usize> = (1..=self.cols).filter(|j| !cols.contains(j)).collect();
        self.submatrix(&keep_r, &keep_c)
    }

    /// Integer matrix with every row scaled by its denominators' lcm, and the
    /// product of those scale factors.
    fn cleared(&self) -> (Vec<Vec<BigInt>>, BigInt) {
        let mut scale = BigInt::one();
        let mut out = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let row = &self.entries[i * self.cols..(i + 1) * self.cols];
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            out.push(row.iter().map(|x| x.numer() * (&l / x.denom())).collect());
            scale *= l;
        }
        (out, scale)
    }
}

fn check_index(i: usize, bound: usize) -> Result<()> {
    if i == 0 || i > bound {
        Err(Error::IndexOutOfRange { index: i, bound })
    } else {
        Ok(())
    }
}

/// Exact determinant by Bareiss elimination; the empty matrix has
/// determinant 1.
pub fn det(m: &RationalMatrix) -> Result<Rational> {
    let n = m.require_square()?;
    let (mut a, scale) = m.cleared();
    Ok(Rational::new(bareiss(&mut a, n), scale))
}

fn bareiss(a: &mut [Vec<BigInt>], n: usize) -> BigInt {
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = t / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        return BigInt::one();
    }
    sign * &a[n - 1][n - 1]
}

/// `det M(rows, cols)` for index sets (1-indexed, any order; sorted first).
pub fn minor(m: &RationalMatrix, rows: &[usize], cols: &[usize]) -> Result<Rational> {
    if rows.len() != cols.len() {
        return Err(Error::SizeMismatch {
            left: rows.len(),
            right: cols.len(),
        });
    }
    let mut r = rows.to_vec();
    let mut c = cols.to_vec();
    r.sort_unstable();
    c.sort_unstable();
    if r.windows(2).any(|w| w[0] == w[1]) || c.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Shape("minor index sets must not repeat".into()));
    }
    det(&m.submatrix(&r, &c)?)
}

/// `M|_P`: entries outside `P` replaced by zero.
pub fn restrict(m: &RationalMatrix, p: &LabeledGrid) -> Result<RationalMatrix> {
    let n = m.require_square()?;
    if n != p.n() {
        return Err(Error::SizeMismatch { left: n, right: p.n() });
    }
    Ok(RationalMatrix::from_fn(n, n, |i, j| {
        if p.contains(i + 1, j + 1) {
            m.get(i, j).clone()
        } else {
            Rational::zero()
        }
    }))
}

/// `M(R, C)`: the `(i, j)` entry is `m_{r_i, c_j}`.
pub fn repeat_submatrix(m: &RationalMatrix, r: &Multiset, c: &Multiset) -> Result<RationalMatrix> {
    r.check_universe(m.rows())?;
    c.check_universe(m.cols())?;
    m.submatrix(r.entries(), c.entries())
}

/// The pattern of `X(R, C)`: entry `(i, j)` names the variable
/// `x_{r_i, c_j}` by its index pair.
pub fn symbolic_repeat(r: &Multiset, c: &Multiset) -> Vec<Vec<(usize, usize)>> {
    r.entries()
        .iter()
        .map(|&ri| c.entries().iter().map(|&cj| (ri, cj)).collect())
        .collect()
}

fn all_minors_of_size_positive(m: &RationalMatrix, s: usize) -> bool {
    let n = m.rows();
    let subsets: Vec<Vec<usize>> = (1..=n).combinations(s).collect();
    subsets.iter().all(|rows| {
        subsets
            .iter()
            .all(|cols| minor(m, rows, cols).expect("valid indices").is_positive())
    })
}

/// Every minor of size at most `k` is strictly positive.
pub fn is_k_positive(m: &RationalMatrix, k: usize) -> Result<bool> {
    let n = m.require_square()?;
    if k == 0 || k > n {
        return Err(Error::IndexOutOfRange { index: k, bound: n });
    }
    Ok((1..=k).all(|s| all_minors_of_size_positive(m, s)))
}

/// Largest `k` with `M` `k`-positive, or 0.
pub fn max_positivity_order(m: &RationalMatrix) -> Result<usize> {
    let n = m.require_square()?;
    Ok((1..=n)
        .take_while(|&s| all_minors_of_size_positive(m, s))
        .last()
        .unwrap_or(0))
}

/// `det(M) det(M_{a,a'}^{b,b'}) - [det(M_a^b) det(M_{a'}^{b'}) - det(M_a^{b'}) det(M_{a'}^b)]`.
pub fn lewis_carroll_residual(
    m: &RationalMatrix,
    a: usize,
    a2: usize,
    b: usize,
    b2: usize,
) -> Result<Rational> {
    let n = m.require_square()?;
    if n < 2 {
        return Err(Error::Shape("needs at least a 2x2 matrix".into()));
    }
    for x in [a, a2, b, b2] {
        check_index(x, n)?;
    }
    if a >= a2 || b >= b2 {
        return Err(Error::Precondition(format!(
            "need a < a' and b < b', got ({a}, {a2}, {b}, {b2})"
        )));
    }
    let d = |rows: &[usize], cols: &[usize]| -> Result<Rational> { det(&m.remove(rows, cols)?) };
    let lhs = d(&[], &[])? * d(&[a, a2], &[b, b2])?;
    let rhs = d(&[a], &[b])? * d(&[a2], &[b2])? - d(&[a], &[b2])? * d(&[a2], &[b])?;
    Ok(lhs - rhs)
}

/// `M' = w0 M^T w0`, i.e. `m'_{i,j} = m_{n+1-j, n+1-i}`.
pub fn antidiagonal_transpose(m: &RationalMatrix) -> Result<RationalMatrix> {
    let n = m.require_square()?;
    Ok(RationalMatrix::from_fn(n, n, |i, j| m.get(n - 1 - j, n - 1 - i).clone()))
}

/// `J̄` with `j̄_i = n + 1 - j_{len+1-i}`.
pub fn bar(j: &Multiset, n: usize) -> Multiset {
    j.bar(n)
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.entries.iter().map(format_rational).collect();
        let width = cells.iter().map(String::len).max().unwrap_or(0);
        for i in 0..self.rows {
            let line = (0..self.cols)
                .map(|j| format!("{:>width$}", cells[i * self.cols + j]))
                .join(" ");
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalMatrix {}x{}\n{self}", self.rows, self.cols)
    }
}

#[derive(Serialize)]
struct MatrixOut {
    rows: usize,
    cols: usize,
    entries: Vec<String>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum EntryIn {
    Int(i64),
    Text(String),
    Row(Vec<EntryIn>),
}

#[derive(Deserialize)]
struct MatrixIn {
    rows: usize,
    cols: usize,
    entries: Vec<EntryIn>,
}

fn flatten(entries: Vec<EntryIn>, out: &mut Vec<Rational>) -> Result<()> {
    for e in entries {
        match e {
            EntryIn::Int(x) => out.push(rational(x)),
            EntryIn::Text(s) => out.push(parse_rational(&s)?),
            EntryIn::Row(row) => flatten(row, out)?,
        }
    }
    Ok(())
}

impl Serialize for RationalMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixOut {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(format_rational).collect(),
        }
        .serialize(serializer)
    }
}

/// Accepts entries as a flat row-major list or as nested rows, each entry a
/// string `"p/q"`, `"p"` or a JSON integer.
impl<'de> Deserialize<'de> for RationalMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let doc = MatrixIn::deserialize(deserializer)?;
        let mut entries = Vec::with_capacity(doc.rows * doc.cols);
        flatten(doc.entries, &mut entries).map_err(serde::de::Error::custom)?;
        RationalMatrix::new(doc.rows, doc.cols, entries).map_err(serde::de::Error::custom)
    }
}

impl FromStr for RationalMatrix {
    type Err = Error;

    /// A JSON matrix document.
    fn from_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// The 2-positive 4x4 matrix with negative determinant used throughout the
/// examples.
pub fn example_matrix() -> RationalMatrix {
    RationalMatrix::from_i64_rows(&[&[22, 18, 6, 3], &[8, 7, 3, 2], &[2, 2, 1, 2], &[1, 2, 2, 6]])
        .expect("rectangular")
}
