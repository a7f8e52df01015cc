//! Kazhdan–Lusztig immanants
//! `Imm_v(M) = Σ_w (-1)^{l(w)-l(v)} P_{w0 w, w0 v}(1) m_{1,w(1)} ⋯ m_{n,w(n)}`
//! and the determinantal shortcut for permutations avoiding 1324 and 2143.

mod checks;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize, Serializer};

pub use checks::{
    deletion_det_identity, inversions_equal_complement_boxes, lewis_carroll_sign_probe,
    sign_probe_row, sign_theorem_check, young_complement_sign_check, young_sign_check, ClaimStatus, DeletionReport,
    SignProbeReport, SignTheoremOutcome, YoungSignOutcome,
};

use crate::error::{Error, Result};
use crate::exactmat::{det, format_rational, repeat_submatrix, restrict, Rational, RationalMatrix};
use crate::grid::{block_antidiagonal_split, graph_of_upper_interval, Multiset};
use crate::klpoly::KlCache;
use crate::perm::Permutation;

/// Largest `n` accepted by [`imm_definition`].
pub const DEFINITION_MAX_N: usize = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Definition,
    Determinantal,
    Factored,
}

/// One evaluation of `Imm_v M(R, C)` together with the grid data that
/// governs its sign.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ImmanantResult {
    pub v: Permutation,
    #[serde(rename = "R")]
    pub r: Multiset,
    #[serde(rename = "C")]
    pub c: Multiset,
    pub method: Method,
    #[serde(serialize_with = "rational_as_string")]
    pub value: Rational,
    pub admissible: bool,
    pub largest_square: usize,
    pub length_v: usize,
}

fn rational_as_string<S: Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(x))
}

fn sign_of_length(v: &Permutation) -> Rational {
    if v.length() % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

fn check_square(v: &Permutation, m: &RationalMatrix) -> Result<()> {
    if m.rows() != v.n() || m.cols() != v.n() {
        return Err(Error::Shape(format!(
            "{}x{} matrix for a permutation of size {}",
            m.rows(),
            m.cols(),
            v.n()
        )));
    }
    Ok(())
}

fn require_avoidance(v: &Permutation) -> Result<()> {
    match v.forbidden_pattern() {
        Some(p) => Err(Error::PatternPrecondition {
            v: v.to_string(),
            pattern: p.to_string(),
        }),
        None => Ok(()),
    }
}

/// `Imm_v(M)` straight from the defining sum. Only `w` with `w0 w <= w0 v`
/// contribute, so the sum runs over that lower interval.
pub fn imm_definition(v: &Permutation, m: &RationalMatrix, cache: &mut KlCache) -> Result<Rational> {
    let n = v.n();
    if n > DEFINITION_MAX_N {
        return Err(Error::CostGuard {
            n,
            max: DEFINITION_MAX_N,
        });
    }
    check_square(v, m)?;
    let w0 = Permutation::longest_element(n);
    let top = w0.compose(v)?;
    let lv = v.length();
    let mut total = Rational::zero();
    for x in Permutation::all(n) {
        if !x.bruhat_leq(&top)? {
            continue;
        }
        let coeff = cache.polynomial(&x, &top)?.eval_at_one();
        if coeff.is_zero() {
            continue;
        }
        let w = w0.compose(&x)?;
        let mut term = Rational::from_integer(coeff);
        for i in 1..=n {
            term *= m.entry(i, w.at(i));
            if term.is_zero() {
                break;
            }
        }
        if (w.length() + lv) % 2 == 1 {
            total -= term;
        } else {
            total += term;
        }
    }
    Ok(total)
}

/// `(-1)^{l(v)} det(M|Γ[v, w0])`, valid when `v` avoids 1324 and 2143.
pub fn imm_determinantal(v: &Permutation, m: &RationalMatrix) -> Result<Rational> {
    require_avoidance(v)?;
    check_square(v, m)?;
    Ok(sign_of_length(v) * det(&restrict(m, &graph_of_upper_interval(v))?)?)
}

/// Product of the immanants of the two antidiagonal blocks, recursing while
/// the blocks split further.
pub fn factor_block_antidiagonal(v: &Permutation, m: &RationalMatrix) -> Result<Rational> {
    require_avoidance(v)?;
    check_square(v, m)?;
    let split = block_antidiagonal_split(v)
        .ok_or_else(|| Error::Precondition(format!("Γ[{v}, w0] is not block-antidiagonal")))?;
    let (n, j) = (v.n(), split.j);
    let upper = m.submatrix(&(1..=n - j).collect::<Vec<_>>(), &(j + 1..=n).collect::<Vec<_>>())?;
    let lower = m.submatrix(&(n - j + 1..=n).collect::<Vec<_>>(), &(1..=j).collect::<Vec<_>>())?;
    Ok(factored_or_direct(&split.upper_right, &upper)? * factored_or_direct(&split.lower_left, &lower)?)
}

fn factored_or_direct(v: &Permutation, m: &RationalMatrix) -> Result<Rational> {
    if block_antidiagonal_split(v).is_some() {
        factor_block_antidiagonal(v, m)
    } else {
        imm_determinantal(v, m)
    }
}

/// `Imm_v M(R, C) = (-1)^{l(v)} det M(R, C)|Γ[v, w0]`, with the admissibility
/// and largest-square data of `Γ[v, w0]` under labels `(R, C)`.
pub fn dual_canonical_eval(v: &Permutation, r: &Multiset, c: &Multiset, m: &RationalMatrix) -> Result<ImmanantResult> {
    require_avoidance(v)?;
    let sub = labeled_submatrix(v, r, c, m)?;
    let value = imm_determinantal(v, &sub)?;
    Ok(result(v, r, c, Method::Determinantal, value))
}

/// `M(R, C)` after checking that `R`, `C` have size `n` and labels in range.
pub fn labeled_submatrix(v: &Permutation, r: &Multiset, c: &Multiset, m: &RationalMatrix) -> Result<RationalMatrix> {
    for labels in [r, c] {
        if labels.len() != v.n() {
            return Err(Error::SizeMismatch {
                left: labels.len(),
                right: v.n(),
            });
        }
    }
    repeat_submatrix(m, r, c)
}

/// Packages a value with the grid data of `Γ[v, w0]` labeled by `(R, C)`.
pub fn result(v: &Permutation, r: &Multiset, c: &Multiset, method: Method, value: Rational) -> ImmanantResult {
    let grid = graph_of_upper_interval(v);
    let admissible = grid
        .clone()
        .with_labels(r.clone(), c.clone())
        .map(|g| g.is_admissible())
        .unwrap_or(false);
    ImmanantResult {
        v: v.clone(),
        r: r.clone(),
        c: c.clone(),
        method,
        value,
        admissible,
        largest_square: grid.largest_square(),
        length_v: v.length(),
    }
}

/// A way of evaluating `Imm_v` on an `n × n` matrix.
pub trait ImmanantMethod: Send {
    fn name(&self) -> &'static str;

    fn method(&self) -> Method;

    fn evaluate(&mut self, v: &Permutation, m: &RationalMatrix) -> Result<Rational>;
}

#[derive(Default)]
pub struct Definition {
    pub cache: KlCache,
}

impl ImmanantMethod for Definition {
    fn name(&self) -> &'static str {
        "definition"
    }

    fn method(&self) -> Method {
        Method::Definition
    }

    fn evaluate(&mut self, v: &Permutation, m: &RationalMatrix) -> Result<Rational> {
        imm_definition(v, m, &mut self.cache)
    }
}

pub struct Determinantal;

impl ImmanantMethod for Determinantal {
    fn name(&self) -> &'static str {
        "determinantal"
    }

    fn method(&self) -> Method {
        Method::Determinantal
    }

    fn evaluate(&mut self, v: &Permutation, m: &RationalMatrix) -> Result<Rational> {
        imm_determinantal(v, m)
    }
}

pub struct Factored;

impl ImmanantMethod for Factored {
    fn name(&self) -> &'static str {
        "factored"
    }

    fn method(&self) -> Method {
        Method::Factored
    }

    fn evaluate(&mut self, v: &Permutation, m: &RationalMatrix) -> Result<Rational> {
        factor_block_antidiagonal(v, m)
    }
}

type Constructor = fn() -> Box<dyn ImmanantMethod>;

const METHODS: &[(&str, Constructor)] = &[
    ("definition", || Box::<Definition>::default()),
    ("determinantal", || Box::new(Determinantal)),
    ("det", || Box::new(Determinantal)),
    ("factored", || Box::new(Factored)),
];

/// Looks up an evaluation method by name (`det` is short for
/// `determinantal`).
pub fn method(name: &str) -> Option<Box<dyn ImmanantMethod>> {
    METHODS.iter().find(|(n, _)| *n == name).map(|(_, make)| make())
}

pub fn method_names() -> Vec<&'static str> {
    METHODS.iter().map(|(n, _)| *n).collect()
}

/// A random `rows × cols` matrix with entries `p/q`, `|p| <= 10^6`,
/// `1 <= q <= 10^6`, for identity testing by evaluation.
pub fn random_test_matrix(rows: usize, cols: usize, rng: &mut impl Rng) -> RationalMatrix {
    RationalMatrix::from_fn(rows, cols, |_, _| {
        Rational::new(
            BigInt::from(rng.gen_range(-1_000_000i64..=1_000_000)),
            BigInt::from(rng.gen_range(1i64..=1_000_000)),
        )
    })
}

/// True when `Imm_v X(R, C)` vanishes at `trials` random rational points,
/// i.e. (with overwhelming probability) vanishes identically.
pub fn vanishes_identically(
    v: &Permutation,
    r: &Multiset,
    c: &Multiset,
    m_size: usize,
    trials: usize,
    rng: &mut impl Rng,
    cache: &mut KlCache,
) -> Result<bool> {
    for _ in 0..trials {
        let x = random_test_matrix(m_size, m_size, rng);
        let sub = labeled_submatrix(v, r, c, &x)?;
        if !imm_definition(v, &sub, cache)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}
