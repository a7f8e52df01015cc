use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use super::{labeled_submatrix, require_avoidance, sign_of_length};
use crate::error::{Error, Result};
use crate::exactmat::{det, format_rational, is_k_positive, repeat_submatrix, restrict, Rational, RationalMatrix};
use crate::grid::{
    bounding_boxes, complement_young_shape, deletion_region, durfee, graph_of_upper_interval, spanning_corners,
    young_shape, LabeledGrid, Multiset, YoungDiagram,
};
use crate::perm::Permutation;

fn as_string<S: Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(x))
}

fn parity_sign(k: usize) -> Rational {
    if k % 2 == 0 {
        Rational::from_integer(1.into())
    } else {
        Rational::from_integer((-1).into())
    }
}

/// Checks that `m` is `k`-positive, reading `k` as `min(k, size)`; `k = 0`
/// asks for nothing.
fn require_positivity(m: &RationalMatrix, k: usize) -> Result<()> {
    let k_eff = k.min(m.rows());
    if k_eff == 0 || is_k_positive(m, k_eff)? {
        Ok(())
    } else {
        Err(Error::PositivityPrecondition { k })
    }
}

fn labeled(grid: LabeledGrid, r: &Multiset, c: &Multiset) -> Result<LabeledGrid> {
    grid.with_labels(r.clone(), c.clone())
}

/// The three statements about deleting `(i, v_i)` from `Γ[v, w0]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeletionReport {
    /// `v` with `v_i` deleted and the rest standardized.
    pub x: Permutation,
    pub spanning_corner: bool,
    /// `Γ[x, w0]` is `Γ[v, w0]` minus the cells sandwiched only by
    /// non-inversions involving `i`, then row `i` and column `v_i` deleted.
    pub region_removal: bool,
    /// `Γ[x, w0] = Γ[v, w0]_i^{v_i}`; only claimed when `(i, v_i)` is not a
    /// spanning corner.
    pub plain_deletion: Option<bool>,
    /// `det(M|Γ[x, w0]) = det(M|Γ[v, w0]_i^{v_i})`.
    pub determinants_equal: bool,
}

impl DeletionReport {
    pub fn holds(&self) -> bool {
        self.region_removal && self.plain_deletion != Some(false) && self.determinants_equal
    }
}

/// Deleting entry `i` of `v`, checked on an `(n-1) × (n-1)` matrix `m`.
pub fn deletion_det_identity(v: &Permutation, i: usize, m: &RationalMatrix) -> Result<DeletionReport> {
    require_avoidance(v)?;
    let n = v.n();
    if m.rows() + 1 != n || m.cols() + 1 != n {
        return Err(Error::Shape(format!(
            "expected a {0}x{0} matrix, got {1}x{2}",
            n.saturating_sub(1),
            m.rows(),
            m.cols()
        )));
    }
    let x = v.delete_entry(i)?;
    let gv = graph_of_upper_interval(v);
    let gx = graph_of_upper_interval(&x);
    let vi = v.at(i);
    let deleted = gv.delete_row_col(i, vi);
    let q = deletion_region(v, i)?;
    let spanning_corner = spanning_corners(v).contains(&(i, vi));
    let region_removal = gv.difference(&q).delete_row_col(i, vi).same_cells(&gx);
    let plain_deletion = (!spanning_corner).then(|| deleted.same_cells(&gx));
    let determinants_equal = det(&restrict(m, &gx)?)? == det(&restrict(m, &deleted)?)?;
    Ok(DeletionReport {
        x,
        spanning_corner,
        region_removal,
        plain_deletion,
        determinants_equal,
    })
}

/// Outcome of a sign law `ε · det(...) >= 0` with a predicted zero set.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct YoungSignOutcome {
    /// The determinant times the predicted sign.
    #[serde(serialize_with = "as_string")]
    pub value: Rational,
    pub admissible: bool,
    pub expected_zero: bool,
    pub holds: bool,
}

fn sign_outcome(value: Rational, admissible: bool, expected_zero: bool) -> YoungSignOutcome {
    let holds = !value.is_negative() && value.is_zero() == expected_zero;
    YoungSignOutcome {
        value,
        admissible,
        expected_zero,
        holds,
    }
}

fn check_labels(r: &Multiset, c: &Multiset) -> Result<usize> {
    if r.len() != c.len() {
        return Err(Error::SizeMismatch {
            left: r.len(),
            right: c.len(),
        });
    }
    Ok(r.len())
}

/// `(-1)^{|μ|} det M(R, C)|_λ >= 0` with `μ = n^n / λ`, zero exactly when
/// `λ` misses the staircase `(n, …, 1)` or is not `(R, C)`-admissible.
pub fn young_sign_check(
    lambda: &YoungDiagram,
    r: &Multiset,
    c: &Multiset,
    m: &RationalMatrix,
    k: usize,
) -> Result<YoungSignOutcome> {
    let n = check_labels(r, c)?;
    if durfee(lambda) > k {
        return Err(Error::Precondition(format!(
            "Durfee square of {lambda} exceeds {k}"
        )));
    }
    require_positivity(m, k)?;
    let grid = labeled(lambda.to_grid(n)?, r, c)?;
    let value = parity_sign(n * n - lambda.size()) * det(&restrict(&repeat_submatrix(m, r, c)?, &grid)?)?;
    let admissible = grid.is_admissible();
    let expected_zero = !lambda.contains(&YoungDiagram::staircase(n)) || !admissible;
    Ok(sign_outcome(value, admissible, expected_zero))
}

/// `(-1)^{|λ|} det M(R, C)|_μ >= 0` for the skew shape `μ = n^n / λ`, zero
/// exactly when `λ ⊄ (n-1, …, 1, 0)` or `μ` is not `(R, C)`-admissible.
pub fn young_complement_sign_check(
    lambda: &YoungDiagram,
    r: &Multiset,
    c: &Multiset,
    m: &RationalMatrix,
    k: usize,
) -> Result<YoungSignOutcome> {
    let n = check_labels(r, c)?;
    let mu = labeled(lambda.complement_grid(n)?, r, c)?;
    if mu.largest_square() > k {
        return Err(Error::Precondition(format!(
            "largest square of {n}^{n}/{lambda} exceeds {k}"
        )));
    }
    require_positivity(m, k)?;
    let value = parity_sign(lambda.size()) * det(&restrict(&repeat_submatrix(m, r, c)?, &mu)?)?;
    let admissible = mu.is_admissible();
    let expected_zero = !YoungDiagram::staircase(n.saturating_sub(1)).contains(lambda) || !admissible;
    Ok(sign_outcome(value, admissible, expected_zero))
}

/// For `v` whose `Γ[v, w0]` is a Young diagram or the complement of one, the
/// number of missing cells equals `l(v)`.
pub fn inversions_equal_complement_boxes(v: &Permutation) -> Result<bool> {
    require_avoidance(v)?;
    let g = graph_of_upper_interval(v);
    if young_shape(&g).is_none() && complement_young_shape(&g).is_none() {
        return Err(Error::Shape(format!("Γ[{v}, w0] is not a Young diagram or its complement")));
    }
    let n = v.n();
    Ok(n * n - g.len() == v.length())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SignTheoremOutcome {
    /// `(-1)^{l(v)} det M(R, C)|Γ[v, w0]`.
    #[serde(serialize_with = "as_string")]
    pub value: Rational,
    pub admissible: bool,
    pub k: usize,
    pub holds: bool,
}

/// `(-1)^{l(v)} det M(R, C)|Γ[v, w0]` is positive when `Γ[v, w0]` is
/// `(R, C)`-admissible and zero otherwise, for `M` `k`-positive with `k` the
/// largest square of `Γ[v, w0]`.
pub fn sign_theorem_check(v: &Permutation, r: &Multiset, c: &Multiset, m: &RationalMatrix) -> Result<SignTheoremOutcome> {
    require_avoidance(v)?;
    let grid = graph_of_upper_interval(v);
    let k = grid.largest_square();
    let sub = labeled_submatrix(v, r, c, m)?;
    require_positivity(m, k)?;
    let grid = labeled(grid, r, c)?;
    let value = sign_of_length(v) * det(&restrict(&sub, &grid)?)?;
    let admissible = grid.is_admissible();
    let holds = if admissible { value.is_positive() } else { value.is_zero() };
    Ok(SignTheoremOutcome {
        value,
        admissible,
        k,
        holds,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ClaimStatus {
    Satisfied,
    Violated,
    /// The quantity is zero, so there is no sign to compare.
    Vacuous,
}

fn claim(value: &Rational, expected_sign: i8) -> ClaimStatus {
    if value.is_zero() {
        ClaimStatus::Vacuous
    } else if (value.is_positive() && expected_sign > 0) || (value.is_negative() && expected_sign < 0) {
        ClaimStatus::Satisfied
    } else {
        ClaimStatus::Violated
    }
}

/// Signs of the Lewis Carroll terms for `A = M(R, C)|Γ[v, w0]` on rows
/// `a, b = v⁻¹(1)` and columns `1, d = v_a`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SignProbeReport {
    pub v: Permutation,
    pub a: usize,
    pub b: usize,
    pub d: usize,
    /// Sign of `det A_b^1 · det A_a^d`.
    pub sigma: i8,
    /// `det A_a^1 · det A_b^d` has sign `-σ`.
    pub opposite_term: ClaimStatus,
    /// `det A_{a,b}^{1,d}` has sign `-σ (-1)^{l(v)}`, the sign forced by
    /// `det A · det A_{a,b}^{1,d} = det A_a^1 det A_b^d - det A_b^1 det A_a^d`
    /// once the other two claims hold.
    pub double_deletion: ClaimStatus,
    /// The same minor against `σ (-1)^{l(v)}`, as the claim is usually
    /// printed; informational only.
    pub double_deletion_as_printed: ClaimStatus,
    /// `det A` has sign `(-1)^{l(v)}`.
    pub determinant: ClaimStatus,
}

impl SignProbeReport {
    pub fn violated(&self) -> bool {
        [self.opposite_term, self.double_deletion, self.determinant].contains(&ClaimStatus::Violated)
    }
}

/// Row `a` of the second-to-last bounding box when the last box is
/// `B(n, v_n)` and the one before is `B(a, v_a)` with `a < n`,
/// `1 < v_a < v_n`.
pub fn sign_probe_row(v: &Permutation) -> Option<usize> {
    let n = v.n();
    let boxes = bounding_boxes(v);
    let [.., before, last] = boxes.as_slice() else {
        return None;
    };
    if !last.corners.contains(&(n, v.at(n))) {
        return None;
    }
    before
        .corners
        .iter()
        .find(|&&(a, va)| a < n && 1 < va && va < v.at(n))
        .map(|&(a, _)| a)
}

/// Reports the sign claims used in the inductive step; a zero reference
/// product is a precondition failure, not a violation.
pub fn lewis_carroll_sign_probe(v: &Permutation, r: &Multiset, c: &Multiset, m: &RationalMatrix) -> Result<SignProbeReport> {
    require_avoidance(v)?;
    let a = sign_probe_row(v).ok_or_else(|| {
        Error::Precondition(format!("the last two bounding boxes of Γ[{v}, w0] do not have the required shape"))
    })?;
    let b = v.inverse().at(1);
    let d = v.at(a);
    let sub = labeled_submatrix(v, r, c, m)?;
    let restricted = restrict(&sub, &graph_of_upper_interval(v))?;
    let minor = |rows: &[usize], cols: &[usize]| -> Result<Rational> { det(&restricted.remove(rows, cols)?) };
    let reference = minor(&[b], &[1])? * minor(&[a], &[d])?;
    if reference.is_zero() {
        return Err(Error::Precondition(format!(
            "reference product det A_b^1 · det A_a^d vanishes for {v}"
        )));
    }
    let sigma: i8 = if reference.is_positive() { 1 } else { -1 };
    let ell: i8 = if v.length() % 2 == 0 { 1 } else { -1 };
    let other = minor(&[a], &[1])? * minor(&[b], &[d])?;
    let double = minor(&[a, b], &[1, d])?;
    let whole = det(&restricted)?;
    Ok(SignProbeReport {
        v: v.clone(),
        a,
        b,
        d,
        sigma,
        opposite_term: claim(&other, -sigma),
        double_deletion: claim(&double, -sigma * ell),
        double_deletion_as_printed: claim(&double, sigma * ell),
        determinant: claim(&whole, ell),
    })
}
