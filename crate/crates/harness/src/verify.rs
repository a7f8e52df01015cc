//! Independent recomputation used to confirm candidate counterexamples.

use klimm_core::exactmat::{Rational, RationalMatrix};
use klimm_core::klpoly::{KlAlgorithm, RPolynomialInversion};
use klimm_core::{Permutation, Result};
use num_traits::Zero;

/// `Imm_v(M)` summed over all of `S_n`, with KL polynomials from the
/// R-polynomial route and no Bruhat pruning.
pub fn imm_by_r_inversion(v: &Permutation, m: &RationalMatrix, kl: &mut RPolynomialInversion) -> Result<Rational> {
    let n = v.n();
    let w0 = Permutation::longest_element(n);
    let top = w0.compose(v)?;
    let mut total = Rational::zero();
    for w in Permutation::all(n) {
        let coeff = kl.polynomial(&w0.compose(&w)?, &top)?.eval_at_one();
        if coeff.is_zero() {
            continue;
        }
        let mut term = Rational::from_integer(coeff);
        for i in 1..=n {
            term *= m.entry(i, w.at(i));
        }
        if (w.length() + v.length()) % 2 == 1 {
            total -= term;
        } else {
            total += term;
        }
    }
    Ok(total)
}
