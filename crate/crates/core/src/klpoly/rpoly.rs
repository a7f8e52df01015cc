use std::collections::HashMap;

use super::{IntPolynomial, KlAlgorithm};
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Kazhdan–Lusztig polynomials from R-polynomials, via
/// `q^{l(x,w)} P_{x,w}(1/q) - P_{x,w}(q) = sum_{x < z <= w} R_{x,z} P_{z,w}`
/// and the degree bound `deg P_{x,w} <= (l(x,w) - 1) / 2`.
///
/// Works on plain permutations with its own memo tables and shares nothing
/// with the descent recursion.
#[derive(Default)]
pub struct RPolynomialInversion {
    r_memo: HashMap<(Permutation, Permutation), IntPolynomial>,
    p_memo: HashMap<(Permutation, Permutation), IntPolynomial>,
}

impl RPolynomialInversion {
    /// `R_{x,w}(q)`.
    pub fn r_polynomial(&mut self, x: &Permutation, w: &Permutation) -> IntPolynomial {
        let key = (x.clone(), w.clone());
        if let Some(r) = self.r_memo.get(&key) {
            return r.clone();
        }
        let result = if !x.bruhat_leq(w).unwrap_or(false) {
            IntPolynomial::zero()
        } else if x == w {
            IntPolynomial::one()
        } else {
            let s = (1..w.n()).find(|&s| w.has_right_descent(s)).unwrap();
            let ws = w.swap_positions(s);
            let xs = x.swap_positions(s);
            if x.has_right_descent(s) {
                self.r_polynomial(&xs, &ws)
            } else {
                // (q - 1) R_{x,ws} + q R_{xs,ws}
                let a = self.r_polynomial(x, &ws);
                let b = self.r_polynomial(&xs, &ws);
                &(&a.shift(1) - &a) + &b.shift(1)
            }
        };
        self.r_memo.insert(key, result.clone());
        result
    }

    fn kl(&mut self, x: &Permutation, w: &Permutation) -> IntPolynomial {
        let key = (x.clone(), w.clone());
        if let Some(p) = self.p_memo.get(&key) {
            return p.clone();
        }
        let result = if !x.bruhat_leq(w).unwrap_or(false) {
            IntPolynomial::zero()
        } else if x == w {
            IntPolynomial::one()
        } else {
            let span = w.length() - x.length();
            let mut sum = IntPolynomial::zero();
            for z in Permutation::all(x.n()) {
                if z == *x || !x.bruhat_leq(&z).unwrap() || !z.bruhat_leq(w).unwrap() {
                    continue;
                }
                let r = self.r_polynomial(x, &z);
                let p = self.kl(&z, w);
                sum = &sum + &(&r * &p);
            }
            -&sum.truncate((span - 1) / 2)
        };
        self.p_memo.insert(key, result.clone());
        result
    }
}

impl KlAlgorithm for RPolynomialInversion {
    fn name(&self) -> &'static str {
        "r-inversion"
    }

    fn polynomial(&mut self, x: &Permutation, y: &Permutation) -> Result<IntPolynomial> {
        if x.n() != y.n() {
            return Err(Error::SizeMismatch {
                left: x.n(),
                right: y.n(),
            });
        }
        Ok(self.kl(x, y))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn r_polynomial_small_cases() {
        let mut alg = RPolynomialInversion::default();
        let id = Permutation::identity(3);
        let s1: Permutation = "213".parse().unwrap();
        let w0 = Permutation::longest_element(3);
        // R_{e,s} = q - 1
        assert_eq!(alg.r_polynomial(&id, &s1), IntPolynomial::from_i64s(&[-1, 1]));
        // R_{e,w0} in S_3 = (q - 1)^3 + q(q - 1)
        assert_eq!(alg.r_polynomial(&id, &w0), IntPolynomial::from_i64s(&[-1, 2, -2, 1]));
    }
}
