//! Kazhdan–Lusztig polynomials `P_{x,y}(q)` for the symmetric group.
//!
//! [`KlCache`] memoizes the classical descent recursion over the Bruhat
//! order and can be persisted to disk per `n`. A cache is used by one writer
//! at a time (`&mut`); parallel sweeps clone a prewarmed cache per worker.
//! [`RPolynomialInversion`] is an independent route through the
//! R-polynomials, used to cross-check the recursion.

mod cache;
mod poly;
mod rpoly;

use num_bigint::BigInt;

pub use cache::{CacheHeader, KlCache, CACHE_FORMAT_VERSION};
pub use poly::IntPolynomial;
pub use rpoly::RPolynomialInversion;

use crate::error::Result;
use crate::perm::Permutation;

/// `P_{x,y}(q)`; the zero polynomial when `x` is not below `y`.
pub fn kl_polynomial(x: &Permutation, y: &Permutation, cache: &mut KlCache) -> Result<IntPolynomial> {
    cache.polynomial(x, y)
}

/// `P_{x,y}(1)`.
pub fn kl_at_one(x: &Permutation, y: &Permutation, cache: &mut KlCache) -> Result<BigInt> {
    Ok(cache.polynomial(x, y)?.eval_at_one())
}

/// A way of computing Kazhdan–Lusztig polynomials.
pub trait KlAlgorithm: Send {
    fn name(&self) -> &'static str;

    fn polynomial(&mut self, x: &Permutation, y: &Permutation) -> Result<IntPolynomial>;
}

/// Descent recursion with memoization (the production path).
#[derive(Default)]
pub struct DescentRecursion {
    pub cache: KlCache,
}

impl KlAlgorithm for DescentRecursion {
    fn name(&self) -> &'static str {
        "descent"
    }

    fn polynomial(&mut self, x: &Permutation, y: &Permutation) -> Result<IntPolynomial> {
        self.cache.polynomial(x, y)
    }
}

type Constructor = fn() -> Box<dyn KlAlgorithm>;

const ALGORITHMS: &[(&str, Constructor)] = &[
    ("descent", || Box::<DescentRecursion>::default()),
    ("r-inversion", || Box::<RPolynomialInversion>::default()),
];

/// Instantiates a registered algorithm by name.
pub fn algorithm(name: &str) -> Option<Box<dyn KlAlgorithm>> {
    ALGORITHMS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, make)| make())
}

pub fn algorithm_names() -> Vec<&'static str> {
    ALGORITHMS.iter().map(|(n, _)| *n).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn diagonal_and_incomparable() {
        let mut cache = KlCache::new();
        for v in Permutation::all(4) {
            assert_eq!(kl_polynomial(&v, &v, &mut cache).unwrap(), IntPolynomial::one());
        }
        let zero = kl_polynomial(&p("4321"), &p("1234"), &mut cache).unwrap();
        assert!(zero.is_zero());
        assert_eq!(kl_at_one(&p("4321"), &p("1234"), &mut cache).unwrap(), BigInt::from(0));
        assert!(matches!(
            kl_polynomial(&p("12"), &p("123"), &mut cache),
            Err(Error::SizeMismatch { .. })
        ));
    }

    #[test]
    fn singular_pair_in_s4() {
        let mut cache = KlCache::new();
        let poly = kl_polynomial(&p("1324"), &p("3412"), &mut cache).unwrap();
        assert_eq!(poly, IntPolynomial::from_i64s(&[1, 1]));
        assert_eq!(kl_at_one(&p("1324"), &p("3412"), &mut cache).unwrap(), BigInt::from(2));
        // the other classical singular locus in S_4
        let poly = kl_polynomial(&p("2143"), &p("4231"), &mut cache).unwrap();
        assert_eq!(poly, IntPolynomial::from_i64s(&[1, 1]));
    }

    #[test]
    fn registry_routes_agree_on_s4() {
        assert_eq!(algorithm_names(), vec!["descent", "r-inversion"]);
        let mut a = algorithm("descent").unwrap();
        let mut b = algorithm("r-inversion").unwrap();
        for x in Permutation::all(4) {
            for y in Permutation::all(4) {
                assert_eq!(a.polynomial(&x, &y).unwrap(), b.polynomial(&x, &y).unwrap(), "{x} {y}");
            }
        }
        assert!(algorithm("nope").is_none());
    }

    #[test]
    fn cache_counts_hits() {
        let mut cache = KlCache::new();
        kl_polynomial(&p("1324"), &p("3412"), &mut cache).unwrap();
        let misses = cache.misses();
        kl_polynomial(&p("1324"), &p("3412"), &mut cache).unwrap();
        assert_eq!(cache.misses(), misses);
        assert!(cache.hits() >= 1);
    }
}
