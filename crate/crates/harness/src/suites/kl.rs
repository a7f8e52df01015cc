use anyhow::Result;
use klimm_core::klpoly::{algorithm, IntPolynomial};
use klimm_core::Permutation;

use super::{Suite, SuiteOutput};
use crate::context::Context;
use crate::report::Witness;
use crate::runner::{run_cases, Outcome};

/// Largest `n` for the cross-check between the two KL algorithms.
const CROSS_CHECK_MAX_N: usize = 4;

/// `P_{x,y}` has constant term 1, degree at most `(l(y) - l(x) - 1) / 2`
/// and nonnegative coefficients when `x < y`, is 1 when `x = y` and 0
/// otherwise; the descent recursion and the R-polynomial route agree.
pub struct KlSanity;

fn sane(x: &Permutation, y: &Permutation, p: &IntPolynomial) -> Result<bool, String> {
    let below = x.bruhat_leq(y).map_err(|e| e.to_string())?;
    if !below {
        return Ok(p.is_zero());
    }
    if x == y {
        return Ok(*p == IntPolynomial::one());
    }
    let bound = (y.length() - x.length() - 1) / 2;
    Ok(p.coeff(0) == 1.into() && p.degree().is_some_and(|d| d <= bound) && p.has_nonnegative_coeffs())
}

impl Suite for KlSanity {
    fn name(&self) -> &'static str {
        "kl-sanity"
    }

    fn description(&self) -> &'static str {
        "KL polynomial normalization, degree bound, positivity and cross-check"
    }

    fn default_max_n(&self) -> usize {
        5
    }

    fn run(&self, ctx: &Context, max_n: usize) -> Result<SuiteOutput> {
        let tops: Vec<Permutation> = (1..=max_n).flat_map(Permutation::all).collect();
        let kl = ctx.kl_warmed(tops.iter().cloned())?;
        let mut tally = run_cases(
            &tops,
            || kl.clone(),
            |kl, _, y| {
                Permutation::all(y.n())
                    .map(|x| {
                        let p = match kl.polynomial(&x, y) {
                            Ok(p) => p,
                            Err(e) => return e.into(),
                        };
                        match sane(&x, y, &p) {
                            Ok(holds) => Outcome::check(holds, || {
                                Witness::new(format!("P_{{{x},{y}}}"), format!("P = {p}")).v(&x)
                            }),
                            Err(e) => Outcome::Error(e),
                        }
                    })
                    .collect()
            },
        );

        let small: Vec<Permutation> = (1..=max_n.min(CROSS_CHECK_MAX_N)).flat_map(Permutation::all).collect();
        let cross = run_cases(
            &small,
            || {
                (
                    algorithm("descent").expect("registered"),
                    algorithm("r-inversion").expect("registered"),
                )
            },
            |(a, b), _, y| {
                Permutation::all(y.n())
                    .map(|x| match (a.polynomial(&x, y), b.polynomial(&x, y)) {
                        (Ok(p), Ok(q)) => Outcome::check(p == q, || {
                            Witness::new(format!("P_{{{x},{y}}}"), format!("descent {p}, r-inversion {q}")).v(&x)
                        }),
                        (Err(e), _) | (_, Err(e)) => e.into(),
                    })
                    .collect()
            },
        );
        tally.merge(cross);

        let mut notes = Vec::new();
        if max_n >= 4 {
            let (x, y): (Permutation, Permutation) = ("1324".parse()?, "3412".parse()?);
            let mut kl = kl;
            let p = kl.polynomial(&x, &y)?;
            tally.record(Outcome::check(p == IntPolynomial::from_i64s(&[1, 1]), || {
                Witness::new("P_{1324,3412}", format!("expected 1 + q, got {p}"))
            }));
            notes.push(format!("P_{{1324,3412}} = {p}"));
        }
        notes.push(format!(
            "descent recursion and R-polynomial inversion compared on S_1..S_{}",
            max_n.min(CROSS_CHECK_MAX_N)
        ));
        Ok(SuiteOutput { tally, notes })
    }
}
