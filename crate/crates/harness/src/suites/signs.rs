use std::sync::atomic::{AtomicUsize, Ordering};

use anyhow::Result;
use klimm_core::exactmat::RationalMatrix;
use klimm_core::grid::{graph_of_upper_interval, Multiset, YoungDiagram};
use klimm_core::immanant::{
    inversions_equal_complement_boxes, lewis_carroll_sign_probe, sign_probe_row, young_complement_sign_check,
    young_sign_check, ClaimStatus,
};
use klimm_core::immanant::{dual_canonical_eval, imm_definition, labeled_submatrix};
use klimm_core::{Error, Permutation};
use num_traits::{Signed, Zero};
use rand::Rng;

use super::{samples, Suite, SuiteOutput};
use crate::context::Context;
use crate::labels::{pattern_pairs, realize, LabelPattern};
use crate::report::Witness;
use crate::runner::{run_cases, Outcome};

fn avoiders(max_n: usize) -> Vec<Permutation> {
    (1..=max_n)
        .flat_map(Permutation::all)
        .filter(Permutation::avoids_1324_and_2143)
        .collect()
}

/// Label universe for `n`-element label multisets: `--max-m`, raised to `n`.
fn universe(ctx: &Context, n: usize) -> usize {
    ctx.config.max_m_or_default().max(n)
}

fn pick<'a>(pool: &'a [RationalMatrix], rng: &mut impl Rng) -> &'a RationalMatrix {
    &pool[rng.gen_range(0..pool.len())]
}

/// Pattern pairs for `n`, each realized `samples` times.
fn labelings(n: usize, m: usize, s: usize, rng: &mut impl Rng) -> Vec<(LabelPattern, Multiset, Multiset)> {
    pattern_pairs(n, m)
        .into_iter()
        .flat_map(|(p, q)| (0..s).map(move |_| (p, q)))
        .map(|(p, q)| (p, realize(p, n, m, rng), realize(q, n, m, rng)))
        .collect()
}

/// Sign and zero set of `det M(R, C)|_λ` for Young shapes `λ` and of the
/// complementary skew shape, on matrices whose positivity order is the
/// Durfee square (largest square of the complement); plus, for `v` whose
/// `Γ[v, w0]` is such a shape, the count of missing cells equals `l(v)`.
pub struct Young;

impl Suite for Young {
    fn name(&self) -> &'static str {
        "young"
    }

    fn description(&self) -> &'static str {
        "sign laws for determinants restricted to Young shapes and their complements"
    }

    fn default_max_n(&self) -> usize {
        4
    }

    fn uses_labels(&self) -> bool {
        true
    }

    fn run(&self, ctx: &Context, max_n: usize) -> Result<SuiteOutput> {
        let shapes: Vec<(usize, YoungDiagram)> = (1..=max_n)
            .flat_map(|n| YoungDiagram::all_in_box(n).into_iter().map(move |l| (n, l)))
            .collect();
        let s = samples(ctx);
        let admissible = AtomicUsize::new(0);
        let inadmissible = AtomicUsize::new(0);
        let mut tally = run_cases(
            &shapes,
            || (),
            |_, i, (n, lambda)| {
                let n = *n;
                let m = universe(ctx, n);
                let mut rng = ctx.rng("young", i);
                let k = klimm_core::grid::durfee(lambda).max(1);
                let k_comp = match lambda.complement_grid(n) {
                    Ok(g) => g.largest_square().max(1),
                    Err(e) => return vec![e.into()],
                };
                let pool = ctx.positive_pool(m, k);
                let pool_comp = ctx.positive_pool(m, k_comp);
                let mut out = Vec::new();
                for (_, r, c) in labelings(n, m, s, &mut rng) {
                    let a = pick(&pool, &mut rng);
                    match young_sign_check(lambda, &r, &c, a, k) {
                        Ok(o) => {
                            let counter = if o.admissible { &admissible } else { &inadmissible };
                            counter.fetch_add(1, Ordering::Relaxed);
                            out.push(Outcome::check(o.holds, || {
                                Witness::new(format!("shape {lambda}"), format!("{o:?}"))
                                    .labels(&r, &c)
                                    .matrix(a)
                            }));
                        }
                        Err(e) => out.push(e.into()),
                    }
                    let b = pick(&pool_comp, &mut rng);
                    match young_complement_sign_check(lambda, &r, &c, b, k_comp) {
                        Ok(o) => out.push(Outcome::check(o.holds, || {
                            Witness::new(format!("complement of {lambda} in {n}x{n}"), format!("{o:?}"))
                                .labels(&r, &c)
                                .matrix(b)
                        })),
                        Err(e) => out.push(e.into()),
                    }
                }
                out
            },
        );

        let perms = avoiders(max_n);
        let shaped = run_cases(
            &perms,
            || (),
            |_, _, v| {
                vec![match inversions_equal_complement_boxes(v) {
                    Ok(holds) => Outcome::check(holds, || {
                        Witness::new("missing cells", format!("{} missing, length {}", {
                            let n = v.n();
                            n * n - graph_of_upper_interval(v).len()
                        }, v.length()))
                        .v(v)
                    }),
                    Err(Error::Shape(_)) => Outcome::Skip,
                    Err(e) => e.into(),
                }]
            },
        );
        let notes = vec![
            format!("{} shapes in n x n boxes for n <= {max_n}", shapes.len()),
            format!(
                "shape samples: {} admissible, {} inadmissible",
                admissible.into_inner(),
                inadmissible.into_inner()
            ),
            format!(
                "{} pattern-avoiding permutations have a Young or complementary Young Γ[v,w0]",
                shaped.run
            ),
        ];
        tally.merge(shaped);
        Ok(SuiteOutput { tally, notes })
    }
}

/// Signs in the Lewis Carroll step of the sign argument, on the last two
/// bounding boxes. The double-deletion minor is checked against the sign
/// forced by the identity; the sign as usually printed is only counted.
pub struct SignProbe;

impl Suite for SignProbe {
    fn name(&self) -> &'static str {
        "sgn-probe"
    }

    fn description(&self) -> &'static str {
        "signs of the minors in the Lewis Carroll step"
    }

    fn default_max_n(&self) -> usize {
        5
    }

    fn uses_labels(&self) -> bool {
        true
    }

    fn run(&self, ctx: &Context, max_n: usize) -> Result<SuiteOutput> {
        let cases: Vec<Permutation> = avoiders(max_n)
            .into_iter()
            .filter(|v| sign_probe_row(v).is_some())
            .collect();
        let s = samples(ctx);
        let printed_violations = AtomicUsize::new(0);
        let tally = run_cases(
            &cases,
            || (),
            |_, i, v| {
                let n = v.n();
                let m = universe(ctx, n);
                let k = graph_of_upper_interval(v).largest_square();
                let pool = ctx.positive_pool(m, k);
                let mut rng = ctx.rng("sign probe", i);
                labelings(n, m, s, &mut rng)
                    .into_iter()
                    .map(|(_, r, c)| {
                        let a = pick(&pool, &mut rng);
                        match lewis_carroll_sign_probe(v, &r, &c, a) {
                            Ok(report) => {
                                if report.double_deletion_as_printed == ClaimStatus::Violated {
                                    printed_violations.fetch_add(1, Ordering::Relaxed);
                                }
                                Outcome::check(!report.violated(), || {
                                    Witness::new("sign probe", format!("{report:?}"))
                                        .v(v)
                                        .labels(&r, &c)
                                        .matrix(a)
                                })
                            }
                            Err(e) if e.is_precondition() => Outcome::Skip,
                            Err(e) => e.into(),
                        }
                    })
                    .collect()
            },
        );
        let notes = vec![
            format!("{} permutations whose last two boxes have the probed shape", cases.len()),
            format!(
                "double-deletion minor against σ(-1)^l(v) instead of -σ(-1)^l(v): violated in {} of {} probed cases",
                printed_violations.into_inner(),
                tally.run
            ),
        ];
        Ok(SuiteOutput { tally, notes })
    }
}

/// For 1324- and 2143-avoiding `v` with `k` the largest square of
/// `Γ[v, w0]`, on `k`-positive `M`: `Imm_v M(R, C) > 0` when `Γ[v, w0]` is
/// `(R, C)`-admissible and `= 0` otherwise. The determinant is also compared
/// with the defining sum.
pub struct MainSquare;

impl Suite for MainSquare {
    fn name(&self) -> &'static str {
        "main-sq"
    }

    fn description(&self) -> &'static str {
        "Imm_v X(R,C) is positive on k-positive matrices exactly when admissible"
    }

    fn default_max_n(&self) -> usize {
        4
    }

    fn uses_labels(&self) -> bool {
        true
    }

    fn run(&self, ctx: &Context, max_n: usize) -> Result<SuiteOutput> {
        let cases = avoiders(max_n);
        let kl = ctx.kl_warmed(
            cases
                .iter()
                .map(|v| Permutation::longest_element(v.n()).compose(v).expect("same n")),
        )?;
        let s = samples(ctx);
        let admissible = AtomicUsize::new(0);
        let tally = run_cases(
            &cases,
            || kl.clone(),
            |kl, i, v| {
                let n = v.n();
                let m = universe(ctx, n);
                let k = graph_of_upper_interval(v).largest_square();
                let pool = ctx.positive_pool(m, k);
                let mut rng = ctx.rng("main square", i);
                labelings(n, m, s, &mut rng)
                    .into_iter()
                    .map(|(_, r, c)| {
                        let a = pick(&pool, &mut rng);
                        let eval = dual_canonical_eval(v, &r, &c, a);
                        let direct = labeled_submatrix(v, &r, &c, a).and_then(|sub| imm_definition(v, &sub, kl));
                        match (eval, direct) {
                            (Ok(res), Ok(d)) => {
                                if res.admissible {
                                    admissible.fetch_add(1, Ordering::Relaxed);
                                }
                                let sign_ok = if res.admissible {
                                    res.value.is_positive()
                                } else {
                                    res.value.is_zero()
                                };
                                Outcome::check(sign_ok && d == res.value, || {
                                    Witness::new(
                                        format!("k = {k}"),
                                        format!(
                                            "determinant {}, definition {d}, admissible {}",
                                            res.value, res.admissible
                                        ),
                                    )
                                    .v(v)
                                    .labels(&r, &c)
                                    .matrix(a)
                                })
                            }
                            (Err(e), _) | (_, Err(e)) => e.into(),
                        }
                    })
                    .collect()
            },
        );
        let notes = vec![
            format!("{} pattern-avoiding permutations up to n = {max_n}", cases.len()),
            format!("{} of {} evaluations admissible", admissible.into_inner(), tally.run),
        ];
        Ok(SuiteOutput { tally, notes })
    }
}
