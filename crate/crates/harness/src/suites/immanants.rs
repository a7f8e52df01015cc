use anyhow::Result;
use klimm_core::exactmat::{det, lewis_carroll_residual, restrict, Rational};
use klimm_core::grid::{block_antidiagonal_split, graph_of_upper_interval};
use klimm_core::immanant::{
    deletion_det_identity, factor_block_antidiagonal, imm_definition, imm_determinantal, random_test_matrix,
    DEFINITION_MAX_N,
};
use klimm_core::Permutation;
use num_traits::Zero;

use super::{samples, Suite, SuiteOutput};
use crate::context::Context;
use crate::report::Witness;
use crate::runner::{run_cases, Outcome};

/// Random matrices tried per pattern-containing permutation when looking for
/// a disagreement with the determinant.
const WITNESS_BUDGET: usize = 3;

fn avoiders(from: usize, max_n: usize) -> Vec<Permutation> {
    (from..=max_n)
        .flat_map(Permutation::all)
        .filter(Permutation::avoids_1324_and_2143)
        .collect()
}

fn with_sign(v: &Permutation, x: Rational) -> Rational {
    if v.length() % 2 == 0 {
        x
    } else {
        -x
    }
}

/// For 1324- and 2143-avoiding `v`, `Imm_v(M) = (-1)^{l(v)} det(M|Γ[v, w0])`;
/// for other `v`, a random matrix separating the two is looked for and
/// reported.
pub struct Determinantal;

impl Suite for Determinantal {
    fn name(&self) -> &'static str {
        "determinantal"
    }

    fn aliases(&self) -> &'static [&'static str] {
        &["prop-3.1"]
    }

    fn description(&self) -> &'static str {
        "Imm_v equals a signed determinant exactly for 1324/2143-avoiders"
    }

    fn default_max_n(&self) -> usize {
        5
    }

    fn run(&self, ctx: &Context, max_n: usize) -> Result<SuiteOutput> {
        let max_n = max_n.min(DEFINITION_MAX_N);
        let w0v = |v: &Permutation| Permutation::longest_element(v.n()).compose(v).expect("same n");
        let cases = avoiders(1, max_n);
        let containing: Vec<Permutation> = Permutation::all(max_n)
            .filter(|v| !v.avoids_1324_and_2143())
            .collect();
        let kl = ctx.kl_warmed(cases.iter().chain(&containing).map(w0v))?;
        let s = samples(ctx);
        let tally = run_cases(
            &cases,
            || kl.clone(),
            |kl, i, v| {
                let mut rng = ctx.rng("determinantal", i);
                (0..s)
                    .map(|_| {
                        let m = random_test_matrix(v.n(), v.n(), &mut rng);
                        match (imm_definition(v, &m, kl), imm_determinantal(v, &m)) {
                            (Ok(a), Ok(b)) => Outcome::check(a == b, || {
                                Witness::new("determinantal formula", format!("definition {a}, determinant {b}"))
                                    .v(v)
                                    .matrix(&m)
                            }),
                            (Err(e), _) | (_, Err(e)) => e.into(),
                        }
                    })
                    .collect()
            },
        );

        let found = run_cases(
            &containing,
            || kl.clone(),
            |kl, i, v| {
                let mut rng = ctx.rng("pattern witness", i);
                let grid = graph_of_upper_interval(v);
                let separated = (0..WITNESS_BUDGET).any(|_| {
                    let m = random_test_matrix(v.n(), v.n(), &mut rng);
                    let direct = imm_definition(v, &m, kl).expect("size checked");
                    let formula = with_sign(v, det(&restrict(&m, &grid).expect("square")).expect("square"));
                    direct != formula
                });
                vec![if separated { Outcome::Pass } else { Outcome::Skip }]
            },
        );
        let notes = vec![format!(
            "pattern-containing permutations in S_{max_n}: {}, separated from the signed determinant by a random matrix: {} (budget {WITNESS_BUDGET} matrices each)",
            containing.len(),
            found.passed
        )];
        Ok(SuiteOutput { tally, notes })
    }
}

/// `det M · det M_{a,a'}^{b,b'} = det M_a^b det M_{a'}^{b'} - det M_a^{b'} det M_{a'}^b`
/// for every `a < a'`, `b < b'` on random matrices of sizes 2 to 6. Here
/// `--samples` is the number of matrices.
pub struct LewisCarroll;

pub const LEWIS_CARROLL_SIZES: std::ops::RangeInclusive<usize> = 2..=6;

impl Suite for LewisCarroll {
    fn name(&self) -> &'static str {
        "lewis-carroll"
    }

    fn aliases(&self) -> &'static [&'static str] {
        &["prop-3.2"]
    }

    fn description(&self) -> &'static str {
        "Lewis Carroll identity on random rational matrices"
    }

    fn default_max_n(&self) -> usize {
        *LEWIS_CARROLL_SIZES.end()
    }

    fn run(&self, ctx: &Context, max_n: usize) -> Result<SuiteOutput> {
        let sizes: Vec<usize> = LEWIS_CARROLL_SIZES.filter(|&s| s <= max_n).collect();
        if sizes.is_empty() {
            return Ok(SuiteOutput {
                notes: vec!["no matrix sizes in range".into()],
                ..SuiteOutput::default()
            });
        }
        let cases: Vec<usize> = (0..samples(ctx)).map(|i| sizes[i % sizes.len()]).collect();
        let tally = run_cases(
            &cases,
            || (),
            |_, i, &size| {
                let m = random_test_matrix(size, size, &mut ctx.rng("lewis carroll", i));
                let mut out = Vec::new();
                for a in 1..=size {
                    for a2 in a + 1..=size {
                        for b in 1..=size {
                            for b2 in b + 1..=size {
                                out.push(match lewis_carroll_residual(&m, a, a2, b, b2) {
                                    Ok(r) => Outcome::check(r.is_zero(), || {
                                        Witness::new(
                                            "lewis carroll",
                                            format!("rows {a},{a2} columns {b},{b2}: residual {r}"),
                                        )
                                        .matrix(&m)
                                    }),
                                    Err(e) => e.into(),
                                });
                            }
                        }
                    }
                }
                out
            },
        );
        Ok(SuiteOutput {
            tally,
            notes: vec![format!("{} matrices, sizes {:?}", cases.len(), sizes)],
        })
    }
}

/// When `Γ[v, w0]` is block-antidiagonal, `Imm_v` is the product of the
/// immanants of the two blocks.
pub struct BlockFactor;

/// Up to this size the factored value is also compared with the defining sum.
const FACTOR_DEFINITION_MAX_N: usize = 5;

impl Suite for BlockFactor {
    fn name(&self) -> &'static str {
        "block-factor"
    }

    fn aliases(&self) -> &'static [&'static str] {
        &["prop-4.1"]
    }

    fn description(&self) -> &'static str {
        "block-antidiagonal factorization of Imm_v"
    }

    fn default_max_n(&self) -> usize {
        6
    }

    fn run(&self, ctx: &Context, max_n: usize) -> Result<SuiteOutput> {
        let cases: Vec<Permutation> = avoiders(2, max_n)
            .into_iter()
            .filter(|v| block_antidiagonal_split(v).is_some())
            .collect();
        let small_tops = cases
            .iter()
            .filter(|v| v.n() <= FACTOR_DEFINITION_MAX_N)
            .map(|v| Permutation::longest_element(v.n()).compose(v).expect("same n"));
        let kl = ctx.kl_warmed(small_tops)?;
        let s = samples(ctx);
        let tally = run_cases(
            &cases,
            || kl.clone(),
            |kl, i, v| {
                let mut rng = ctx.rng("block factor", i);
                (0..s)
                    .map(|_| {
                        let m = random_test_matrix(v.n(), v.n(), &mut rng);
                        let factored = factor_block_antidiagonal(v, &m);
                        let direct = imm_determinantal(v, &m);
                        let oracle = (v.n() <= FACTOR_DEFINITION_MAX_N).then(|| imm_definition(v, &m, kl));
                        match (factored, direct, oracle.transpose()) {
                            (Ok(f), Ok(d), Ok(o)) => {
                                Outcome::check(f == d && o.as_ref().is_none_or(|o| *o == f), || {
                                    Witness::new(
                                        "block factorization",
                                        format!("factored {f}, determinant {d}, definition {o:?}"),
                                    )
                                    .v(v)
                                    .matrix(&m)
                                })
                            }
                            (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => e.into(),
                        }
                    })
                    .collect()
            },
        );
        Ok(SuiteOutput {
            tally,
            notes: vec![format!("{} pattern-avoiding permutations with a block split", cases.len())],
        })
    }
}

/// Deleting `(i, v_i)`: the region description of `Γ[x, w0]`, plain deletion
/// away from spanning corners, and equality of determinants.
pub struct Deletion;

impl Suite for Deletion {
    fn name(&self) -> &'static str {
        "deletion"
    }

    fn description(&self) -> &'static str {
        "deleting an entry of v and the determinant of the restricted matrix"
    }

    fn default_max_n(&self) -> usize {
        5
    }

    fn run(&self, ctx: &Context, max_n: usize) -> Result<SuiteOutput> {
        let cases: Vec<(Permutation, usize)> = avoiders(2, max_n)
            .into_iter()
            .flat_map(|v| (1..=v.n()).map(move |i| (v.clone(), i)))
            .collect();
        let s = samples(ctx);
        let tally = run_cases(
            &cases,
            || (),
            |_, idx, (v, i)| {
                let mut rng = ctx.rng("deletion", idx);
                (0..s)
                    .map(|_| {
                        let m = random_test_matrix(v.n() - 1, v.n() - 1, &mut rng);
                        match deletion_det_identity(v, *i, &m) {
                            Ok(report) => Outcome::check(report.holds(), || {
                                Witness::new(format!("delete entry {i}"), format!("{report:?}"))
                                    .v(v)
                                    .matrix(&m)
                            }),
                            Err(e) => e.into(),
                        }
                    })
                    .collect()
            },
        );
        Ok(SuiteOutput {
            tally,
            notes: vec![],
        })
    }
}
