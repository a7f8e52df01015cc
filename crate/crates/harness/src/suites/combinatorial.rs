use anyhow::Result;
use klimm_core::grid::{
    bounding_boxes, boxes_alternate, graph_of_interval_bruteforce, graph_of_upper_interval,
    squares_match_noninversions, LabeledGrid,
};
use klimm_core::Permutation;

use super::{Suite, SuiteOutput};
use crate::context::Context;
use crate::report::Witness;
use crate::runner::{run_cases, Outcome};

/// Largest `n` for the square-size / non-inversion linkage sweep.
const LINKAGE_MAX_N: usize = 6;

fn all_up_to(max_n: usize) -> Vec<Permutation> {
    (1..=max_n).flat_map(Permutation::all).collect()
}

/// The sandwich description of `Γ[v, w0]` equals the union of the graphs of
/// the whole interval.
pub struct GraphInterval;

impl Suite for GraphInterval {
    fn name(&self) -> &'static str {
        "graph-interval"
    }

    fn aliases(&self) -> &'static [&'static str] {
        &["lemma-2.11"]
    }

    fn description(&self) -> &'static str {
        "Γ[v,w0] from sandwiched cells equals the union over the Bruhat interval"
    }

    fn default_max_n(&self) -> usize {
        7
    }

    fn run(&self, _ctx: &Context, max_n: usize) -> Result<SuiteOutput> {
        let perms = all_up_to(max_n);
        let tally = run_cases(
            &perms,
            || (),
            |_, _, v| {
                let fast = graph_of_upper_interval(v);
                vec![match graph_of_interval_bruteforce(v) {
                    Ok(slow) => Outcome::check(fast.same_cells(&slow), || {
                        Witness::new(
                            "graph",
                            format!("sandwich:\n{}interval:\n{}", fast.render(None), slow.render(None)),
                        )
                        .v(v)
                    }),
                    Err(e) => e.into(),
                }]
            },
        );
        Ok(SuiteOutput {
            tally,
            notes: vec![],
        })
    }
}

/// The largest square in `Γ[v, w0]` has side `k + 1` exactly when some
/// non-inversion has `j - i >= k` and `v_j - v_i >= k`; for 1324- and
/// 2143-avoiding `v`, largest square `<= k` iff every non-inversion has
/// `j - i <= k - 1` or `v_j - v_i <= k - 1`.
pub struct Squares;

fn linkage_holds(v: &Permutation, grid: &LabeledGrid) -> Option<usize> {
    let square = grid.largest_square();
    let nis = v.non_inversions();
    (1..=v.n()).find(|&k| {
        let every = nis
            .iter()
            .all(|ni| ni.j - ni.i < k || v.at(ni.j) - v.at(ni.i) < k);
        (square <= k) != every
    })
}

impl Suite for Squares {
    fn name(&self) -> &'static str {
        "squares"
    }

    fn aliases(&self) -> &'static [&'static str] {
        &["lemma-2.12"]
    }

    fn description(&self) -> &'static str {
        "largest square of Γ[v,w0] versus the widest non-inversion"
    }

    fn default_max_n(&self) -> usize {
        7
    }

    fn run(&self, _ctx: &Context, max_n: usize) -> Result<SuiteOutput> {
        let perms = all_up_to(max_n);
        let mut tally = run_cases(
            &perms,
            || (),
            |_, _, v| {
                vec![Outcome::check(squares_match_noninversions(v), || {
                    Witness::new(
                        "square size",
                        format!("largest square {}", graph_of_upper_interval(v).largest_square()),
                    )
                    .v(v)
                })]
            },
        );
        let linkage_n = max_n.min(LINKAGE_MAX_N);
        let qualifying: Vec<Permutation> = all_up_to(linkage_n)
            .into_iter()
            .filter(|v| v.avoids_1324_and_2143())
            .collect();
        tally.merge(run_cases(
            &qualifying,
            || (),
            |_, _, v| {
                let grid = graph_of_upper_interval(v);
                vec![match linkage_holds(v, &grid) {
                    None => Outcome::Pass,
                    Some(k) => Outcome::Fail(
                        Witness::new(
                            "square bound",
                            format!("largest square {} disagrees with the non-inversion test at k = {k}", grid.largest_square()),
                        )
                        .v(v),
                    ),
                }]
            },
        ));
        Ok(SuiteOutput {
            tally,
            notes: vec![format!(
                "square bound versus non-inversion spans checked for {} pattern-avoiding permutations up to n = {linkage_n}",
                qualifying.len()
            )],
        })
    }
}

/// `Γ[v, w0]` lies inside the union of its bounding boxes.
pub struct BoxCover;

impl Suite for BoxCover {
    fn name(&self) -> &'static str {
        "box-cover"
    }

    fn aliases(&self) -> &'static [&'static str] {
        &["lemma-2.16"]
    }

    fn description(&self) -> &'static str {
        "bounding boxes cover Γ[v,w0]"
    }

    fn default_max_n(&self) -> usize {
        7
    }

    fn run(&self, _ctx: &Context, max_n: usize) -> Result<SuiteOutput> {
        let perms = all_up_to(max_n);
        let tally = run_cases(
            &perms,
            || (),
            |_, _, v| {
                let n = v.n();
                let cover = bounding_boxes(v)
                    .iter()
                    .fold(LabeledGrid::empty(n), |acc, b| acc.union(&b.to_grid(n)));
                let graph = graph_of_upper_interval(v);
                vec![Outcome::check(graph.is_subset(&cover), || {
                    Witness::new(
                        "box cover",
                        format!("uncovered cells {:?}", graph.difference(&cover).cells()),
                    )
                    .v(v)
                })]
            },
        );
        Ok(SuiteOutput {
            tally,
            notes: vec![],
        })
    }
}

/// For 2143-avoiding `v` with `w0 v` outside every maximal parabolic
/// subgroup, several bounding boxes alternate blue and red.
pub struct BoxColors;

impl Suite for BoxColors {
    fn name(&self) -> &'static str {
        "box-colors"
    }

    fn aliases(&self) -> &'static [&'static str] {
        &["prop-2.17"]
    }

    fn description(&self) -> &'static str {
        "bounding box colors alternate blue/red"
    }

    fn default_max_n(&self) -> usize {
        7
    }

    fn run(&self, _ctx: &Context, max_n: usize) -> Result<SuiteOutput> {
        let perms = all_up_to(max_n);
        let tally = run_cases(
            &perms,
            || (),
            |_, _, v| {
                vec![match boxes_alternate(v) {
                    Ok(holds) => Outcome::check(holds, || {
                        let colors: Vec<String> = bounding_boxes(v)
                            .iter()
                            .map(|b| format!("{:?}", b.color).to_lowercase())
                            .collect();
                        Witness::new("box colors", colors.join(" ")).v(v)
                    }),
                    Err(e) if e.is_precondition() => Outcome::Skip,
                    Err(e) => e.into(),
                }]
            },
        );
        Ok(SuiteOutput {
            tally,
            notes: vec![],
        })
    }
}
