//! One line per acceptance criterion; exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use itertools::Itertools;
use klimm::search::{conjecture, run_search};
use klimm::suites::{run_suite, suite};
use klimm::{Config, Context, SuiteReport};
use klimm_core::exactmat::{
    example_matrix, is_k_positive, rational, repeat_submatrix, Rational, RationalMatrix,
};
use klimm_core::grid::{
    block_antidiagonal_split, bounding_boxes, deletion_region, graph_of_upper_interval, spanning_corners, LabeledGrid,
    Multiset, YoungDiagram,
};
use klimm_core::immanant::{imm_definition, imm_determinantal};
use klimm_core::klpoly::{IntPolynomial, KlAlgorithm, KlCache, RPolynomialInversion};
use klimm_core::Permutation;
use num_traits::Zero;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn p(s: &str) -> Permutation {
    s.parse().unwrap()
}

fn ms(s: &str) -> Multiset {
    s.parse().unwrap()
}

fn config(max_n: usize, samples: usize) -> Config {
    Config {
        max_n: Some(max_n),
        samples: Some(samples),
        seed: 2024,
        ..Config::default()
    }
}

fn run(name: &str, config: Config) -> Result<SuiteReport, String> {
    let s = suite(name).ok_or(format!("no suite {name}"))?;
    let ctx = Context::new(config).map_err(|e| e.to_string())?;
    run_suite(&*s, &ctx).map_err(|e| e.to_string())
}

fn clean(r: &SuiteReport) -> Result<(), String> {
    ensure(r.ok() && r.cases_run > 0 && r.cases_passed == r.cases_run, || {
        format!(
            "{}: {}/{} passed, {} counterexamples, errors {:?}, first witness {:?}",
            r.suite,
            r.cases_passed,
            r.cases_run,
            r.counterexamples_total,
            r.errors.iter().take(3).collect::<Vec<_>>(),
            r.counterexamples.first()
        )
    })
}

fn within(r: &SuiteReport, limit: Duration) -> Result<(), String> {
    ensure(r.wall_time < limit, || format!("{} took {:?}", r.suite, r.wall_time))
}

/// Laplace expansion along the first row.
fn cofactor_det(m: &RationalMatrix) -> Rational {
    let n = m.rows();
    if n == 0 {
        return rational(1);
    }
    (1..=n)
        .map(|j| {
            let rest = m.remove(&[1], &[j]).unwrap();
            let term = m.entry(1, j) * cofactor_det(&rest);
            if j % 2 == 1 {
                term
            } else {
                -term
            }
        })
        .sum()
}

/// `u <= w` in Bruhat order by comparing the counts
/// `#{a <= i : u(a) >= j}` for all `i, j`.
fn bruhat_by_rank_counts(u: &Permutation, w: &Permutation) -> bool {
    let n = u.n();
    (1..=n).all(|i| {
        (1..=n).all(|j| {
            let cu = (1..=i).filter(|&a| u.at(a) >= j).count();
            let cw = (1..=i).filter(|&a| w.at(a) >= j).count();
            cu <= cw
        })
    })
}

/// `Imm_v` summed over all of `S_n` with KL polynomials from R-polynomials.
fn imm_full_sum(v: &Permutation, m: &RationalMatrix, kl: &mut RPolynomialInversion) -> Rational {
    let n = v.n();
    let w0 = Permutation::longest_element(n);
    let top = w0.compose(v).unwrap();
    let mut total = Rational::zero();
    for w in Permutation::all(n) {
        let c = kl.polynomial(&w0.compose(&w).unwrap(), &top).unwrap().eval_at_one();
        let mut term = Rational::from_integer(c);
        for i in 1..=n {
            term *= m.entry(i, w.at(i));
        }
        if (w.length() + v.length()) % 2 == 1 {
            total -= term;
        } else {
            total += term;
        }
    }
    total
}

fn determinantal_formula() -> Check {
    let start = Instant::now();
    let r = run("prop-3.1", config(5, 3))?;
    clean(&r)?;
    let avoiders = (1..=5)
        .flat_map(Permutation::all)
        .filter(|v| v.avoids_1324_and_2143())
        .count();
    ensure(r.cases_run == 3 * avoiders, || format!("{} cases for {avoiders} permutations", r.cases_run))?;
    let mut kl = RPolynomialInversion::default();
    let m = example_matrix();
    for v in Permutation::all(4).filter(|v| v.avoids_1324_and_2143()) {
        let direct = imm_full_sum(&v, &m, &mut kl);
        let formula = imm_determinantal(&v, &m).map_err(|e| e.to_string())?;
        ensure(direct == formula, || format!("{v}: full sum {direct}, determinant {formula}"))?;
    }
    ensure(start.elapsed() < Duration::from_secs(300), || format!("took {:?}", start.elapsed()))?;
    Ok(format!("{avoiders} permutations x 3 matrices, {:.1}s", start.elapsed().as_secs_f64()))
}

/// Label patterns of 4-element multisets of [4], computed from the
/// multisets themselves.
fn pattern_classes(n: usize, m: usize) -> usize {
    Multiset::all(m, n)
        .iter()
        .map(|r| r.entries().windows(2).map(|w| w[0] == w[1]).collect::<Vec<_>>())
        .unique()
        .count()
}

fn main_theorem() -> Check {
    let mut c = config(4, 5);
    c.max_m = Some(4);
    let r = run("main-sq", c)?;
    clean(&r)?;
    let expected: usize = (1..=4)
        .flat_map(Permutation::all)
        .filter(|v| v.avoids_1324_and_2143())
        .map(|v| 5 * pattern_classes(v.n(), 4).pow(2))
        .sum();
    ensure(r.cases_run == expected, || format!("{} cases, expected {expected}", r.cases_run))?;
    Ok(format!("{} evaluations, 0 counterexamples", r.cases_run))
}

fn example_matrix_fixture() -> Check {
    let m = example_matrix();
    ensure(is_k_positive(&m, 2).unwrap(), || "not 2-positive".into())?;
    ensure(!is_k_positive(&m, 3).unwrap(), || "3-positive".into())?;
    let corner = cofactor_det(&m.submatrix(&[1, 2, 3], &[1, 2, 3]).unwrap());
    ensure(corner == rational(-2), || format!("upper-left 3x3 minor {corner}"))?;
    let v = p("2413");
    let by_det = imm_determinantal(&v, &m).unwrap();
    let by_def = imm_definition(&v, &m, &mut KlCache::new()).unwrap();
    let by_oracle = imm_full_sum(&v, &m, &mut RPolynomialInversion::default());
    ensure(
        [&by_det, &by_def, &by_oracle].iter().all(|x| **x == rational(39)),
        || format!("determinant {by_det}, definition {by_def}, full sum {by_oracle}"),
    )?;
    Ok("2-positive, minor -2, Imm_2413 = 39 by both methods".into())
}

fn worked_examples() -> Check {
    let v = p("2413");
    let interval: Vec<Permutation> = Permutation::all(4).filter(|u| bruhat_by_rank_counts(&v, u)).collect();
    let union = interval.iter().fold(LabeledGrid::empty(4), |acc, u| {
        acc.union(&LabeledGrid::from_cells(4, (1..=4).map(|i| (i, u.at(i)))).unwrap())
    });
    let g = graph_of_upper_interval(&v);
    ensure(g.same_cells(&union), || format!("Γ[2413,w0] {:?} vs interval union {:?}", g.cells(), union.cells()))?;
    let expected_cells = [
        (1, 2), (1, 3), (1, 4), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (3, 3), (4, 1), (4, 2), (4, 3),
    ];
    ensure(g.cells() == expected_cells, || format!("cells {:?}", g.cells()))?;
    let rows: Vec<Vec<usize>> = (1..=4).map(|i| g.row_support(i).unwrap().into_iter().collect()).collect();
    let cols: Vec<Vec<usize>> = (1..=4).map(|j| g.col_support(j).unwrap().into_iter().collect()).collect();
    ensure(
        rows == [vec![2, 3, 4], vec![2, 3, 4], vec![1, 2, 3], vec![1, 2, 3]]
            && cols == [vec![3, 4], vec![1, 2, 3, 4], vec![1, 2, 3, 4], vec![1, 2]],
        || format!("supports {rows:?} {cols:?}"),
    )?;

    let sub = repeat_submatrix(&example_matrix(), &ms("1,1,3"), &ms("2,3,4")).unwrap();
    let expected = RationalMatrix::from_i64_rows(&[&[18, 6, 3], &[18, 6, 3], &[2, 1, 2]]).unwrap();
    ensure(sub == expected, || format!("M(R,C) =\n{sub}"))?;

    let fig = p("6 10 4 7 8 9 5 3 1 2");
    let corners = spanning_corners(&fig);
    ensure(corners == [(1, 6), (3, 4), (6, 9), (8, 3), (9, 1), (10, 2)], || format!("corners {corners:?}"))?;
    let colors = bounding_boxes(&fig)
        .iter()
        .map(|b| format!("{:?}", b.color).to_lowercase())
        .join(" ");
    ensure(colors == "blue red blue green purple", || format!("colors {colors}"))?;

    let split = block_antidiagonal_split(&p("74586132")).ok_or("no split")?;
    ensure(
        split.j == 3 && split.upper_right == p("41253") && split.lower_left == p("132"),
        || format!("split {split:?}"),
    )?;

    let del = p("62785314");
    let x = del.delete_entry(2).unwrap();
    ensure(x == p("5674213"), || format!("deletion gives {x}"))?;
    let reduced = graph_of_upper_interval(&del)
        .difference(&deletion_region(&del, 2).unwrap())
        .delete_row_col(2, 2);
    ensure(reduced.same_cells(&graph_of_upper_interval(&x)), || "region removal".into())?;

    let fixtures = run("fixtures", Config::default())?;
    clean(&fixtures)?;
    Ok(format!("grid, supports, M(R,C), corners, colors, split, deletion; {} fixture checks", fixtures.cases_run))
}

fn lewis_carroll() -> Check {
    let r = run("prop-3.2", config(6, 200))?;
    clean(&r)?;
    let per_size = |n: usize| (n * (n - 1) / 2).pow(2);
    let expected: usize = (0..200).map(|i| per_size(2 + i % 5)).sum();
    ensure(r.cases_run == expected, || format!("{} residuals, expected {expected}", r.cases_run))?;
    Ok(format!("{} residuals on 200 matrices, all zero", r.cases_run))
}

fn structural_lemmas() -> Check {
    let limit = Duration::from_secs(180);
    let mut parts = Vec::new();
    for (id, n) in [("lemma-2.11", 6), ("lemma-2.12", 7), ("lemma-2.16", 7), ("prop-2.17", 7)] {
        let r = run(id, config(n, 1))?;
        clean(&r)?;
        within(&r, limit)?;
        let all: usize = (1..=n).map(|k| (1..=k).product::<usize>()).sum();
        let seen = r.cases_run + r.skipped;
        ensure(seen >= all, || format!("{id}: {seen} of {all} permutations"))?;
        parts.push(format!("{id} {}", r.cases_run));
    }
    Ok(parts.join(", "))
}

fn deletion_identity() -> Check {
    let r = run("deletion", config(5, 3))?;
    clean(&r)?;
    let expected: usize = (2..=5)
        .flat_map(Permutation::all)
        .filter(|v| v.avoids_1324_and_2143())
        .map(|v| 3 * v.n())
        .sum();
    ensure(r.cases_run == expected, || format!("{} cases, expected {expected}", r.cases_run))?;
    Ok(format!("{} cases", r.cases_run))
}

fn block_factorization() -> Check {
    let r = run("prop-4.1", config(6, 3))?;
    clean(&r)?;
    let splitting = (2..=6)
        .flat_map(Permutation::all)
        .filter(|v| v.avoids_1324_and_2143() && block_antidiagonal_split(v).is_some())
        .count();
    ensure(r.cases_run == 3 * splitting, || format!("{} cases for {splitting} permutations", r.cases_run))?;
    Ok(format!("{splitting} permutations x 3 matrices"))
}

fn young_sign_laws() -> Check {
    let mut c = config(4, 5);
    c.max_m = Some(4);
    let r = run("young", c)?;
    clean(&r)?;
    let mut kinds = (0, 0);
    for lambda in YoungDiagram::all_in_box(4) {
        for rr in Multiset::all(4, 4) {
            for cc in Multiset::all(4, 4) {
                let g = lambda.to_grid(4).unwrap().with_labels(rr.clone(), cc.clone()).unwrap();
                if g.is_admissible() {
                    kinds.0 += 1;
                } else {
                    kinds.1 += 1;
                }
            }
        }
    }
    ensure(kinds.0 > 0 && kinds.1 > 0, || format!("admissible/inadmissible {kinds:?}"))?;
    Ok(format!("{} sign checks over 70 shapes in 4x4 and smaller", r.cases_run))
}

fn kl_sanity() -> Check {
    let r = run("kl-sanity", config(5, 1))?;
    clean(&r)?;
    let mut kl = KlCache::new();
    let pq = kl.polynomial(&p("1324"), &p("3412")).unwrap();
    ensure(pq == IntPolynomial::from_i64s(&[1, 1]), || format!("P_1324,3412 = {pq}"))?;
    let mut other = RPolynomialInversion::default();
    for y in Permutation::all(4) {
        for x in Permutation::all(4) {
            let a = kl.polynomial(&x, &y).unwrap();
            let b = other.polynomial(&x, &y).unwrap();
            ensure(a == b, || format!("P_{x},{y}: {a} vs {b}"))?;
        }
    }
    Ok(format!("{} pair checks, P_1324,3412 = {pq}", r.cases_run))
}

fn conjecture_searches() -> Check {
    let mut parts = Vec::new();
    for id in ["5.1", "5.2", "5.3"] {
        let c = conjecture(id).ok_or(format!("no search {id}"))?;
        let ctx = Context::new(config(4, 1000)).map_err(|e| e.to_string())?;
        let r = run_search(&*c, &ctx).map_err(|e| e.to_string())?;
        ensure(r.cases_run + r.skipped == 1000, || format!("{id}: {} + {} cases", r.cases_run, r.skipped))?;
        ensure(r.ok(), || {
            format!(
                "{id}: {} counterexamples, errors {:?}, first {:?}",
                r.counterexamples_total,
                r.errors,
                r.counterexamples.first()
            )
        })?;
        parts.push(format!("{id} {}/{}", r.cases_passed, r.cases_run));
    }
    Ok(parts.join(", "))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 11] = [
        ("determinantal formula equals the defining sum", determinantal_formula),
        ("positivity exactly when admissible (main-sq)", main_theorem),
        ("example matrix: 2-positive, not 3-positive, Imm_2413 = 39", example_matrix_fixture),
        ("worked examples reproduced exactly", worked_examples),
        ("Lewis Carroll identity", lewis_carroll),
        ("structural lemmas exhaustive", structural_lemmas),
        ("deletion identity", deletion_identity),
        ("block factorization", block_factorization),
        ("Young-shape sign laws", young_sign_laws),
        ("KL sanity", kl_sanity),
        ("conjecture searches", conjecture_searches),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{secs:.1}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
