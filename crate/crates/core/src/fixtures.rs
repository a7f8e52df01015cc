//! Worked examples with known answers, checked end to end.

use itertools::Itertools;
use serde::Serialize;

use crate::error::Result;
use crate::exactmat::{
    det, example_matrix, format_rational, is_k_positive, max_positivity_order, repeat_submatrix, restrict,
    symbolic_repeat, RationalMatrix,
};
use crate::grid::{
    block_antidiagonal_split, bounding_boxes, boxes_alternate, deletion_region, graph_of_upper_interval,
    spanning_corners, LabeledGrid, Multiset,
};
use crate::immanant::{dual_canonical_eval, imm_definition, imm_determinantal};
use crate::klpoly::KlCache;
use crate::perm::{pattern_1324, pattern_2143, Permutation};

/// Permutation whose upper-interval graph has five bounding boxes including
/// a purple one.
pub const BOXES_EXAMPLE: &str = "6 10 4 7 8 9 5 3 1 2";
/// Permutation whose upper-interval graph is block-antidiagonal.
pub const SPLIT_EXAMPLE: &str = "74586132";
/// Permutation used to illustrate deleting an entry at a spanning corner.
pub const DELETION_EXAMPLE: &str = "62785314";
/// The running small example.
pub const SMALL_EXAMPLE: &str = "2413";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixtureCheck {
    pub name: &'static str,
    pub expected: String,
    pub actual: String,
}

impl FixtureCheck {
    pub fn passed(&self) -> bool {
        self.expected == self.actual
    }
}

fn check(name: &'static str, expected: impl ToString, actual: impl ToString) -> FixtureCheck {
    FixtureCheck {
        name,
        expected: expected.to_string(),
        actual: actual.to_string(),
    }
}

fn rows_of(m: &RationalMatrix) -> String {
    let rows = (1..=m.rows()).map(|i| (1..=m.cols()).map(|j| format_rational(m.entry(i, j))).join(","));
    format!("[{}]", rows.map(|r| format!("[{r}]")).join(","))
}

fn support_list(g: &LabeledGrid, rows: bool) -> String {
    (1..=g.n())
        .map(|x| {
            let s = if rows { g.row_support(x) } else { g.col_support(x) };
            format!("{{{}}}", s.expect("in range").iter().join(","))
        })
        .join(" ")
}

/// Every worked example, each as expected-versus-actual text.
pub fn worked_examples() -> Result<Vec<FixtureCheck>> {
    let m = example_matrix();
    let small: Permutation = SMALL_EXAMPLE.parse()?;
    let graph = graph_of_upper_interval(&small);
    let ms = |s: &str| -> Result<Multiset> { s.parse() };
    let mut out = Vec::new();

    out.push(check("2413 avoids 1324", false, small.contains_pattern(&pattern_1324())?));
    out.push(check("2413 avoids 2143", false, small.contains_pattern(&pattern_2143())?));
    out.push(check(
        "interval above 2413",
        "2413 2431 3412 3421 4213 4231 4312 4321",
        Permutation::all(4)
            .filter(|u| small.bruhat_leq(u).unwrap_or(false))
            .map(|u| u.to_string())
            .join(" "),
    ));
    out.push(check("graph of 2413 size", 12, graph.len()));
    out.push(check(
        "graph of 2413 render",
        ". x o o\n. o o x\nx o o .\no o x .\n",
        graph.render(Some(&small)),
    ));
    out.push(check(
        "graph of 2413 row supports",
        "{2,3,4} {2,3,4} {1,2,3} {1,2,3}",
        support_list(&graph, true),
    ));
    out.push(check(
        "graph of 2413 column supports",
        "{3,4} {1,2,3,4} {1,2,3,4} {1,2}",
        support_list(&graph, false),
    ));
    out.push(check(
        "graph of 2413 admissible for (1223, 1233)",
        true,
        graph.clone().with_labels(ms("1223")?, ms("1233")?)?.is_admissible(),
    ));
    out.push(check(
        "graph of 2413 admissible for (1223, 1223)",
        false,
        graph.clone().with_labels(ms("1223")?, ms("1223")?)?.is_admissible(),
    ));

    out.push(check("example matrix 2-positive", true, is_k_positive(&m, 2)?));
    out.push(check("example matrix 3-positive", false, is_k_positive(&m, 3)?));
    out.push(check("example matrix positivity order", 2, max_positivity_order(&m)?));
    out.push(check(
        "example matrix upper-left 3x3 determinant",
        -2,
        format_rational(&det(&m.submatrix(&[1, 2, 3], &[1, 2, 3])?)?),
    ));
    out.push(check(
        "example matrix restricted to graph of 2413",
        "[[0,18,6,3],[0,7,3,2],[2,2,1,0],[1,2,2,0]]",
        rows_of(&restrict(&m, &graph)?),
    ));
    out.push(check(
        "example matrix with rows 113, columns 234",
        "[[18,6,3],[18,6,3],[2,1,2]]",
        rows_of(&repeat_submatrix(&m, &ms("113")?, &ms("234")?)?),
    ));
    let x = symbolic_repeat(&ms("113")?, &ms("234")?);
    out.push(check("symbolic rows 1 and 2 coincide", true, x[0] == x[1]));
    out.push(check(
        "Imm_2413 of example matrix by definition",
        39,
        format_rational(&imm_definition(&small, &m, &mut KlCache::new())?),
    ));
    out.push(check(
        "Imm_2413 of example matrix by determinant",
        39,
        format_rational(&imm_determinantal(&small, &m)?),
    ));
    let rep = dual_canonical_eval(&small, &ms("1223")?, &ms("1223")?, &m)?;
    out.push(check(
        "Imm_2413 with rows and columns 1223",
        "0 inadmissible",
        format!(
            "{} {}",
            format_rational(&rep.value),
            if rep.admissible { "admissible" } else { "inadmissible" }
        ),
    ));

    let boxes: Permutation = BOXES_EXAMPLE.parse()?;
    out.push(check(
        "spanning corners",
        "(1,6) (3,4) (6,9) (8,3) (9,1) (10,2)",
        spanning_corners(&boxes).iter().map(|(i, j)| format!("({i},{j})")).join(" "),
    ));
    out.push(check(
        "bounding box colors",
        "blue red blue green purple",
        bounding_boxes(&boxes)
            .iter()
            .map(|b| format!("{:?}", b.color).to_lowercase())
            .join(" "),
    ));
    out.push(check(
        "alternation hypothesis fails with a purple box",
        "precondition",
        match boxes_alternate(&boxes) {
            Err(e) if e.is_precondition() => "precondition".to_string(),
            other => format!("{other:?}"),
        },
    ));

    let split_v: Permutation = SPLIT_EXAMPLE.parse()?;
    let split = block_antidiagonal_split(&split_v);
    out.push(check(
        "block split",
        "j=3 41253 132",
        split.map_or("none".into(), |s| format!("j={} {} {}", s.j, s.upper_right, s.lower_left)),
    ));

    let del: Permutation = DELETION_EXAMPLE.parse()?;
    let x = del.delete_entry(2)?;
    out.push(check("deleting the entry 2", "5674213", x.to_string()));
    let reduced = graph_of_upper_interval(&del)
        .difference(&deletion_region(&del, 2)?)
        .delete_row_col(2, 2);
    out.push(check(
        "graph after removing row 2, column 2 and the region",
        true,
        reduced.same_cells(&graph_of_upper_interval(&x)),
    ));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_worked_examples_pass() {
        let checks = worked_examples().unwrap();
        assert!(checks.len() >= 25);
        for c in &checks {
            assert!(c.passed(), "{}: expected {:?}, got {:?}", c.name, c.expected, c.actual);
        }
    }
}
