use super::LabeledGrid;
use crate::error::{Error, Result};
use crate::perm::{NonInversion, Permutation};

/// Largest `n` accepted by [`graph_of_interval_bruteforce`].
pub const BRUTEFORCE_MAX_N: usize = 7;

/// `Γ(v) = {(i, v(i))}`.
pub fn graph_of_permutation(v: &Permutation) -> LabeledGrid {
    let mut g = LabeledGrid::empty(v.n());
    for i in 1..=v.n() {
        g.insert(i, v.at(i));
    }
    g
}

/// `Γ[v, w0]`: the graph of `v` plus every cell sandwiched by a
/// non-inversion of `v`.
pub fn graph_of_upper_interval(v: &Permutation) -> LabeledGrid {
    let mut g = graph_of_permutation(v);
    for NonInversion { i: k, j: l } in v.non_inversions() {
        for i in k..=l {
            for j in v.at(k)..=v.at(l) {
                g.insert(i, j);
            }
        }
    }
    g
}

/// `Γ[v, w0]` straight from the definition: the union of the graphs of every
/// `u` with `v <= u`.
pub fn graph_of_interval_bruteforce(v: &Permutation) -> Result<LabeledGrid> {
    let n = v.n();
    if n > BRUTEFORCE_MAX_N {
        return Err(Error::CostGuard {
            n,
            max: BRUTEFORCE_MAX_N,
        });
    }
    let mut g = LabeledGrid::empty(n);
    for u in Permutation::all(n) {
        if v.bruhat_leq(&u)? {
            for i in 1..=n {
                g.insert(i, u.at(i));
            }
        }
    }
    Ok(g)
}

/// True iff `(i, j)` lies in the rectangle spanned by `(k, v(k))` and
/// `(l, v(l))` for `ni = <k, l>`. The point must not lie on `Γ(v)`.
pub fn is_sandwiched(point: (usize, usize), v: &Permutation, ni: NonInversion) -> Result<bool> {
    let (i, j) = point;
    let n = v.n();
    for x in [i, j, ni.i, ni.j] {
        if x == 0 || x > n {
            return Err(Error::IndexOutOfRange { index: x, bound: n });
        }
    }
    if v.at(i) == j {
        return Err(Error::Precondition(format!("({i}, {j}) lies on the graph of {v}")));
    }
    if ni.i >= ni.j || v.at(ni.i) >= v.at(ni.j) {
        return Err(Error::Precondition(format!(
            "<{}, {}> is not a non-inversion of {v}",
            ni.i, ni.j
        )));
    }
    Ok(sandwiches(v, ni, i, j))
}

fn sandwiches(v: &Permutation, ni: NonInversion, i: usize, j: usize) -> bool {
    ni.i <= i && i <= ni.j && v.at(ni.i) <= j && j <= v.at(ni.j)
}

/// True iff the largest square of `Γ[v, w0]` is one more than the largest
/// `min(j - i, v(j) - v(i))` over non-inversions (0 if there are none).
pub fn squares_match_noninversions(v: &Permutation) -> bool {
    let predicted = 1 + v
        .non_inversions()
        .iter()
        .map(|ni| (ni.j - ni.i).min(v.at(ni.j) - v.at(ni.i)))
        .max()
        .unwrap_or(0);
    graph_of_upper_interval(v).largest_square() == predicted
}

/// Cells off `Γ(v)` that are sandwiched, but only by non-inversions
/// involving position `i`.
pub fn deletion_region(v: &Permutation, i: usize) -> Result<LabeledGrid> {
    let n = v.n();
    if i == 0 || i > n {
        return Err(Error::IndexOutOfRange { index: i, bound: n });
    }
    let non_inversions = v.non_inversions();
    let mut q = LabeledGrid::empty(n);
    for p in 1..=n {
        for c in 1..=n {
            if v.at(p) == c {
                continue;
            }
            let mut covering = non_inversions.iter().filter(|&&ni| sandwiches(v, ni, p, c)).peekable();
            if covering.peek().is_none() {
                continue;
            }
            if covering.all(|ni| ni.i == i || ni.j == i) {
                q.insert(p, c);
            }
        }
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::LabeledGrid;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn example_graph() {
        let g = graph_of_upper_interval(&p("2413"));
        assert_eq!(g.len(), 12);
        assert_eq!(
            g.cells(),
            vec![
                (1, 2), (1, 3), (1, 4), (2, 2), (2, 3), (2, 4),
                (3, 1), (3, 2), (3, 3), (4, 1), (4, 2), (4, 3)
            ]
        );
        assert!(!g.contains(4, 4));
    }

    #[test]
    fn example_interval_listing() {
        let v = p("2413");
        let above: Vec<String> = Permutation::all(4)
            .filter(|u| v.bruhat_leq(u).unwrap())
            .map(|u| u.to_string())
            .collect();
        // the printed listing omits w0 = 4321, whose cells are already present
        let mut expected = vec!["2413", "4213", "3412", "2431", "4312", "4231", "3421", "4321"];
        expected.sort();
        assert_eq!(above, expected);
        assert_eq!(graph_of_interval_bruteforce(&v).unwrap(), graph_of_upper_interval(&v));
    }

    #[test]
    fn extreme_graphs() {
        for n in 1..6 {
            let w0 = Permutation::longest_element(n);
            let anti = LabeledGrid::from_cells(n, (1..=n).map(|i| (i, n + 1 - i))).unwrap();
            assert_eq!(graph_of_upper_interval(&w0), anti);
            assert_eq!(graph_of_interval_bruteforce(&w0).unwrap(), anti);
            assert_eq!(graph_of_upper_interval(&Permutation::identity(n)), LabeledGrid::full(n));
        }
        assert!(matches!(
            graph_of_interval_bruteforce(&Permutation::identity(8)),
            Err(Error::CostGuard { .. })
        ));
    }

    #[test]
    fn lemma_agreement_s5() {
        for v in Permutation::all(5) {
            assert_eq!(graph_of_interval_bruteforce(&v).unwrap(), graph_of_upper_interval(&v), "{v}");
        }
    }

    #[test]
    fn sandwich_examples() {
        let v = p("2413");
        assert!(is_sandwiched((1, 3), &v, NonInversion { i: 1, j: 2 }).unwrap());
        assert!(is_sandwiched((1, 2), &v, NonInversion { i: 1, j: 2 }).is_err());
        for ni in v.non_inversions() {
            assert!(!is_sandwiched((4, 4), &v, ni).unwrap());
        }
        assert!(is_sandwiched((1, 3), &v, NonInversion { i: 2, j: 3 }).is_err());
    }

    #[test]
    fn square_examples() {
        assert!(squares_match_noninversions(&p("2413")));
        assert!(squares_match_noninversions(&Permutation::longest_element(5)));
        assert!(squares_match_noninversions(&Permutation::identity(5)));
    }

    #[test]
    fn deletion_region_of_example() {
        let v = p("62785314");
        let q = deletion_region(&v, 2).unwrap();
        let x = v.delete_entry(2).unwrap();
        let expected = graph_of_upper_interval(&x);
        let reduced = graph_of_upper_interval(&v).difference(&q).delete_row_col(2, v.at(2));
        assert!(reduced.same_cells(&expected));
        assert!(!q.is_empty());
    }
}
