use serde::{Deserialize, Serialize};

use super::LabeledGrid;
use crate::error::{Error, Result};
use crate::perm::{pattern_2143, Permutation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoxColor {
    /// Corner below the antidiagonal.
    Red,
    /// Corner on the antidiagonal.
    Green,
    /// Corner above the antidiagonal.
    Blue,
    /// Both `(i, v_i)` and its antidiagonal mirror are spanning corners.
    Purple,
}

/// The square `B(i, v_i)` with one corner at `(i, v_i)` and two corners on
/// the antidiagonal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundingBox {
    pub corner: (usize, usize),
    /// Spanning corners producing this box: one, or two for a purple box.
    pub corners: Vec<(usize, usize)>,
    pub top: usize,
    pub bottom: usize,
    pub left: usize,
    pub right: usize,
    pub color: BoxColor,
}

impl BoundingBox {
    fn of_corner(n: usize, i: usize, vi: usize) -> Self {
        let (top, bottom) = (i.min(n + 1 - vi), i.max(n + 1 - vi));
        let (left, right) = (vi.min(n + 1 - i), vi.max(n + 1 - i));
        let color = match (i + vi).cmp(&(n + 1)) {
            std::cmp::Ordering::Less => BoxColor::Blue,
            std::cmp::Ordering::Equal => BoxColor::Green,
            std::cmp::Ordering::Greater => BoxColor::Red,
        };
        Self {
            corner: (i, vi),
            corners: vec![(i, vi)],
            top,
            bottom,
            left,
            right,
            color,
        }
    }

    fn region(&self) -> (usize, usize, usize, usize) {
        (self.top, self.bottom, self.left, self.right)
    }

    fn strictly_inside(&self, other: &BoundingBox) -> bool {
        self.region() != other.region()
            && other.top <= self.top
            && self.bottom <= other.bottom
            && other.left <= self.left
            && self.right <= other.right
    }

    pub fn side(&self) -> usize {
        self.bottom + 1 - self.top
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        (self.top..=self.bottom).contains(&i) && (self.left..=self.right).contains(&j)
    }

    pub fn to_grid(&self, n: usize) -> LabeledGrid {
        let mut g = LabeledGrid::empty(n);
        for i in self.top..=self.bottom {
            for j in self.left..=self.right {
                g.insert(i, j);
            }
        }
        g
    }
}

/// Maximal boxes `B(i, v_i)` of `Γ[v, w0]`, ordered by their top row (then
/// left column). A box reached from two mirror corners is listed once, purple.
pub fn bounding_boxes(v: &Permutation) -> Vec<BoundingBox> {
    let n = v.n();
    let all: Vec<BoundingBox> = (1..=n).map(|i| BoundingBox::of_corner(n, i, v.at(i))).collect();
    let mut maximal: Vec<BoundingBox> = Vec::new();
    for b in &all {
        if all.iter().any(|other| b.strictly_inside(other)) {
            continue;
        }
        match maximal.iter_mut().find(|m| m.region() == b.region()) {
            Some(existing) => {
                existing.corners.push(b.corner);
                existing.corners.sort_unstable();
                existing.corner = existing.corners[0];
                existing.color = BoxColor::Purple;
            }
            None => maximal.push(b.clone()),
        }
    }
    maximal.sort_by_key(|b| (b.top, b.left));
    maximal
}

/// Corners `(i, v_i)` of all bounding boxes, sorted by row.
pub fn spanning_corners(v: &Permutation) -> Vec<(usize, usize)> {
    let mut corners: Vec<_> = bounding_boxes(v).into_iter().flat_map(|b| b.corners).collect();
    corners.sort_unstable();
    corners
}

/// For 2143-avoiding `v` with `w0 v` outside every maximal parabolic
/// subgroup: true iff the bounding boxes (when there are several) alternate
/// blue/red with no purple box.
pub fn boxes_alternate(v: &Permutation) -> Result<bool> {
    if !v.avoids(&pattern_2143()) {
        return Err(Error::PatternPrecondition {
            v: v.to_string(),
            pattern: "2143".into(),
        });
    }
    let w0v = Permutation::longest_element(v.n()).compose(v)?;
    if w0v.is_in_maximal_parabolic() {
        return Err(Error::Precondition(format!(
            "w0·{v} = {w0v} lies in a maximal parabolic subgroup"
        )));
    }
    let boxes = bounding_boxes(v);
    if boxes.len() <= 1 {
        return Ok(true);
    }
    let two_colored = boxes
        .iter()
        .all(|b| matches!(b.color, BoxColor::Blue | BoxColor::Red));
    let alternating = boxes.windows(2).all(|w| w[0].color != w[1].color);
    Ok(two_colored && alternating)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::graph_of_upper_interval;

    fn figure_word() -> Permutation {
        "6 10 4 7 8 9 5 3 1 2".parse().unwrap()
    }

    #[test]
    fn figure_boxes() {
        let v = figure_word();
        assert_eq!(
            spanning_corners(&v),
            vec![(1, 6), (3, 4), (6, 9), (8, 3), (9, 1), (10, 2)]
        );
        let colors: Vec<_> = bounding_boxes(&v).iter().map(|b| b.color).collect();
        use BoxColor::*;
        assert_eq!(colors, vec![Blue, Red, Blue, Green, Purple]);
        assert!(boxes_alternate(&v).is_err());
    }

    #[test]
    fn antidiagonal_boxes_are_green() {
        let n = 5;
        let boxes = bounding_boxes(&Permutation::longest_element(n));
        assert_eq!(boxes.len(), n);
        for (k, b) in boxes.iter().enumerate() {
            assert_eq!(b.color, BoxColor::Green);
            assert_eq!(b.corner, (k + 1, n - k));
            assert_eq!(b.side(), 1);
        }
    }

    #[test]
    fn boxes_cover_graph_s6() {
        for v in Permutation::all(6) {
            let g = graph_of_upper_interval(&v);
            let boxes = bounding_boxes(&v);
            for (i, j) in g.cells() {
                assert!(boxes.iter().any(|b| b.contains(i, j)), "{v} ({i},{j})");
            }
        }
    }

    #[test]
    fn single_box_is_vacuous() {
        // w0 v = 2 3 1 is not in a maximal parabolic; v = 2 1 3 has one box
        let v: Permutation = "213".parse().unwrap();
        assert_eq!(bounding_boxes(&v).len(), 1);
        assert!(boxes_alternate(&v).unwrap());
    }
}
