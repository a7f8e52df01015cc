use crate::perm::Permutation;

/// `Γ[v, w0]` as a block-antidiagonal grid: an upper-right block on rows
/// `1..=n-j`, columns `j+1..=n` and a lower-left block on rows `n-j+1..=n`,
/// columns `1..=j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockSplit {
    /// Side of the lower-left block.
    pub j: usize,
    /// `v1 ∈ S_{n-j}` with `Γ[v1, w0]` the upper-right block.
    pub upper_right: Permutation,
    /// `v2 ∈ S_j` with `Γ[v2, w0]` the lower-left block.
    pub lower_left: Permutation,
}

/// The split with the smallest lower-left block, if `Γ[v, w0]` has one.
///
/// The grid splits at `j` exactly when the last `j` positions of `v` hold
/// the values `1..=j`: every pair across the two blocks is then an
/// inversion, so nothing is sandwiched outside the blocks.
pub fn block_antidiagonal_split(v: &Permutation) -> Option<BlockSplit> {
    let n = v.n();
    let j = (1..n).find(|&j| (n - j + 1..=n).all(|i| v.at(i) <= j))?;
    let upper: Vec<usize> = (1..=n - j).map(|i| v.at(i) - j).collect();
    let lower: Vec<usize> = (n - j + 1..=n).map(|i| v.at(i)).collect();
    Some(BlockSplit {
        j,
        upper_right: Permutation::new(upper).expect("upper block is a permutation"),
        lower_left: Permutation::new(lower).expect("lower block is a permutation"),
    })
}
