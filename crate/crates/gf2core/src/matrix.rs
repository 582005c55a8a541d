//! Sparse GF(2) matrices with dense bit-row elimination.
//!
//! Matrices are stored as sorted `(row, col)` position sets; generator counts
//! in the intended applications are small (at most a few hundred) while the
//! matrices themselves are sparse, so the set representation keeps equality,
//! hashing and serialization trivial.  Rank-type computations convert to
//! packed bit rows first and run ordinary Gaussian elimination there.

use std::collections::BTreeSet;

use crate::bits::BitVec;
use crate::error::Gf2Error;

/// A `rows x cols` matrix over GF(2).
///
/// By convention a matrix represents a linear map from a `cols`-dimensional
/// space to a `rows`-dimensional one, acting on column vectors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    entries: BTreeSet<(usize, usize)>,
}

impl Gf2Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Gf2Matrix {
            rows,
            cols,
            entries: BTreeSet::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Gf2Matrix {
            rows: n,
            cols: n,
            entries: (0..n).map(|i| (i, i)).collect(),
        }
    }

    pub fn from_entries(
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, Gf2Error> {
        let mut set = BTreeSet::new();
        for (r, c) in entries {
            if r >= rows || c >= cols {
                return Err(Gf2Error::Dimension(format!(
                    "entry ({r},{c}) outside {rows}x{cols}"
                )));
            }
            // Repeated positions cancel over GF(2).
            if !set.insert((r, c)) {
                set.remove(&(r, c));
            }
        }
        Ok(Gf2Matrix {
            rows,
            cols,
            entries: set,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.entries.contains(&(r, c))
    }

    /// Toggle a single entry.
    pub fn flip(&mut self, r: usize, c: usize) {
        assert!(r < self.rows && c < self.cols, "entry out of range");
        if !self.entries.insert((r, c)) {
            self.entries.remove(&(r, c));
        }
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols, "entry out of range");
        if value {
            self.entries.insert((r, c));
        } else {
            self.entries.remove(&(r, c));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.entries.iter().copied()
    }

    pub fn transpose(&self) -> Gf2Matrix {
        Gf2Matrix {
            rows: self.cols,
            cols: self.rows,
            entries: self.entries.iter().map(|&(r, c)| (c, r)).collect(),
        }
    }

    pub fn add(&self, other: &Gf2Matrix) -> Result<Gf2Matrix, Gf2Error> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Gf2Error::Dimension(format!(
                "add {}x{} with {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let entries = self
            .entries
            .symmetric_difference(&other.entries)
            .copied()
            .collect();
        Ok(Gf2Matrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    /// Matrix product `self * other` (apply `other` first).
    pub fn compose(&self, other: &Gf2Matrix) -> Result<Gf2Matrix, Gf2Error> {
        if self.cols != other.rows {
            return Err(Gf2Error::Dimension(format!(
                "compose {}x{} with {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        // Row r of the product is the XOR of the rows of `other` selected by
        // row r of `self`.
        let self_rows = self.to_rows();
        let other_rows = other.to_rows();
        let mut out = BTreeSet::new();
        for (r, sel) in self_rows.iter().enumerate() {
            let mut acc = BitVec::zeros(other.cols);
            for k in sel.ones() {
                acc.xor_assign(&other_rows[k]);
            }
            for c in acc.ones() {
                out.insert((r, c));
            }
        }
        Ok(Gf2Matrix {
            rows: self.rows,
            cols: other.cols,
            entries: out,
        })
    }

    /// Apply to a column vector.
    pub fn apply(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        let mut out = BitVec::zeros(self.rows);
        for &(r, c) in &self.entries {
            if v.get(c) {
                out.flip(r);
            }
        }
        out
    }

    /// Dense packed rows, for elimination.
    pub fn to_rows(&self) -> Vec<BitVec> {
        let mut rows = vec![BitVec::zeros(self.cols); self.rows];
        for &(r, c) in &self.entries {
            rows[r].set(c, true);
        }
        rows
    }

    /// Dense packed columns.
    pub fn to_cols(&self) -> Vec<BitVec> {
        let mut cols = vec![BitVec::zeros(self.rows); self.cols];
        for &(r, c) in &self.entries {
            cols[c].set(r, true);
        }
        cols
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.to_rows();
        gauss_rank(&mut rows)
    }

    /// A basis of `{ x : self * x = 0 }`.
    ///
    /// Pivot columns are chosen following `col_order` (a permutation of the
    /// column indices), which fixes the basis deterministically; pass
    /// `0..cols` for plain index order.
    pub fn kernel_basis(&self, col_order: &[usize]) -> Vec<BitVec> {
        assert_eq!(col_order.len(), self.cols, "column order must be a permutation");
        let mut rows = self.to_rows();
        // Reduced echelon form with pivots chosen along col_order.
        let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, pivot col)
        let mut next = 0usize;
        for &col in col_order {
            let Some(r) = (next..rows.len()).find(|&r| rows[r].get(col)) else {
                continue;
            };
            rows.swap(next, r);
            let pivot_row = rows[next].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != next && row.get(col) {
                    row.xor_assign(&pivot_row);
                }
            }
            pivots.push((next, col));
            next += 1;
        }
        let pivot_cols: BTreeSet<usize> = pivots.iter().map(|&(_, c)| c).collect();
        let mut basis = Vec::new();
        for &col in col_order {
            if pivot_cols.contains(&col) {
                continue;
            }
            // Free column: back-substitute into the pivot columns.
            let mut v = BitVec::zeros(self.cols);
            v.set(col, true);
            for &(r, pc) in &pivots {
                if rows[r].get(col) {
                    v.set(pc, true);
                }
            }
            basis.push(v);
        }
        basis
    }

    /// A basis of the column space.
    pub fn image_basis(&self) -> Vec<BitVec> {
        let mut echelon: Vec<BitVec> = Vec::new();
        for col in self.to_cols() {
            let mut v = col;
            for e in &echelon {
                if let Some(lead) = e.first_one() {
                    if v.get(lead) {
                        v.xor_assign(e);
                    }
                }
            }
            if !v.is_zero() {
                echelon.push(v);
            }
        }
        echelon
    }

    /// Solve `self * x = rhs`, returning one solution if any exists.
    pub fn solve(&self, rhs: &BitVec) -> Option<BitVec> {
        assert_eq!(rhs.len(), self.rows, "rhs length mismatch");
        // Echelonize the columns while tracking which combination of unknown
        // bits produced each reduced column.
        let mut echelon: Vec<BitVec> = Vec::new();
        let mut combos: Vec<BitVec> = Vec::new();
        for (j, col) in self.to_cols().into_iter().enumerate() {
            let mut v = col;
            let mut combo = BitVec::zeros(self.cols);
            combo.set(j, true);
            for (e, c) in echelon.iter().zip(&combos) {
                if let Some(lead) = e.first_one() {
                    if v.get(lead) {
                        v.xor_assign(e);
                        combo.xor_assign(c);
                    }
                }
            }
            if !v.is_zero() {
                echelon.push(v);
                combos.push(combo);
            }
        }
        let mut target = rhs.clone();
        let mut x = BitVec::zeros(self.cols);
        for (e, c) in echelon.iter().zip(&combos) {
            if let Some(lead) = e.first_one() {
                if target.get(lead) {
                    target.xor_assign(e);
                    x.xor_assign(c);
                }
            }
        }
        if target.is_zero() {
            Some(x)
        } else {
            None
        }
    }

    /// Inverse of a square matrix, if it exists.
    pub fn inverse(&self) -> Result<Gf2Matrix, Gf2Error> {
        if self.rows != self.cols {
            return Err(Gf2Error::NotInvertible);
        }
        let n = self.rows;
        let mut rows = self.to_rows();
        let mut inv: Vec<BitVec> = Gf2Matrix::identity(n).to_rows();
        // Invertibility forces a pivot in every column, so the pivot row for
        // column `col` is always row `col` after the swap.
        for col in 0..n {
            let Some(r) = (col..n).find(|&r| rows[r].get(col)) else {
                return Err(Gf2Error::NotInvertible);
            };
            rows.swap(col, r);
            inv.swap(col, r);
            let (pr, pi) = (rows[col].clone(), inv[col].clone());
            for i in 0..n {
                if i != col && rows[i].get(col) {
                    rows[i].xor_assign(&pr);
                    inv[i].xor_assign(&pi);
                }
            }
        }
        let mut entries = BTreeSet::new();
        for (r, row) in inv.iter().enumerate() {
            for c in row.ones() {
                entries.insert((r, c));
            }
        }
        Ok(Gf2Matrix {
            rows: n,
            cols: n,
            entries,
        })
    }
}

/// Rank by in-place elimination; consumes the row list order.
pub fn gauss_rank(rows: &mut [BitVec]) -> usize {
    let mut rank = 0usize;
    let n = rows.len();
    let cols = rows.first().map_or(0, |r| r.len());
    let mut next = 0usize;
    for col in 0..cols {
        let Some(r) = (next..n).find(|&r| rows[r].get(col)) else {
            continue;
        };
        rows.swap(next, r);
        let pivot = rows[next].clone();
        for row in rows.iter_mut().skip(next + 1) {
            if row.get(col) {
                row.xor_assign(&pivot);
            }
        }
        next += 1;
        rank += 1;
    }
    rank
}

impl std::fmt::Display for Gf2Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for row in self.to_rows() {
            writeln!(f, "{row}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: usize, cols: usize, e: &[(usize, usize)]) -> Gf2Matrix {
        Gf2Matrix::from_entries(rows, cols, e.iter().copied()).unwrap()
    }

    #[test]
    fn duplicate_entries_cancel() {
        let a = Gf2Matrix::from_entries(2, 2, [(0, 0), (0, 0), (1, 1)]).unwrap();
        assert!(!a.get(0, 0));
        assert!(a.get(1, 1));
    }

    #[test]
    fn compose_against_hand_product() {
        // [[1,1],[0,1]] * [[1,0],[1,1]] = [[0,1],[1,1]]
        let a = m(2, 2, &[(0, 0), (0, 1), (1, 1)]);
        let b = m(2, 2, &[(0, 0), (1, 0), (1, 1)]);
        let ab = a.compose(&b).unwrap();
        assert_eq!(ab, m(2, 2, &[(0, 1), (1, 0), (1, 1)]));
    }

    #[test]
    fn rank_kernel_image_consistency() {
        // 3x4 matrix with rank 2.
        let a = m(3, 4, &[(0, 0), (0, 1), (1, 1), (1, 2), (2, 0), (2, 2)]);
        assert_eq!(a.rank(), 2);
        let order: Vec<usize> = (0..4).collect();
        let ker = a.kernel_basis(&order);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert!(a.apply(v).is_zero());
        }
        assert_eq!(a.image_basis().len(), 2);
    }

    #[test]
    fn kernel_respects_pivot_order() {
        let a = m(1, 3, &[(0, 0), (0, 1), (0, 2)]);
        let ker_fwd = a.kernel_basis(&[0, 1, 2]);
        let ker_rev = a.kernel_basis(&[2, 1, 0]);
        assert_eq!(ker_fwd.len(), 2);
        assert_eq!(ker_rev.len(), 2);
        for v in ker_fwd.iter().chain(&ker_rev) {
            assert!(a.apply(v).is_zero());
        }
    }

    #[test]
    fn solve_and_inverse() {
        let a = m(3, 3, &[(0, 0), (0, 1), (1, 1), (1, 2), (2, 2)]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.compose(&inv).unwrap(), Gf2Matrix::identity(3));
        let rhs = BitVec::from_indices(3, [0, 2]);
        let x = a.solve(&rhs).unwrap();
        assert_eq!(a.apply(&x), rhs);

        let singular = m(2, 2, &[(0, 0), (1, 0)]);
        assert!(singular.inverse().is_err());
        let bad_rhs = BitVec::from_indices(2, [1]);
        assert!(singular.solve(&bad_rhs).is_none());
    }

    #[test]
    fn transpose_involution() {
        let a = m(2, 3, &[(0, 2), (1, 0)]);
        assert_eq!(a.transpose().transpose(), a);
        assert_eq!(a.transpose().rows(), 3);
    }
}
