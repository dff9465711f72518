//! Compressed sparse row storage for square operators over interior nodes.

use crate::error::{invalid, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SparseOperator {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl SparseOperator {
    /// Assemble from `(row, col, value)` triplets. Duplicates are summed and
    /// columns within a row end up sorted.
    pub fn from_triplets(n: usize, triplets: &[(usize, usize, f64)]) -> Result<Self> {
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for &(r, c, v) in triplets {
            if r >= n || c >= n {
                return invalid(format!("triplet ({r}, {c}) out of bounds for n = {n}"));
            }
            rows[r].push((c, v));
        }
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        for mut row in rows {
            row.sort_by_key(|&(c, _)| c);
            for (c, v) in row {
                if col_idx.len() > *row_ptr.last().unwrap() && *col_idx.last().unwrap() == c {
                    *values.last_mut().unwrap() += v;
                } else {
                    col_idx.push(c);
                    values.push(v);
                }
            }
            row_ptr.push(col_idx.len());
        }
        Ok(Self {
            n,
            row_ptr,
            col_idx,
            values,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n,
            row_ptr: (0..=n).collect(),
            col_idx: (0..n).collect(),
            values: vec![1.0; n],
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            row_ptr: vec![0; n + 1],
            col_idx: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    pub fn col_idx(&self) -> &[usize] {
        &self.col_idx
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Iterate over `(col, value)` of one row.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[range.clone()]
            .iter()
            .copied()
            .zip(self.values[range].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.row(i).find(|&(c, _)| c == j).map_or(0.0, |(_, v)| v)
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n, "matvec dimension mismatch");
        (0..self.n)
            .map(|i| self.row(i).map(|(c, v)| v * x[c]).sum())
            .collect()
    }

    /// `A x` evaluated as `sum_j a_ij (x_j - x_i) + (sum_j a_ij) x_i`.
    ///
    /// For stencil operators whose rows nearly sum to zero this avoids the
    /// O(eps / h^2) cancellation of the plain product on smooth vectors.
    pub fn matvec_differenced(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n, "matvec dimension mismatch");
        (0..self.n)
            .map(|i| {
                let mut diff = 0.0;
                let mut rowsum = 0.0;
                for (c, v) in self.row(i) {
                    rowsum += v;
                    if c != i {
                        diff += v * (x[c] - x[i]);
                    }
                }
                diff + rowsum * x[i]
            })
            .collect()
    }

    /// Sum of each row.
    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.n)
            .map(|i| self.row(i).map(|(_, v)| v).sum())
            .collect()
    }

    /// Largest absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| self.row(i).map(|(_, v)| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// `alpha * self + beta * other`.
    pub fn linear_combination(&self, alpha: f64, other: &Self, beta: f64) -> Result<Self> {
        if self.n != other.n {
            return invalid(format!(
                "operator dimensions differ: {} vs {}",
                self.n, other.n
            ));
        }
        let mut triplets = Vec::with_capacity(self.nnz() + other.nnz());
        for i in 0..self.n {
            triplets.extend(self.row(i).map(|(c, v)| (i, c, alpha * v)));
            triplets.extend(other.row(i).map(|(c, v)| (i, c, beta * v)));
        }
        Self::from_triplets(self.n, &triplets)
    }

    /// `self - shift * I`.
    pub fn shifted(&self, shift: f64) -> Self {
        if shift == 0.0 {
            return self.clone();
        }
        self.linear_combination(1.0, &Self::identity(self.n), -shift)
            .expect("same dimension")
    }

    pub fn scale(&self, alpha: f64) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= alpha);
        out
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut dense = vec![vec![0.0; self.n]; self.n];
        for (i, row) in dense.iter_mut().enumerate() {
            for (c, v) in self.row(i) {
                row[c] = v;
            }
        }
        dense
    }

    /// Positive diagonal and nonpositive off-diagonals.
    pub fn has_m_matrix_sign_pattern(&self) -> bool {
        (0..self.n).all(|i| {
            self.row(i)
                .all(|(c, v)| if c == i { v > 0.0 } else { v <= 0.0 })
                && self.get(i, i) > 0.0
        })
    }

    /// Undirected adjacency of the sparsity pattern (diagonal excluded).
    pub(crate) fn symmetric_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for i in 0..self.n {
            for (c, v) in self.row(i) {
                if c != i && v != 0.0 {
                    adj[i].push(c);
                    adj[c].push(i);
                }
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        adj
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicates_are_summed() {
        let op =
            SparseOperator::from_triplets(2, &[(0, 1, 1.0), (0, 1, 2.0), (1, 0, -1.0)]).unwrap();
        assert_eq!(op.nnz(), 2);
        assert_eq!(op.get(0, 1), 3.0);
        assert!(op.row_ptr().windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn out_of_bounds_triplet_rejected() {
        assert!(SparseOperator::from_triplets(2, &[(2, 0, 1.0)]).is_err());
    }

    #[test]
    fn differenced_matvec_agrees_with_plain() {
        let op = SparseOperator::from_triplets(
            3,
            &[
                (0, 0, 2.0),
                (0, 1, -1.0),
                (1, 0, -1.0),
                (1, 1, 2.5),
                (1, 2, -1.0),
                (2, 1, -1.0),
                (2, 2, 2.0),
            ],
        )
        .unwrap();
        let x = [0.3, 1.0, -0.7];
        let a = op.matvec(&x);
        let b = op.matvec_differenced(&x);
        for (p, q) in a.iter().zip(&b) {
            assert!((p - q).abs() < 1e-14);
        }
    }

    #[test]
    fn shifted_subtracts_identity() {
        let op = SparseOperator::identity(3).scale(4.0).shifted(1.5);
        assert_eq!(op.diagonal(), vec![2.5; 3]);
    }
}
