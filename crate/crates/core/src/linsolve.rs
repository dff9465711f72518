//! Direct solves with `op - shift * I`.
//!
//! The operator is reordered with reverse Cuthill-McKee (bandwidth 1 for
//! intervals, 2 for circles, about the mask width in 2D) and factored by a
//! banded LU with partial pivoting.

use std::collections::VecDeque;

use crate::error::{DriftError, Result};
use crate::sparse::SparseOperator;

/// Reverse Cuthill-McKee permutation: `perm[new] = old`.
pub fn reverse_cuthill_mckee(op: &SparseOperator) -> Vec<usize> {
    let adj = op.symmetric_adjacency();
    let n = adj.len();
    let degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    let mut by_degree: Vec<usize> = (0..n).collect();
    by_degree.sort_by_key(|&i| (degree[i], i));
    for &start in &by_degree {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            order.push(i);
            let mut next: Vec<usize> = adj[i].iter().copied().filter(|&j| !seen[j]).collect();
            next.sort_by_key(|&j| (degree[j], j));
            for j in next {
                seen[j] = true;
                queue.push_back(j);
            }
        }
    }
    order.reverse();
    order
}

/// Banded LU factors of `P (op - shift I) P^T`.
#[derive(Debug, Clone)]
pub struct LuFactorization {
    n: usize,
    lower: usize,
    upper: usize,
    width: usize,
    band: Vec<f64>,
    pivots: Vec<usize>,
    /// `perm[new] = old`.
    perm: Vec<usize>,
    norm_inf: f64,
    pivot_ratio: f64,
}

impl LuFactorization {
    pub fn factor(op: &SparseOperator, shift: f64) -> Result<Self> {
        let n = op.dim();
        if n == 0 {
            return Err(DriftError::InvalidArgument("empty operator".into()));
        }
        let shifted = op.shifted(shift);
        let perm = reverse_cuthill_mckee(&shifted);
        let mut inv = vec![0; n];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }

        let (mut lower, mut upper) = (0usize, 0usize);
        for old_r in 0..n {
            let r = inv[old_r];
            for (old_c, _) in shifted.row(old_r) {
                let c = inv[old_c];
                if c < r {
                    lower = lower.max(r - c);
                } else {
                    upper = upper.max(c - r);
                }
            }
        }
        // Row interchanges widen the upper band by `lower`.
        let width = 2 * lower + upper + 1;
        let mut lu = Self {
            n,
            lower,
            upper,
            width,
            band: vec![0.0; n * width],
            pivots: vec![0; n],
            perm,
            norm_inf: shifted.norm_inf(),
            pivot_ratio: 1.0,
        };
        for old_r in 0..n {
            let r = inv[old_r];
            for (old_c, v) in shifted.row(old_r) {
                let at = lu.at(r, inv[old_c]);
                lu.band[at] += v;
            }
        }
        lu.eliminate()?;
        Ok(lu)
    }

    #[inline]
    fn at(&self, r: usize, c: usize) -> usize {
        debug_assert!(c + self.lower >= r && c <= r + self.lower + self.upper);
        r * self.width + (c + self.lower - r)
    }

    fn eliminate(&mut self) -> Result<()> {
        let n = self.n;
        let threshold = n as f64 * f64::EPSILON * self.norm_inf;
        let (mut min_pivot, mut max_pivot) = (f64::INFINITY, 0.0f64);
        for k in 0..n {
            let last_row = (k + self.lower).min(n - 1);
            let last_col = (k + self.lower + self.upper).min(n - 1);
            let mut p = k;
            let mut best = self.band[self.at(k, k)].abs();
            for r in k + 1..=last_row {
                let v = self.band[self.at(r, k)].abs();
                if v > best {
                    best = v;
                    p = r;
                }
            }
            min_pivot = min_pivot.min(best);
            max_pivot = max_pivot.max(best);
            if !(best > threshold) {
                return Err(DriftError::NumericalFailure {
                    reason: format!(
                        "singular system: pivot {best:.3e} at step {k} below {threshold:.3e}"
                    ),
                    pivot_ratio: if max_pivot > 0.0 {
                        min_pivot / max_pivot
                    } else {
                        0.0
                    },
                });
            }
            self.pivots[k] = p;
            if p != k {
                for c in k..=last_col {
                    let (a, b) = (self.at(k, c), self.at(p, c));
                    self.band.swap(a, b);
                }
            }
            let pivot = self.band[self.at(k, k)];
            for r in k + 1..=last_row {
                let idx = self.at(r, k);
                let l = self.band[idx] / pivot;
                self.band[idx] = l;
                if l == 0.0 {
                    continue;
                }
                for c in k + 1..=last_col {
                    let src = self.band[self.at(k, c)];
                    let dst = self.at(r, c);
                    self.band[dst] -= l * src;
                }
            }
        }
        self.pivot_ratio = min_pivot / max_pivot;
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// min |pivot| / max |pivot|, a crude conditioning indicator.
    pub fn pivot_ratio(&self) -> f64 {
        self.pivot_ratio
    }

    /// Infinity norm of the factored (shifted) operator.
    pub fn norm_inf(&self) -> f64 {
        self.norm_inf
    }

    #[allow(clippy::needless_range_loop)]
    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        assert_eq!(rhs.len(), self.n, "rhs length");
        let n = self.n;
        let mut y: Vec<f64> = self.perm.iter().map(|&old| rhs[old]).collect();
        for k in 0..n {
            y.swap(k, self.pivots[k]);
            let yk = y[k];
            if yk != 0.0 {
                for r in k + 1..=(k + self.lower).min(n - 1) {
                    y[r] -= self.band[self.at(r, k)] * yk;
                }
            }
        }
        for k in (0..n).rev() {
            let mut s = y[k];
            for c in k + 1..=(k + self.lower + self.upper).min(n - 1) {
                s -= self.band[self.at(k, c)] * y[c];
            }
            y[k] = s / self.band[self.at(k, k)];
        }
        let mut x = vec![0.0; n];
        for (new, &old) in self.perm.iter().enumerate() {
            x[old] = y[new];
        }
        x
    }
}

fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Normwise backward error accepted by [`solve_linear`].
pub const SOLVE_BACKWARD_TOL: f64 = 1e-12;

/// Solve `(op - shift I) x = rhs`.
///
/// One step of iterative refinement is applied. The solve fails when a pivot
/// collapses, when `||A|| ||x|| / ||rhs||` shows a condition number beyond
/// what double precision can resolve, or when the backward error
/// `||A x - rhs|| / (||A|| ||x|| + ||rhs||)` exceeds [`SOLVE_BACKWARD_TOL`].
pub fn solve_linear(op: &SparseOperator, shift: f64, rhs: &[f64]) -> Result<Vec<f64>> {
    if rhs.len() != op.dim() {
        return Err(DriftError::InvalidArgument(format!(
            "rhs has length {}, operator is {}x{}",
            rhs.len(),
            op.dim(),
            op.dim()
        )));
    }
    let lu = LuFactorization::factor(op, shift)?;
    let shifted = op.shifted(shift);
    let mut x = lu.solve(rhs);
    let residual = |x: &[f64]| -> Vec<f64> {
        let ax = shifted.matvec(x);
        rhs.iter().zip(&ax).map(|(b, a)| b - a).collect()
    };
    let correction = lu.solve(&residual(&x));
    x.iter_mut().zip(&correction).for_each(|(xi, d)| *xi += d);

    let rhs_norm = norm_inf(rhs);
    let x_norm = norm_inf(&x);
    if x.iter().any(|v| !v.is_finite()) {
        return Err(DriftError::NumericalFailure {
            reason: "non-finite solution".into(),
            pivot_ratio: lu.pivot_ratio(),
        });
    }
    if rhs_norm > 0.0 {
        let cond_lower = lu.norm_inf() * x_norm / rhs_norm;
        if cond_lower > 1.0 / (1e3 * f64::EPSILON) {
            return Err(DriftError::NumericalFailure {
                reason: format!("near-singular system: condition number at least {cond_lower:.3e}"),
                pivot_ratio: lu.pivot_ratio(),
            });
        }
    }
    let r_norm = norm_inf(&residual(&x));
    let scale = lu.norm_inf() * x_norm + rhs_norm;
    if scale > 0.0 && r_norm > SOLVE_BACKWARD_TOL * scale {
        return Err(DriftError::NumericalFailure {
            reason: format!("backward error {:.3e} too large", r_norm / scale),
            pivot_ratio: lu.pivot_ratio(),
        });
    }
    Ok(x)
}
