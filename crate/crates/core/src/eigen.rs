//! Principal eigenpair of the drift operator `A = -laplacian - advection`.
//!
//! `A` is an irreducible M-matrix on a connected grid, so `A^{-1}` is
//! entrywise positive and inverse iteration from a positive vector converges
//! to the Perron pair: the real eigenvalue of smallest real part, with a
//! strictly positive eigenvector.

use crate::error::{DriftError, Result};
use crate::grid::{advection_matrix, laplacian_matrix, AdvectionScheme, DriftField, Grid};
use crate::linsolve::LuFactorization;
use crate::sparse::SparseOperator;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 10_000;

/// A converged principal eigenpair.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralResult {
    pub lambda: f64,
    /// Strictly positive, normalized so that its maximum is 1.
    pub eigenfunction: Vec<f64>,
    pub iterations: usize,
    /// `||A u - lambda u||_inf / ||u||_inf`.
    pub residual: f64,
}

/// `A = -laplacian(grid) - advection(grid, drift)`.
pub fn assemble_drift_operator(
    grid: &Grid,
    drift: &DriftField,
    scheme: AdvectionScheme,
) -> Result<SparseOperator> {
    let lap = laplacian_matrix(grid);
    let adv = advection_matrix(grid, drift, scheme)?;
    lap.linear_combination(-1.0, &adv, -1.0)
}

/// `||op u - lambda u||_inf / ||u||_inf`, with the product evaluated in
/// differenced form to keep stencil cancellation out of the result.
pub fn residual(op: &SparseOperator, lambda: f64, u: &[f64]) -> f64 {
    assert_eq!(op.dim(), u.len(), "residual: dimension mismatch");
    let au = op.matvec_differenced(u);
    let num = au
        .iter()
        .zip(u)
        .fold(0.0f64, |m, (a, x)| m.max((a - lambda * x).abs()));
    let den = u.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if den == 0.0 {
        return num;
    }
    num / den
}

/// Operators with vanishing row sums (closed domains without boundary)
/// annihilate the constant vector, which is then the Perron vector.
fn annihilates_constants(op: &SparseOperator) -> bool {
    (0..op.dim()).all(|i| {
        let (sum, abs) = op
            .row(i)
            .fold((0.0, 0.0), |(s, a), (_, v)| (s + v, a + v.abs()));
        sum.abs() <= 1e-12 * abs.max(f64::MIN_POSITIVE)
    })
}

/// Zero-shift inverse power iteration from the all-ones vector.
///
/// Each step solves `A x = u_prev` and sets `lambda = 1 / max x`,
/// `u = x / max x`. Since `A u = lambda u_prev`, the residual of the pair is
/// `lambda ||u_prev - u||_inf`, which is what the stopping test uses; it
/// does not suffer the `eps / h^2` rounding of an explicit product.
pub fn principal_eigenpair(
    op: &SparseOperator,
    tol: f64,
    max_iter: usize,
) -> Result<SpectralResult> {
    if !(tol > 0.0) {
        return Err(DriftError::InvalidArgument(format!(
            "tolerance {tol} must be positive"
        )));
    }
    if max_iter == 0 {
        return Err(DriftError::InvalidArgument(
            "max_iter must be at least 1".into(),
        ));
    }
    let n = op.dim();
    if n == 0 {
        return Err(DriftError::InvalidArgument("empty operator".into()));
    }
    if annihilates_constants(op) {
        return Ok(SpectralResult {
            lambda: 0.0,
            eigenfunction: vec![1.0; n],
            iterations: 0,
            residual: residual(op, 0.0, &vec![1.0; n]),
        });
    }

    let lu = LuFactorization::factor(op, 0.0)?;
    let mut u = vec![1.0; n];
    let mut last_residual = f64::INFINITY;
    for iteration in 1..=max_iter {
        let x = lu.solve(&u);
        if let Some(bad) = x.iter().position(|&v| !(v > 0.0)) {
            return Err(DriftError::Internal(format!(
                "nonpositive iterate {} at node {bad}: operator is not an M-matrix",
                x[bad]
            )));
        }
        let peak = x.iter().copied().fold(0.0, f64::max);
        let lambda = 1.0 / peak;
        let next: Vec<f64> = x.iter().map(|v| v / peak).collect();
        let step = u
            .iter()
            .zip(&next)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        last_residual = lambda * step;
        u = next;
        if last_residual < tol {
            return Ok(SpectralResult {
                lambda,
                eigenfunction: u,
                iterations: iteration,
                residual: last_residual,
            });
        }
    }
    Err(DriftError::NoConvergence {
        iterations: max_iter,
        last_residual,
        history: Vec::new(),
    })
}

/// Assemble and solve in one call with default tolerances.
pub fn solve_drift_problem(
    grid: &Grid,
    drift: &DriftField,
    scheme: AdvectionScheme,
) -> Result<SpectralResult> {
    let op = assemble_drift_operator(grid, drift, scheme)?;
    principal_eigenpair(&op, DEFAULT_TOL, DEFAULT_MAX_ITER)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn zero_drift_solve(a: f64, b: f64, m: usize) -> SpectralResult {
        let g = Grid::interval(a, b, m).unwrap();
        solve_drift_problem(
            &g,
            &DriftField::zero(&g, 0.0).unwrap(),
            AdvectionScheme::Hybrid,
        )
        .unwrap()
    }

    #[test]
    fn discrete_dirichlet_eigenvalue_small_grid() {
        let r = zero_drift_solve(0.0, 1.0, 3);
        let exact = 32.0 * (1.0 - (PI / 4.0).cos());
        assert!((r.lambda - exact).abs() < 1e-10, "{}", r.lambda);
        assert!((exact - 9.37258).abs() < 1e-5);
    }

    #[test]
    fn unit_interval_approaches_pi_squared() {
        let r = zero_drift_solve(0.0, 1.0, 199);
        assert!((r.lambda / (PI * PI) - 1.0).abs() < 1e-3);
        let g = Grid::interval(0.0, 1.0, 199).unwrap();
        for (u, x) in r.eigenfunction.iter().zip(g.coords()) {
            assert!((u - (PI * x[0]).sin()).abs() < 1e-4);
        }
    }

    #[test]
    fn symmetric_interval_quarter_pi_squared() {
        let r = zero_drift_solve(-1.0, 1.0, 399);
        assert!((r.lambda / (PI * PI / 4.0) - 1.0).abs() < 1e-3);
        let n = r.eigenfunction.len();
        for i in 0..n {
            assert!((r.eigenfunction[i] - r.eigenfunction[n - 1 - i]).abs() < 1e-10);
        }
    }

    #[test]
    fn constant_drift_shifts_by_b_squared() {
        // u'' + 2b u' + lambda u = 0 on [-1, 1]: u = exp(-b x) w gives
        // lambda = b^2 + pi^2 / 4.
        let g = Grid::interval(-1.0, 1.0, 400).unwrap();
        let v = DriftField::from_fn(&g, 2.0, |_, _| [2.0, 0.0]).unwrap();
        let r = solve_drift_problem(&g, &v, AdvectionScheme::Hybrid).unwrap();
        let exact = 1.0 + PI * PI / 4.0;
        assert!((r.lambda / exact - 1.0).abs() < 1e-3, "{}", r.lambda);
    }

    #[test]
    fn inward_bang_bang_drift_hits_branch_point() {
        let g = Grid::interval(-1.0, 1.0, 400).unwrap();
        let v = DriftField::from_fn(&g, 2.0, |x, _| [-2.0 * x.signum(), 0.0]).unwrap();
        let r = solve_drift_problem(&g, &v, AdvectionScheme::Hybrid).unwrap();
        assert!((r.lambda - 1.0).abs() < 1e-2, "{}", r.lambda);
        assert!(r.eigenfunction.iter().all(|&u| u > 0.0));
    }

    #[test]
    fn cap_zero_matches_zero_drift_operator() {
        let g = Grid::interval(0.0, 1.0, 3).unwrap();
        let a = assemble_drift_operator(
            &g,
            &DriftField::zero(&g, 0.0).unwrap(),
            AdvectionScheme::Hybrid,
        )
        .unwrap();
        assert_eq!(a, laplacian_matrix(&g).scale(-1.0));
    }

    #[test]
    fn residual_examples() {
        let d = SparseOperator::from_triplets(2, &[(0, 0, 1.0), (1, 1, 3.0)]).unwrap();
        assert_eq!(residual(&d, 1.0, &[1.0, 0.0]), 0.0);
        let eps = 1e-3;
        assert!((residual(&d, 1.0 + eps, &[1.0, 0.0]) - eps).abs() < 1e-15);
    }

    #[test]
    fn converged_result_meets_its_tolerance() {
        let g = Grid::interval(0.0, 2.0, 60).unwrap();
        let v = DriftField::from_fn(&g, 3.0, |x, _| [3.0 * (4.0 * x).sin(), 0.0]).unwrap();
        let op = assemble_drift_operator(&g, &v, AdvectionScheme::Hybrid).unwrap();
        let r = principal_eigenpair(&op, 1e-10, 10_000).unwrap();
        assert!(r.residual < 1e-10);
        assert!(residual(&op, r.lambda, &r.eigenfunction) < 1e-9);
        assert_eq!(r.eigenfunction.iter().copied().fold(0.0, f64::max), 1.0);
    }

    #[test]
    fn closed_circle_has_zero_principal_eigenvalue() {
        let g = Grid::circle(4.0, 40).unwrap();
        let v = DriftField::from_fn(&g, 1.0, |x, _| [(x * 2.0).cos(), 0.0]).unwrap();
        let r = solve_drift_problem(&g, &v, AdvectionScheme::Hybrid).unwrap();
        assert_eq!(r.lambda, 0.0);
        assert!(r.eigenfunction.iter().all(|&u| u == 1.0));
    }

    #[test]
    fn iteration_budget_is_reported() {
        let g = Grid::interval(0.0, 1.0, 50).unwrap();
        let op = assemble_drift_operator(
            &g,
            &DriftField::zero(&g, 0.0).unwrap(),
            AdvectionScheme::Hybrid,
        )
        .unwrap();
        match principal_eigenpair(&op, 1e-14, 2) {
            Err(DriftError::NoConvergence {
                iterations,
                last_residual,
                ..
            }) => {
                assert_eq!(iterations, 2);
                assert!(last_residual > 1e-14);
            }
            other => panic!("expected no-convergence, got {other:?}"),
        }
        assert!(principal_eigenpair(&op, 0.0, 10).is_err());
    }

    #[test]
    fn non_m_matrix_is_flagged() {
        // inverse of [[1, 3], [0, 1]] maps ones to (-2, 1)
        let op =
            SparseOperator::from_triplets(2, &[(0, 0, 1.0), (0, 1, 3.0), (1, 1, 1.0)]).unwrap();
        assert!(matches!(
            principal_eigenpair(&op, 1e-10, 100),
            Err(DriftError::Internal(_))
        ));
    }
}
