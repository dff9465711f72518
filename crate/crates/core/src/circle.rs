//! The minimal eigenvalue on the circle `R / 4Z` with `|f| <= 2b`.
//!
//! By symmetry this is the Dirichlet problem on `[-1, 1]` with the extremal
//! drift, i.e. `u'' - 2b u' + lambda u = 0` on `[0, 1]` with `u(0) = 1`,
//! `u'(0) = 0`, `u(1) = 0` (`u` decreases there, so `C |u'| = -2b u'`).
//! Solving the linear ODE gives two transcendental branches:
//!
//! * `b <= 1`: `s = b tan s` with `s = sqrt(lambda - b^2)` in `(0, pi/2)`;
//! * `b >= 1`: `s coth s = b` with `s = sqrt(b^2 - lambda)` in `(0, b]`,
//!   the same relation as `(1 + e^{-2s}) / (1 - e^{-2s}) * sqrt(1 - lambda/b^2) = 1`.
//!
//! Both degenerate to `lambda = 1` at `b = 1`; for large `b`,
//! `lambda ~ 4 b^2 e^{-2b}`.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::extremal::{minimize_principal_eigenvalue, ExtremalOptions};
use crate::grid::Grid;
use crate::parallel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    SmallB,
    LargeB,
    BranchPoint,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::SmallB => "small_b",
            Branch::LargeB => "large_b",
            Branch::BranchPoint => "branch_point",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub b: f64,
    pub lambda: f64,
    pub branch: Branch,
    pub asymptote: f64,
    /// Minimal eigenvalue from the grid solver on `[-1, 1]` with `C = 2b`.
    pub grid_lambda: Option<f64>,
}

/// Bisection on a bracket with `f(lo) > 0 > f(hi)` (or the reverse), run
/// until the midpoint no longer moves.
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let lo_positive = f(lo) > 0.0;
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return mid;
        }
        if (f(mid) > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

fn sinc(s: f64) -> f64 {
    if s == 0.0 {
        1.0
    } else {
        s.sin() / s
    }
}

/// `s coth s`, continuous at 0.
fn s_coth_s(s: f64) -> f64 {
    if s == 0.0 {
        1.0
    } else {
        s / s.tanh()
    }
}

/// Small-drift branch: solve `s = b tan s` on `(0, pi/2)`, return `s^2 + b^2`.
pub fn small_b_lambda(b: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&b) {
        return invalid(format!("small-b branch needs 0 <= b <= 1, got {b}"));
    }
    if b == 0.0 {
        return Ok(FRAC_PI_2 * FRAC_PI_2);
    }
    if b == 1.0 {
        return Ok(1.0);
    }
    // cos s - b sin(s)/s: equals 1 - b > 0 at 0 and -2b/pi < 0 at pi/2
    let s = bisect(|s| s.cos() - b * sinc(s), 0.0, FRAC_PI_2);
    Ok(s * s + b * b)
}

/// Large-drift branch: solve `s coth s = b` on `(0, b]`, return `b^2 - s^2`.
///
/// The difference is evaluated as `(b + s) (b - s)` with
/// `b - s = s (coth s - 1) = 2 s / (e^{2s} - 1)`, which keeps full relative
/// precision when `lambda` is exponentially small.
pub fn large_b_lambda(b: f64) -> Result<f64> {
    if !(b >= 1.0 && b.is_finite()) {
        return invalid(format!("large-b branch needs b >= 1, got {b}"));
    }
    if b == 1.0 {
        return Ok(1.0);
    }
    let s = bisect(|s| s_coth_s(s) - b, 0.0, b);
    if s == 0.0 {
        return Ok(1.0);
    }
    let gap = 2.0 * s / (2.0 * s).exp_m1();
    Ok((b + s) * gap)
}

/// `4 b^2 e^{-2b}`, i.e. `C^2 e^{-C}` with `C = 2b`.
pub fn asymptotic_lambda(b: f64) -> f64 {
    4.0 * b * b * (-2.0 * b).exp()
}

/// Minimal eigenvalue for drift bound `2b`, dispatched to the right branch.
pub fn min_eigenvalue_circle(b: f64) -> Result<SweepRow> {
    if !(b >= 0.0 && b.is_finite()) {
        return invalid(format!("b must be finite and nonnegative, got {b}"));
    }
    let (lambda, branch) = if b < 1.0 {
        (small_b_lambda(b)?, Branch::SmallB)
    } else if b > 1.0 {
        (large_b_lambda(b)?, Branch::LargeB)
    } else {
        (1.0, Branch::BranchPoint)
    };
    Ok(SweepRow {
        b,
        lambda,
        branch,
        asymptote: asymptotic_lambda(b),
        grid_lambda: None,
    })
}

/// Grid minimal eigenvalue on `[-1, 1]` with `m` interior nodes and `C = 2b`.
pub fn grid_min_eigenvalue(b: f64, m: usize) -> Result<f64> {
    let grid = Grid::interval(-1.0, 1.0, m)?;
    let r = minimize_principal_eigenvalue(&grid, 2.0 * b, &ExtremalOptions::default())?;
    Ok(r.lambda_min)
}

/// Evaluate [`min_eigenvalue_circle`] at the given `b` values (and optionally
/// cross-check each against the grid solver). Rows keep the input order.
pub fn evaluate_rows(bs: &[f64], cross_check_m: Option<usize>) -> Result<Vec<SweepRow>> {
    parallel::install(|| {
        bs.par_iter()
            .map(|&b| {
                let mut row = min_eigenvalue_circle(b)?;
                if let Some(m) = cross_check_m {
                    row.grid_lambda = Some(grid_min_eigenvalue(b, m)?);
                }
                Ok(row)
            })
            .collect()
    })
}

/// `steps` uniformly spaced samples of `b` on `[b_min, b_max]`.
pub fn sweep(
    b_min: f64,
    b_max: f64,
    steps: usize,
    cross_check_m: Option<usize>,
) -> Result<Vec<SweepRow>> {
    if !(b_min >= 0.0 && b_max.is_finite()) || b_max <= b_min {
        return invalid(format!(
            "sweep range [{b_min}, {b_max}] is empty or negative"
        ));
    }
    if steps < 2 {
        return invalid(format!("sweep needs at least 2 steps, got {steps}"));
    }
    let last = (steps - 1) as f64;
    let bs: Vec<f64> = (0..steps)
        .map(|i| {
            if i + 1 == steps {
                b_max
            } else {
                b_min + (b_max - b_min) * i as f64 / last
            }
        })
        .collect();
    evaluate_rows(&bs, cross_check_m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn zero_drift_limit() {
        assert_eq!(small_b_lambda(0.0).unwrap(), PI * PI / 4.0);
        let row = min_eigenvalue_circle(0.0).unwrap();
        assert_eq!(row.branch, Branch::SmallB);
        assert!((row.lambda - 2.467401).abs() < 1e-6);
    }

    #[test]
    fn half_b_root() {
        let lambda = small_b_lambda(0.5).unwrap();
        let s = (lambda - 0.25).sqrt();
        assert!((s - 0.5 * s.tan()).abs() < 1e-12);
        assert!((s - 1.1656).abs() < 1e-4, "{s}");
        assert!((lambda - 1.6087).abs() < 1e-3, "{lambda}");
    }

    #[test]
    fn branch_point() {
        assert_eq!(small_b_lambda(1.0).unwrap(), 1.0);
        assert_eq!(large_b_lambda(1.0).unwrap(), 1.0);
        let row = min_eigenvalue_circle(1.0).unwrap();
        assert_eq!((row.lambda, row.branch), (1.0, Branch::BranchPoint));
        assert!((small_b_lambda(1.0 - 1e-9).unwrap() - 1.0).abs() < 1e-6);
        assert!((large_b_lambda(1.0 + 1e-9).unwrap() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn unit_s_on_large_branch() {
        let b = 1.0 / 1.0f64.tanh();
        let lambda = large_b_lambda(b).unwrap();
        assert!((lambda - (b * b - 1.0)).abs() < 1e-12);
        assert!((lambda - 0.72407).abs() < 1e-5);
    }

    #[test]
    fn large_b_near_asymptote() {
        let lambda = large_b_lambda(5.0).unwrap();
        assert!((lambda - 0.004546).abs() < 5e-6, "{lambda}");
        let ratio = lambda / asymptotic_lambda(5.0);
        assert!((0.99..=1.01).contains(&ratio));
        let row = min_eigenvalue_circle(5.0).unwrap();
        assert_eq!(row.branch, Branch::LargeB);
    }

    #[test]
    fn large_b_relation_holds() {
        for b in [1.2, 2.0, 3.5, 7.0] {
            let lambda = large_b_lambda(b).unwrap();
            let r = (b * b - lambda).sqrt();
            let e = (-2.0 * r).exp();
            let lhs = (1.0 + e) / (1.0 - e) * (1.0 - lambda / (b * b)).sqrt();
            assert!((lhs - 1.0).abs() < 1e-9, "b = {b}: {lhs}");
        }
    }

    #[test]
    fn asymptote_values() {
        assert_eq!(asymptotic_lambda(0.0), 0.0);
        assert!((asymptotic_lambda(5.0) - 0.00454000).abs() < 1e-8);
        assert!((asymptotic_lambda(1.0) - 0.54134).abs() < 1e-5);
    }

    #[test]
    fn wrong_branch_rejected() {
        assert!(small_b_lambda(1.5).is_err());
        assert!(small_b_lambda(-0.1).is_err());
        assert!(large_b_lambda(0.5).is_err());
        assert!(min_eigenvalue_circle(-1.0).is_err());
    }

    #[test]
    fn sweep_shape_and_monotonicity() {
        let rows = sweep(0.0, 6.0, 61, None).unwrap();
        assert_eq!(rows.len(), 61);
        assert!(rows.windows(2).all(|w| w[1].lambda < w[0].lambda));
        assert!(rows.iter().all(|r| r.lambda > 0.0));
        assert!(rows
            .iter()
            .all(|r| (r.branch == Branch::LargeB) == (r.b > 1.0)));
        assert_eq!(rows[10].branch, Branch::BranchPoint);
        assert!(sweep(0.0, 0.0, 10, None).is_err());
        assert!(sweep(0.0, 1.0, 1, None).is_err());
    }
}
