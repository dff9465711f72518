//! The eigenvalue-minimizing drift of bounded sup-norm.
//!
//! The minimizer aligns with the gradient of its own eigenfunction,
//! `v = C grad u / |grad u|`, so the eigenpair solves the semilinear problem
//! `lap u + C |grad u| + lambda u = 0`. We find it by alternating an
//! eigensolve with that drift update, starting from zero drift.
//!
//! The update is the per-node minimizer of `(A(v) u)_i` over the cap ball
//! ([`best_response`]), so the loop is a policy iteration for the discrete
//! problem and the eigenvalue never increases from one step to the next.
//! While `C h <= 1` the hybrid stencil is centered everywhere and the
//! minimizer is exactly the ansatz; in 1D it is then bang-bang and can be
//! checked by enumerating `{-C, +C}^m` ([`brute_force_min_eigenvalue`]).
//!
//! Past that the stencil goes upwind and the per-node minimizer is searched
//! over the kinks of the piecewise-linear row value. It may sit strictly
//! inside the ball (e.g. `v = 0` at a peak), so the enumeration is then only
//! an upper bound.

use rayon::prelude::*;

use crate::eigen::{assemble_drift_operator, principal_eigenpair, SpectralResult};
use crate::error::{invalid, DriftError, Result};
use crate::grid::{
    advection_at, difference_quotients, stencil_gradient, AdvectionScheme, DriftField, Grid,
    GridKind,
};
use crate::parallel;

/// Relative gradient floor: below `GRADIENT_FLOOR * max |grad u|` the drift
/// is set to zero.
pub const GRADIENT_FLOOR: f64 = 1e-8;

/// Eigen residual used for every enumerated candidate.
pub const BRUTE_FORCE_EIGEN_TOL: f64 = 1e-13;

/// Largest grid the enumeration oracle accepts.
pub const BRUTE_FORCE_MAX_NODES: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtremalOptions {
    /// Outer tolerance on eigenvalue change; the drift change must be below
    /// `tol * C`.
    pub tol: f64,
    pub max_outer: usize,
    /// Relaxation weight of the proposed drift, in (0, 1].
    pub damping: f64,
    pub eigen_tol: f64,
    pub eigen_max_iter: usize,
    pub scheme: AdvectionScheme,
}

impl Default for ExtremalOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_outer: 500,
            damping: 1.0,
            eigen_tol: 1e-10,
            eigen_max_iter: 10_000,
            scheme: AdvectionScheme::Hybrid,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExtremalResult {
    pub lambda_min: f64,
    /// The drift the returned eigenpair was computed with.
    pub drift: DriftField,
    pub u: Vec<f64>,
    pub fixed_point_iterations: usize,
    pub semilinear_residual: f64,
    /// Sup-norm of the last drift update.
    pub drift_change_last: f64,
    /// Eigenvalue after each outer iteration.
    pub history: Vec<f64>,
}

/// The extremal drift `C grad u / |grad u|` built from `u`, zero where
/// `|grad u| < eps`.
///
/// The gradient is the centered quotient with Dirichlet zeros filled in,
/// i.e. exactly what the centered advection stencil applies to `u`, which
/// gives `v . grad u = C |grad u|` with the drift pointing uphill.
pub fn extremal_drift_from(u: &[f64], grid: &Grid, cap: f64, eps: f64) -> Result<DriftField> {
    if !(cap >= 0.0) {
        return invalid(format!("drift cap {cap} must be nonnegative"));
    }
    if !(eps > 0.0) {
        return invalid(format!("gradient floor {eps} must be positive"));
    }
    if u.len() != grid.interior_count() {
        return invalid(format!(
            "u has {} values, grid has {} interior nodes",
            u.len(),
            grid.interior_count()
        ));
    }
    let dim = grid.dim();
    let mut values = Vec::with_capacity(u.len() * dim);
    for g in stencil_gradient(grid, u) {
        let norm = g[..dim].iter().map(|c| c * c).sum::<f64>().sqrt();
        for &c in &g[..dim] {
            values.push(if norm < eps {
                0.0
            } else if dim == 1 {
                // exact +-cap keeps the stencil choice free of roundoff
                cap.copysign(c)
            } else {
                cap * c / norm
            });
        }
    }
    DriftField::new(dim, cap, values)
}

fn gradient_floor(grid: &Grid, u: &[f64]) -> f64 {
    let scale = stencil_gradient(grid, u)
        .iter()
        .map(|g| g[..grid.dim()].iter().map(|c| c * c).sum::<f64>().sqrt())
        .fold(0.0, f64::max);
    (GRADIENT_FLOOR * scale).max(f64::MIN_POSITIVE)
}

/// The extremal drift for `u` with the default relative gradient floor.
pub fn extremal_drift(u: &[f64], grid: &Grid, cap: f64) -> Result<DriftField> {
    extremal_drift_from(u, grid, cap, gradient_floor(grid, u))
}

/// Drift vectors that contain a maximizer of the row value
/// `v -> (V(v) u)_i` over `|v| <= cap`. The row value is linear on each box
/// cut out by the stencil switches `v_a in {0, +-1/h_a}`, so its maximum is
/// at a box corner inside the ball, where a switch line meets the circle,
/// or at `cap * w / |w|` for one of the box slopes `w`.
fn row_candidates(grid: &Grid, u: &[f64], node: usize, cap: f64) -> Vec<[f64; 2]> {
    let dim = grid.dim();
    let mut breaks: Vec<Vec<f64>> = Vec::with_capacity(dim);
    let mut slopes: Vec<[f64; 3]> = Vec::with_capacity(dim);
    for axis in 0..dim {
        let s = 1.0 / grid.spacing(axis);
        let mut b = vec![0.0];
        if s <= cap {
            b.extend([s, -s]);
        }
        breaks.push(b);
        slopes.push(difference_quotients(grid, u, node, axis));
    }
    let mut out = Vec::new();
    if dim == 1 {
        out.extend([[cap, 0.0], [-cap, 0.0]]);
        out.extend(breaks[0].iter().map(|&b| [b, 0.0]));
        return out;
    }
    for &bx in &breaks[0] {
        let rest = (cap * cap - bx * bx).max(0.0).sqrt();
        out.extend([[bx, rest], [bx, -rest]]);
        for &by in &breaks[1] {
            if bx * bx + by * by <= cap * cap {
                out.push([bx, by]);
            }
        }
    }
    for &by in &breaks[1] {
        let rest = (cap * cap - by * by).max(0.0).sqrt();
        out.extend([[rest, by], [-rest, by]]);
    }
    for &wx in &slopes[0] {
        for &wy in &slopes[1] {
            let norm = wx.hypot(wy);
            if norm > 0.0 {
                out.push([cap * wx / norm, cap * wy / norm]);
            }
        }
    }
    out
}

/// Per-node minimizer of `(A(v) u)_i` over `|v| <= cap`, the best of
/// [`row_candidates`]. Where the stencil is centered this is the ansatz
/// `cap grad u / |grad u|` without the gradient floor. A node keeps
/// `incumbent` (or else the ansatz) unless a candidate is strictly better.
pub fn best_response(
    u: &[f64],
    grid: &Grid,
    cap: f64,
    scheme: AdvectionScheme,
    incumbent: Option<&DriftField>,
) -> Result<DriftField> {
    let ansatz = extremal_drift(u, grid, cap)?;
    let dim = grid.dim();
    let umax = u.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let hmin = (0..dim)
        .map(|a| grid.spacing(a))
        .fold(f64::INFINITY, f64::min);
    // roundoff level of a row value; smaller gains are ties
    let margin = 16.0 * f64::EPSILON * cap * umax / hmin;
    let mut values = Vec::with_capacity(u.len() * dim);
    for i in 0..u.len() {
        let mut best =
            incumbent.map_or_else(|| ansatz.vector(i).to_vec(), |d| d.vector(i).to_vec());
        let mut best_value = advection_at(grid, u, i, &best, scheme);
        for cand in row_candidates(grid, u, i, cap) {
            let value = advection_at(grid, u, i, &cand[..dim], scheme);
            if value > best_value + margin {
                best = cand[..dim].to_vec();
                best_value = value;
            }
        }
        values.extend(best);
    }
    DriftField::new(dim, cap, values)
}

/// `||lap u + C |grad u| + lambda u||_inf`, where `C |grad u|` is realised
/// as `V(v) u` for the per-node best response `v` to `u` under the same
/// stencil the operator uses. At a converged fixed point this is the eigen
/// residual.
pub fn semilinear_residual(
    grid: &Grid,
    u: &[f64],
    lambda: f64,
    cap: f64,
    scheme: AdvectionScheme,
) -> Result<f64> {
    let drift = best_response(u, grid, cap, scheme, None)?;
    let op = assemble_drift_operator(grid, &drift, scheme)?;
    // A u = -(lap u + V u), so the residual is |A u - lambda u|.
    let au = op.matvec_differenced(u);
    Ok(au
        .iter()
        .zip(u)
        .fold(0.0f64, |m, (a, x)| m.max((a - lambda * x).abs())))
}

fn relax(proposed: &DriftField, old: &DriftField, theta: f64) -> Result<DriftField> {
    if theta >= 1.0 {
        return Ok(proposed.clone());
    }
    let dim = proposed.dim();
    let cap = proposed.cap();
    let mut values = Vec::with_capacity(proposed.values().len());
    for i in 0..proposed.node_count() {
        let p = proposed.vector(i);
        let o = old.vector(i);
        let mixed: Vec<f64> = p
            .iter()
            .zip(o)
            .map(|(a, b)| theta * a + (1.0 - theta) * b)
            .collect();
        let norm = mixed.iter().map(|c| c * c).sum::<f64>().sqrt();
        let target = proposed.norm_at(i);
        for c in mixed {
            values.push(if norm > 0.0 { c * target / norm } else { 0.0 });
        }
    }
    DriftField::new(dim, cap, values)
}

/// One outer step: eigensolve with `drift`, then propose the next drift.
pub fn outer_step(
    grid: &Grid,
    drift: &DriftField,
    options: &ExtremalOptions,
) -> Result<(SpectralResult, DriftField)> {
    let op = assemble_drift_operator(grid, drift, options.scheme)?;
    let spectral = principal_eigenpair(&op, options.eigen_tol, options.eigen_max_iter)?;
    let proposed = best_response(
        &spectral.eigenfunction,
        grid,
        drift.cap(),
        options.scheme,
        Some(drift),
    )?;
    let next = relax(&proposed, drift, options.damping)?;
    Ok((spectral, next))
}

/// Minimize the principal eigenvalue over drifts with `|v| <= cap`.
pub fn minimize_principal_eigenvalue(
    grid: &Grid,
    cap: f64,
    options: &ExtremalOptions,
) -> Result<ExtremalResult> {
    if !(cap >= 0.0 && cap.is_finite()) {
        return invalid(format!("drift cap {cap} must be finite and nonnegative"));
    }
    if !(options.tol > 0.0) {
        return invalid(format!("tolerance {} must be positive", options.tol));
    }
    if !(options.damping > 0.0 && options.damping <= 1.0) {
        return invalid(format!("damping {} must lie in (0, 1]", options.damping));
    }
    if options.max_outer == 0 {
        return invalid("max_outer must be at least 1");
    }

    let mut drift = DriftField::zero(grid, cap)?;
    let mut history = Vec::new();
    let mut change = f64::INFINITY;
    for iteration in 1..=options.max_outer {
        let (spectral, next) = outer_step(grid, &drift, options)?;
        change = next.max_distance(&drift);
        let lambda_change = history
            .last()
            .map_or(f64::INFINITY, |&prev: &f64| (spectral.lambda - prev).abs());
        history.push(spectral.lambda);
        if lambda_change < options.tol && change <= options.tol * cap {
            let semilinear = semilinear_residual(
                grid,
                &spectral.eigenfunction,
                spectral.lambda,
                cap,
                options.scheme,
            )?;
            return Ok(ExtremalResult {
                lambda_min: spectral.lambda,
                drift,
                u: spectral.eigenfunction,
                fixed_point_iterations: iteration,
                semilinear_residual: semilinear,
                drift_change_last: change,
                history,
            });
        }
        drift = next;
    }
    Err(DriftError::NoConvergence {
        iterations: options.max_outer,
        last_residual: change,
        history,
    })
}

/// Result of exhaustive enumeration over bang-bang drifts.
#[derive(Debug, Clone)]
pub struct BruteForceResult {
    pub lambda: f64,
    pub drift: DriftField,
    /// `+1` / `-1` per node.
    pub signs: Vec<i8>,
    pub candidates: usize,
}

fn pattern_signs(pattern: u32, m: usize) -> Vec<i8> {
    // node 0 is the most significant bit, so integer order is
    // lexicographic order with '-' < '+'
    (0..m)
        .map(|i| {
            if pattern >> (m - 1 - i) & 1 == 1 {
                1
            } else {
                -1
            }
        })
        .collect()
}

/// Minimum principal eigenvalue over all drifts with values in `{-C, +C}`
/// per node, on a 1D grid with at most [`BRUTE_FORCE_MAX_NODES`] nodes.
///
/// Ties go to the lexicographically smallest sign pattern (`-` before `+`).
pub fn brute_force_min_eigenvalue(
    grid: &Grid,
    cap: f64,
    scheme: AdvectionScheme,
) -> Result<BruteForceResult> {
    if grid.dim() != 1 || grid.kind() == GridKind::MaskedRectangle {
        return invalid("brute-force enumeration is limited to 1D grids");
    }
    let m = grid.interior_count();
    if m > BRUTE_FORCE_MAX_NODES {
        return invalid(format!(
            "brute-force enumeration needs at most {BRUTE_FORCE_MAX_NODES} nodes, got {m}"
        ));
    }
    if !(cap >= 0.0 && cap.is_finite()) {
        return invalid(format!("drift cap {cap} must be finite and nonnegative"));
    }
    let evaluate = |pattern: u32| -> Result<(f64, u32)> {
        let values = pattern_signs(pattern, m)
            .into_iter()
            .map(|s| f64::from(s) * cap)
            .collect();
        let drift = DriftField::new(1, cap, values)?;
        let op = assemble_drift_operator(grid, &drift, scheme)?;
        let r = principal_eigenpair(&op, BRUTE_FORCE_EIGEN_TOL, 100_000)?;
        Ok((r.lambda, pattern))
    };
    let count = 1u32 << m;
    let scored: Vec<(f64, u32)> = parallel::install(|| {
        (0..count)
            .into_par_iter()
            .map(evaluate)
            .collect::<Result<Vec<_>>>()
    })?;
    let (lambda, pattern) = scored
        .into_iter()
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
        .expect("at least one candidate");
    let signs = pattern_signs(pattern, m);
    let drift = DriftField::new(1, cap, signs.iter().map(|&s| f64::from(s) * cap).collect())?;
    Ok(BruteForceResult {
        lambda,
        drift,
        signs,
        candidates: count as usize,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn sine_gives_bang_bang_drift() {
        let g = Grid::interval(0.0, 1.0, 21).unwrap();
        let u = g.sample(|x, _| (PI * x).sin());
        let v = extremal_drift(&u, &g, 1.0).unwrap();
        for (i, x) in g.coords().iter().enumerate() {
            let expected = if (x[0] - 0.5).abs() < 1e-12 {
                0.0
            } else if x[0] < 0.5 {
                1.0
            } else {
                -1.0
            };
            assert_eq!(v.component(i, 0), expected, "node {i}");
        }
    }

    #[test]
    fn flat_function_gives_zero_drift() {
        let g = Grid::circle(4.0, 16).unwrap();
        let v = extremal_drift_from(&[1.0; 16], &g, 2.0, 1e-8).unwrap();
        assert!(v.values().iter().all(|&c| c == 0.0));
    }

    #[test]
    fn zero_cap_reproduces_dirichlet_eigenvalue() {
        let g = Grid::interval(-1.0, 1.0, 399).unwrap();
        let r = minimize_principal_eigenvalue(&g, 0.0, &ExtremalOptions::default()).unwrap();
        assert!((r.lambda_min / (PI * PI / 4.0) - 1.0).abs() < 1e-3);
        assert!(r.drift.values().iter().all(|&c| c == 0.0));
    }

    #[test]
    fn semilinear_residual_of_continuum_sine() {
        let g = Grid::interval(0.0, 1.0, 99).unwrap();
        let u = g.sample(|x, _| (PI * x).sin());
        let r = semilinear_residual(&g, &u, PI * PI, 0.0, AdvectionScheme::Hybrid).unwrap();
        let h = g.spacing(0);
        assert!(r < PI.powi(4) * h * h / 12.0 * 1.01, "{r}");
    }

    #[test]
    fn semilinear_residual_grows_linearly_in_lambda() {
        let g = Grid::interval(-1.0, 1.0, 40).unwrap();
        let r = minimize_principal_eigenvalue(&g, 1.0, &ExtremalOptions::default()).unwrap();
        let bumped =
            semilinear_residual(&g, &r.u, r.lambda_min + 1e-3, 1.0, AdvectionScheme::Hybrid)
                .unwrap();
        assert!((bumped - 1e-3).abs() < 1e-8, "{bumped}");
    }

    #[test]
    fn forced_non_convergence() {
        let g = Grid::interval(-1.0, 1.0, 20).unwrap();
        let options = ExtremalOptions {
            max_outer: 1,
            ..Default::default()
        };
        match minimize_principal_eigenvalue(&g, 2.0, &options) {
            Err(DriftError::NoConvergence { history, .. }) => assert_eq!(history.len(), 1),
            other => panic!("expected no-convergence, got {other:?}"),
        }
    }

    #[test]
    fn damped_iteration_reaches_same_minimum() {
        let g = Grid::interval(-1.0, 1.0, 30).unwrap();
        let plain = minimize_principal_eigenvalue(&g, 2.0, &ExtremalOptions::default()).unwrap();
        let damped = minimize_principal_eigenvalue(
            &g,
            2.0,
            &ExtremalOptions {
                damping: 0.5,
                ..Default::default()
            },
        )
        .unwrap();
        assert!((plain.lambda_min - damped.lambda_min).abs() < 1e-9);
    }

    #[test]
    fn brute_force_guards() {
        let g = Grid::interval(0.0, 1.0, 13).unwrap();
        assert!(brute_force_min_eigenvalue(&g, 1.0, AdvectionScheme::Hybrid).is_err());
        let sq = Grid::masked_rectangle(crate::grid::CellMask {
            nx: 2,
            ny: 2,
            hx: 1.0,
            hy: 1.0,
            cells: vec![true; 4],
        })
        .unwrap();
        assert!(brute_force_min_eigenvalue(&sq, 1.0, AdvectionScheme::Hybrid).is_err());
    }

    #[test]
    fn brute_force_zero_cap_is_the_laplacian() {
        let g = Grid::interval(-1.0, 1.0, 4).unwrap();
        let bf = brute_force_min_eigenvalue(&g, 0.0, AdvectionScheme::Hybrid).unwrap();
        let opts = ExtremalOptions {
            eigen_tol: BRUTE_FORCE_EIGEN_TOL,
            ..ExtremalOptions::default()
        };
        let fp = minimize_principal_eigenvalue(&g, 0.0, &opts).unwrap();
        assert_eq!(bf.candidates, 16);
        assert!((bf.lambda - fp.lambda_min).abs() < 1e-12);
        // every pattern ties; the smallest one wins
        assert_eq!(bf.signs, vec![-1; 4]);
    }

    #[test]
    fn brute_force_minimizer_points_uphill() {
        let g = Grid::interval(0.0, 1.0, 4).unwrap();
        let bf = brute_force_min_eigenvalue(&g, 1.0, AdvectionScheme::Hybrid).unwrap();
        assert_eq!(bf.signs, vec![1, 1, -1, -1]);
    }

    #[test]
    fn outer_iterations_never_raise_the_eigenvalue() {
        for (m, cap) in [(7, 6.0), (12, 6.5), (21, 11.0), (36, 17.75), (9, 40.0)] {
            let g = Grid::interval(-1.0, 1.0, m).unwrap();
            let r = minimize_principal_eigenvalue(&g, cap, &ExtremalOptions::default()).unwrap();
            assert!(
                r.history.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12)),
                "m={m} C={cap}: {:?}",
                r.history
            );
            assert!(r.semilinear_residual <= 1e-8);
        }
    }

    #[test]
    fn upwind_regime_fixed_point_bounds_the_enumeration() {
        // C h = 1.5: the minimizer keeps v = 0 at the middle node
        let g = Grid::interval(-1.0, 1.0, 7).unwrap();
        let opts = ExtremalOptions {
            eigen_tol: BRUTE_FORCE_EIGEN_TOL,
            ..ExtremalOptions::default()
        };
        let fp = minimize_principal_eigenvalue(&g, 6.0, &opts).unwrap();
        let bf = brute_force_min_eigenvalue(&g, 6.0, AdvectionScheme::Hybrid).unwrap();
        assert!(fp.lambda_min < bf.lambda - 1e-3);
        assert_eq!(fp.drift.component(3, 0), 0.0);
    }

    #[test]
    fn best_response_keeps_the_incumbent_on_ties() {
        let g = Grid::interval(-1.0, 1.0, 5).unwrap();
        let u = vec![0.5, 0.9, 1.0, 0.9, 0.5];
        let incumbent = DriftField::new(1, 1.0, vec![1.0, 1.0, -1.0, -1.0, -1.0]).unwrap();
        let v = best_response(&u, &g, 1.0, AdvectionScheme::Hybrid, Some(&incumbent)).unwrap();
        assert_eq!(v.values(), &[1.0, 1.0, -1.0, -1.0, -1.0]);
        let fresh = best_response(&u, &g, 1.0, AdvectionScheme::Hybrid, None).unwrap();
        assert_eq!(fresh.values(), &[1.0, 1.0, 0.0, -1.0, -1.0]);
    }
}
