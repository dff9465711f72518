//! Principal eigenvalues of Laplacians with a bounded drift term.
//!
//! The operator `lap u + v . grad u` is discretized on intervals, circles and
//! masked rectangles ([`grid`]); its principal Dirichlet eigenpair is found by
//! inverse iteration ([`eigen`]); the drift of sup-norm at most `C` that
//! minimizes it is found by a fixed point on `v = C grad u / |grad u|`
//! ([`extremal`]). [`circle`] solves the 1D minimal-eigenvalue problem in
//! closed form and [`bound`] evaluates the explicit lower bound on the
//! eigenvalue in terms of dimension, curvature, drift and diameter.
//!
//! ```
//! use driftlab::{minimize_principal_eigenvalue, ExtremalOptions, Grid};
//!
//! let grid = Grid::interval(-1.0, 1.0, 200).unwrap();
//! let r = minimize_principal_eigenvalue(&grid, 2.0, &ExtremalOptions::default()).unwrap();
//! assert!((r.lambda_min - 1.0).abs() < 1e-2);
//! ```

// NaN-rejecting guards read as `!(x > 0.0)`.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bound;
pub mod circle;
pub mod cli;
pub mod eigen;
pub mod error;
pub mod extremal;
pub mod grid;
pub mod linsolve;
pub mod parallel;
pub mod sparse;

pub use bound::{lower_bound_delta, quartic_root_bound, BoundBreakdown, BoundInputs};
pub use circle::{
    asymptotic_lambda, large_b_lambda, min_eigenvalue_circle, small_b_lambda, sweep, Branch,
    SweepRow,
};
pub use eigen::{assemble_drift_operator, principal_eigenpair, residual, SpectralResult};
pub use error::{DriftError, Result};
pub use extremal::{
    best_response, brute_force_min_eigenvalue, extremal_drift, extremal_drift_from,
    minimize_principal_eigenvalue, semilinear_residual, BruteForceResult, ExtremalOptions,
    ExtremalResult,
};
pub use grid::{
    advection_matrix, gradient, laplacian_matrix, AdvectionScheme, CellMask, DriftField, Grid,
    GridKind, Neighbor,
};
pub use linsolve::solve_linear;
pub use sparse::SparseOperator;
