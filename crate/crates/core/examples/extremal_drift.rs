//! The eigenvalue-minimizing drift on [-1, 1] for a range of caps.

use driftlab::{min_eigenvalue_circle, minimize_principal_eigenvalue, ExtremalOptions, Grid};

fn main() -> driftlab::Result<()> {
    let grid = Grid::interval(-1.0, 1.0, 400)?;
    let opts = ExtremalOptions::default();
    println!(
        "{:>6} {:>16} {:>16} {:>6} {:>12}",
        "C", "grid lambda_min", "closed form", "outer", "semilinear"
    );
    for cap in [0.0, 0.5, 1.0, 2.0, 4.0, 8.0] {
        let r = minimize_principal_eigenvalue(&grid, cap, &opts)?;
        let exact = min_eigenvalue_circle(cap / 2.0)?.lambda;
        println!(
            "{cap:>6} {:>16.10} {exact:>16.10} {:>6} {:>12.3e}",
            r.lambda_min, r.fixed_point_iterations, r.semilinear_residual
        );
    }

    let r = minimize_principal_eigenvalue(&grid, 2.0, &opts)?;
    let flip = r
        .drift
        .values()
        .windows(2)
        .position(|w| w[0] != w[1])
        .map(|i| i + 1);
    println!(
        "C = 2: drift is +C left of node {flip:?} and -C right of it (points toward the maximum)"
    );
    Ok(())
}
