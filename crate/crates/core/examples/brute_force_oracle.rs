//! Fixed point against exhaustive enumeration of bang-bang drifts.
//!
//! Equality holds while `C h <= 1`, where the hybrid stencil is centered.

use driftlab::extremal::BRUTE_FORCE_EIGEN_TOL;
use driftlab::{
    brute_force_min_eigenvalue, minimize_principal_eigenvalue, AdvectionScheme, ExtremalOptions,
    Grid,
};

fn main() -> driftlab::Result<()> {
    let opts = ExtremalOptions {
        eigen_tol: BRUTE_FORCE_EIGEN_TOL,
        ..ExtremalOptions::default()
    };
    for m in [4, 7, 10, 12] {
        for cap in [0.5, 1.0, 2.0] {
            let grid = Grid::interval(-1.0, 1.0, m)?;
            let bf = brute_force_min_eigenvalue(&grid, cap, AdvectionScheme::Hybrid)?;
            let fp = minimize_principal_eigenvalue(&grid, cap, &opts)?;
            let signs: String = bf
                .signs
                .iter()
                .map(|&s| if s > 0 { '+' } else { '-' })
                .collect();
            println!(
                "m={m:>2} C={cap:<3} candidates={:>5} brute={:.12} fixed={:.12} gap={:.1e} argmin={signs}",
                bf.candidates,
                bf.lambda,
                fp.lambda_min,
                (bf.lambda - fp.lambda_min).abs()
            );
        }
    }
    Ok(())
}
