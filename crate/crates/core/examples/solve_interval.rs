//! Principal eigenpair on [-1, 1] for a few prescribed drifts.

use driftlab::eigen::solve_drift_problem;
use driftlab::{AdvectionScheme, DriftField, Grid};

fn main() -> driftlab::Result<()> {
    let grid = Grid::interval(-1.0, 1.0, 399)?;
    type Profile = (&'static str, f64, fn(f64) -> f64);
    let profiles: [Profile; 3] = [
        ("zero", 0.0, |_| 0.0),
        ("constant 2", 2.0, |_| 2.0),
        ("inward 2", 2.0, |x| -2.0 * x.signum()),
    ];
    println!(
        "{:<12} {:>14} {:>10} {:>12}",
        "drift", "lambda", "iters", "residual"
    );
    for (name, cap, v) in profiles {
        let drift = DriftField::from_fn(&grid, cap, |x, _| [v(x), 0.0])?;
        let r = solve_drift_problem(&grid, &drift, AdvectionScheme::Hybrid)?;
        println!(
            "{name:<12} {:>14.10} {:>10} {:>12.3e}",
            r.lambda, r.iterations, r.residual
        );
    }
    println!(
        "pi^2/4 = {:.10}, 1 + pi^2/4 = {:.10}",
        std::f64::consts::PI.powi(2) / 4.0,
        1.0 + std::f64::consts::PI.powi(2) / 4.0
    );
    Ok(())
}
