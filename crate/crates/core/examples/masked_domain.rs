//! Extremal drift on an L-shaped masked domain, with the bound evaluated
//! from the computed eigenfunction's Lipschitz constant.

use driftlab::{
    gradient, lower_bound_delta, minimize_principal_eigenvalue, BoundInputs, CellMask,
    ExtremalOptions, Grid,
};

fn main() -> driftlab::Result<()> {
    let n = 16;
    let h = 1.0 / (n + 1) as f64;
    let mut text = format!("{n} {n} {h} {h}\n");
    for j in 0..n {
        let row: String = (0..n)
            .map(|i| if i < n / 2 || j < n / 2 { '#' } else { '.' })
            .collect();
        text.push_str(&row);
        text.push('\n');
    }
    let grid = Grid::masked_rectangle(CellMask::parse(&text)?)?;
    println!(
        "L-shape with {} interior nodes, diameter {:.4}",
        grid.interior_count(),
        grid.diameter()
    );

    for cap in [0.0, 1.0, 4.0] {
        let r = minimize_principal_eigenvalue(&grid, cap, &ExtremalOptions::default())?;
        let c4 = gradient(&grid, &r.u)
            .iter()
            .map(|g| g[0].hypot(g[1]))
            .fold(0.0, f64::max);
        let bound = lower_bound_delta(&BoundInputs::new(2, 0.0, cap, grid.diameter(), c4))?;
        println!(
            "C={cap:<3} lambda_min={:.8} outer={} C4={c4:.4} ln delta={:.4e}",
            r.lambda_min, r.fixed_point_iterations, bound.log_delta
        );
    }
    Ok(())
}
