//! Minimal eigenvalue lambda(b) on the circle with |drift| <= 2b, against
//! the large-b asymptote and the grid solver.

use driftlab::circle::evaluate_rows;

fn main() -> driftlab::Result<()> {
    let bs: Vec<f64> = (0..=12).map(|i| 0.5 * i as f64).collect();
    let rows = evaluate_rows(&bs, Some(800))?;
    println!(
        "{:>5} {:>14} {:>13} {:>14} {:>14}",
        "b", "lambda", "branch", "4b^2 e^-2b", "grid (m=800)"
    );
    for r in rows {
        println!(
            "{:>5} {:>14.8e} {:>13} {:>14.8e} {:>14.8e}",
            r.b,
            r.lambda,
            r.branch.to_string(),
            r.asymptote,
            r.grid_lambda.unwrap()
        );
    }
    Ok(())
}
