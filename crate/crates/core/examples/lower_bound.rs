//! The explicit lower bound, its constants, and how fast it collapses.

use driftlab::{lower_bound_delta, quartic_root_bound, BoundInputs};

fn main() -> driftlab::Result<()> {
    let b = lower_bound_delta(&BoundInputs::new(2, 0.0, 0.0, 1.0, 0.25))?;
    println!(
        "{}",
        serde_json::to_string_pretty(&b).expect("serializable")
    );

    println!(
        "\n{:>4} {:>6} {:>16} {:>8}",
        "C", "d", "ln delta", "log form"
    );
    for (cap, d) in [
        (0.0, 0.5),
        (0.0, 1.0),
        (1.0, 1.0),
        (4.0, 1.0),
        (1.0, 2.0),
        (1.0, 4.0),
    ] {
        let b = lower_bound_delta(&BoundInputs::new(3, 0.5, cap, d, 1.0))?;
        println!("{cap:>4} {d:>6} {:>16.6e} {:>8}", b.log_delta, b.log_domain);
    }

    let (a1, a2, a3) = (2.0, 3.0, 5.0);
    println!(
        "\nroots of x^4 - {a1} x^3 - {a2} x^2 - {a3} are at most {:.6}",
        quartic_root_bound(a1, a2, a3)?
    );
    Ok(())
}
