//! Minimum-time exponents versus the fastest known protocols across the
//! power-law interaction range.
//!
//! Run: `cargo run --example bound_table`

use spinsqueeze::bounds::saturation_table;

fn main() -> spinsqueeze::Result<()> {
    let alphas: Vec<f64> = (0..=16).map(|i| i as f64 * 0.25).collect();
    for gamma in [1.0, 0.5] {
        println!("d = 1, gamma = {gamma}  (target F_Q ~ N^{})", 1.0 + gamma);
        println!(
            "{:>6} {:>12} {:>22} {:>12} {:>22} {:>10}",
            "alpha", "beta_bound", "bound regime", "beta_proto", "protocol regime", "saturated"
        );
        for row in saturation_table(1, gamma, &alphas)? {
            println!(
                "{:>6.2} {:>12.3} {:>22} {:>12.3} {:>22} {:>10}",
                row.alpha,
                row.beta_bound,
                row.bound_regime.label(),
                row.beta_protocol,
                row.protocol_regime.label(),
                row.saturated
            );
        }
        println!();
    }
    println!("negative exponents mean the minimum time shrinks with system size;");
    println!("logarithmic and stretch regimes compare as exponent zero.");
    Ok(())
}
