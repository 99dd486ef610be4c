//! Record a two-axis-twisting QFI trajectory and locate its optimum.
//!
//! Run: `cargo run --release --example trajectory`

use spinsqueeze::protocols::{find_optimal, qfi_trajectory, ProtocolKind, ProtocolSpec};

fn main() -> spinsqueeze::Result<()> {
    let n = 400;
    let spec = ProtocolSpec::new(ProtocolKind::Tat, n)?;

    let t_max = 2.0 * spec.time_scale_guess();
    let grid: Vec<f64> = (0..80).map(|i| t_max * i as f64 / 79.0).collect();
    println!("# two-axis twisting, N = {n}, chi = 1");
    println!("{:>12} {:>14} {:>14} {:>10}", "t", "F_Q", "F_Q/N^2", "theta*");
    for record in qfi_trajectory(&spec, &grid)?.iter().step_by(8) {
        println!(
            "{:>12.6} {:>14.4} {:>14.6} {:>10.4}",
            record.t,
            record.f_q,
            record.f_q / (n * n) as f64,
            record.theta_opt
        );
    }

    let best = find_optimal(&spec)?;
    println!("\noptimal squeezing point:");
    println!("  t_opt  = {:.6}  (~ {:.4} ln(N)/N)", best.t_opt, best.t_opt * n as f64 / (n as f64).ln());
    println!("  F_Q    = {:.2}  (~ {:.4} N^2)", best.f_q_opt, best.f_q_opt / (n * n) as f64);
    println!("  theta* = {:.4} rad", best.theta_opt);
    println!("  search evaluations: {}", best.evaluations);
    Ok(())
}
