//! Exact two-axis-twisting QFI against the analytic early-time formula
//! `F_Q(t) = N exp(2Nt - sinh(2Nt)/N + t/sqrt(N))`.
//!
//! Run: `cargo run --release --example early_time_model`

use spinsqueeze::dynamics::{diagonalize, evolve_series};
use spinsqueeze::protocols::{
    build_protocol_hamiltonian, tat_early_time_model, tat_model_time, ProtocolKind, ProtocolSpec,
};
use spinsqueeze::qfi::{optimal_qfi, transverse_covariance};

fn main() -> spinsqueeze::Result<()> {
    let n = 150;
    let spec = ProtocolSpec::new(ProtocolKind::Tat, n)?;
    let spectral = diagonalize(&build_protocol_hamiltonian(&spec)?)?;
    let grid: Vec<f64> = (1..=14).map(|k| k as f64 * 1.0e-3).collect();
    let states = evolve_series(&spectral, &spec.initial_state()?, &grid)?;

    println!("N = {n}; the formula is a linearized approximation, good while");
    println!("F_Q/N stays modest and t << 1/sqrt(N) = {:.3}\n", 1.0 / (n as f64).sqrt());
    println!("{:>10} {:>12} {:>12} {:>10}", "t", "F_sim/N", "F_model/N", "dev %");
    for (&t, state) in grid.iter().zip(&states) {
        let f_sim = optimal_qfi(&transverse_covariance(state)?).f_q;
        let f_model = tat_early_time_model(n, tat_model_time(spec.chi(), t))?;
        println!(
            "{t:>10.4} {:>12.3} {:>12.3} {:>10.2}",
            f_sim / n as f64,
            f_model / n as f64,
            (f_model / f_sim - 1.0) * 100.0
        );
    }
    Ok(())
}
