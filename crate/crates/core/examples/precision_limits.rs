//! Phase-estimation error floors from the QFI: the standard quantum
//! limit, squeezing-enhanced scaling, and the Heisenberg limit.
//!
//! Run: `cargo run --release --example precision_limits`

use spinsqueeze::protocols::{find_optimal, ProtocolKind, ProtocolSpec};
use spinsqueeze::qfi::cramer_rao;

fn main() -> spinsqueeze::Result<()> {
    let n = 250;
    let m = 1;
    println!("N = {n} spins, {m} measurement repetition\n");
    println!("{:>26} {:>12} {:>14}", "state", "F_Q", "delta-theta");

    let product = n as f64;
    println!(
        "{:>26} {:>12.1} {:>14.6}",
        "coherent (product)",
        product,
        cramer_rao(product, m)?
    );

    for kind in [ProtocolKind::Oat, ProtocolKind::Tnt, ProtocolKind::Tat] {
        let result = find_optimal(&ProtocolSpec::new(kind, n)?)?;
        println!(
            "{:>26} {:>12.1} {:>14.6}",
            format!("{} squeezed", kind.label()),
            result.f_q_opt,
            cramer_rao(result.f_q_opt, m)?
        );
    }

    let heisenberg = (n * n) as f64;
    println!(
        "{:>26} {:>12.1} {:>14.6}",
        "GHZ (Heisenberg limit)",
        heisenberg,
        cramer_rao(heisenberg, m)?
    );
    Ok(())
}
