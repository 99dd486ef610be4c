//! Early-time correlation spreading against the `v · t` envelope, and
//! light-cone suppression for nearest-neighbor coupling.
//!
//! Run: `cargo run --release --example correlation_envelope`

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use spinsqueeze::oracle::{
    build_lattice, connected_correlations, correlation_envelope_check, sz_site_ops, FullSpectral,
    FullState, LatticeDimension, LatticeSpec,
};

fn main() -> spinsqueeze::Result<()> {
    // all-to-all coupling: ratios must not grow with system size
    let template = LatticeSpec::uniform_twisting(4, LatticeDimension::One, 0.0);
    let t_grid: Vec<f64> = (1..=8).map(|i| 0.0125 * i as f64).collect();
    let report = correlation_envelope_check(&template, &t_grid, 3, 7)?;
    println!("uniform all-to-all coupling, max |C_ij|/(v t) per size:");
    for (n, ratio) in report.sizes.iter().zip(&report.max_ratio_per_size) {
        println!("  N = {n:>2}: {ratio:.4}");
    }
    println!(
        "relative slope across N: {:.3} (threshold {}) -> {}",
        report.relative_slope,
        report.threshold,
        if report.pass { "PASS" } else { "FAIL" }
    );

    // nearest-neighbor coupling: the far end of the chain stays silent
    let n = 10;
    let lattice = build_lattice(&LatticeSpec::nearest_neighbor(n, LatticeDimension::One))?;
    let spectral = FullSpectral::new(&lattice.to_dense())?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let initial = FullState::random_product(n, &mut rng)?;
    println!("\nnearest-neighbor chain of {n}, |C(first, last)|:");
    for &t in &[0.05, 0.1, 0.5, 2.0] {
        let state = spectral.evolve(&initial, t)?;
        let (corr, _) = connected_correlations(&state, &sz_site_ops(n))?;
        println!("  t = {t:>4}: {:.3e}", corr[(0, n - 1)].abs());
    }
    println!("correlations need time ~ distance to cross the chain.");
    Ok(())
}
