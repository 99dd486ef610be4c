//! Sweep system sizes, then fit the scaling amplitudes of the optimal
//! time and QFI.
//!
//! Run: `cargo run --release --example sweep_and_fit`

use rayon::prelude::*;
use spinsqueeze::fitting::{fit_amplitude, ScalingModel};
use spinsqueeze::protocols::{find_optimal, OptimalResult, ProtocolKind, ProtocolSpec};

fn main() -> spinsqueeze::Result<()> {
    let ns: Vec<usize> = (0..=6).map(|i| 200 + 50 * i).collect();
    let kind = ProtocolKind::Oat;

    let rows: Vec<(usize, OptimalResult)> = ns
        .par_iter()
        .map(|&n| {
            let result = find_optimal(&ProtocolSpec::new(kind, n).expect("valid spec"))
                .expect("search converges");
            (n, result)
        })
        .collect();

    println!("{:>6} {:>12} {:>14}", "N", "t_opt", "F_Q(t_opt)");
    for (n, r) in &rows {
        println!("{n:>6} {:>12.6} {:>14.2}", r.t_opt, r.f_q_opt);
    }

    let t_data: Vec<(f64, f64)> = rows.iter().map(|(n, r)| (*n as f64, r.t_opt)).collect();
    let f_data: Vec<(f64, f64)> = rows.iter().map(|(n, r)| (*n as f64, r.f_q_opt)).collect();
    let t_fit = fit_amplitude(&t_data, ScalingModel::Power { exponent: -2.0 / 3.0 })?;
    let f_fit = fit_amplitude(&f_data, ScalingModel::Power { exponent: 5.0 / 3.0 })?;
    println!("\none-axis twisting scaling fits over N = {}..{}:", ns[0], ns[ns.len() - 1]);
    println!(
        "  t_opt = ({:.4} +- {:.4}) N^(-2/3)",
        t_fit.amplitude, t_fit.std_error
    );
    println!(
        "  F_Q   = ({:.4} +- {:.4}) N^(5/3)",
        f_fit.amplitude, f_fit.std_error
    );
    Ok(())
}
