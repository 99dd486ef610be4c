//! Acceptance suite: one test per release criterion, each printing a
//! PASS line (visible with `--nocapture`).
//!
//! Run with: `cargo test --test acceptance -- --nocapture`

use std::path::PathBuf;
use std::process::Command;
use std::sync::OnceLock;

use rayon::prelude::*;

use spinsqueeze::bounds::{
    bound_exponent, protocol_exponent, saturation_table, Correction, Regime, RegimeQuery,
};
use spinsqueeze::cli;
use spinsqueeze::collective::Axis;
use spinsqueeze::dynamics::{diagonalize, evolve_series};
use spinsqueeze::fitting::{fit_amplitude, ScalingModel};
use spinsqueeze::oracle;
use spinsqueeze::protocols::{
    build_protocol_hamiltonian, find_optimal, tat_early_time_model, tat_model_time, OptimalResult,
    ProtocolKind, ProtocolSpec,
};
use spinsqueeze::qfi::{optimal_qfi, transverse_covariance};

fn report(criterion: u32, name: &str) {
    println!("acceptance criterion {criterion} ({name}): PASS");
}

/// The N = 400..=1000 step 50 sweep over all three protocols, shared by
/// the two scaling-law criteria.
fn sweep_data() -> &'static Vec<(ProtocolKind, usize, OptimalResult)> {
    static DATA: OnceLock<Vec<(ProtocolKind, usize, OptimalResult)>> = OnceLock::new();
    DATA.get_or_init(|| {
        let ns: Vec<usize> = (0..=12).map(|i| 400 + 50 * i).collect();
        let kinds = [ProtocolKind::Tat, ProtocolKind::Tnt, ProtocolKind::Oat];
        let jobs: Vec<(ProtocolKind, usize)> = kinds
            .iter()
            .flat_map(|&k| ns.iter().map(move |&n| (k, n)))
            .collect();
        jobs.par_iter()
            .map(|&(kind, n)| {
                let spec = ProtocolSpec::new(kind, n).expect("valid spec");
                (kind, n, find_optimal(&spec).expect("search converges"))
            })
            .collect()
    })
}

fn fitted_amplitude(
    kind: ProtocolKind,
    model: ScalingModel,
    value: impl Fn(&OptimalResult) -> f64,
) -> f64 {
    let data: Vec<(f64, f64)> = sweep_data()
        .iter()
        .filter(|r| r.0 == kind)
        .map(|r| (r.1 as f64, value(&r.2)))
        .collect();
    assert_eq!(data.len(), 13, "sweep must cover 13 sizes");
    fit_amplitude(&data, model).expect("fit succeeds").amplitude
}

fn assert_within(label: &str, amplitude: f64, target: f64, tolerance: f64) {
    let deviation = (amplitude / target - 1.0).abs();
    assert!(
        deviation <= tolerance,
        "{label}: amplitude {amplitude:.5} vs {target} (deviation {:.2}% > {:.0}%)",
        deviation * 100.0,
        tolerance * 100.0
    );
}

#[test]
fn criterion_1_optimal_time_scaling() {
    let tat = fitted_amplitude(ProtocolKind::Tat, ScalingModel::LogOverN, |r| r.t_opt);
    assert_within("TAT t_opt ~ A ln(N)/N", tat, 0.4730, 0.02);
    let tnt = fitted_amplitude(ProtocolKind::Tnt, ScalingModel::LogOverN, |r| r.t_opt);
    assert_within("TnT t_opt ~ A ln(N)/N", tnt, 0.554, 0.02);
    let oat = fitted_amplitude(
        ProtocolKind::Oat,
        ScalingModel::Power {
            exponent: -2.0 / 3.0,
        },
        |r| r.t_opt,
    );
    assert_within("OAT t_opt ~ A N^-2/3", oat, 1.144, 0.01);
    report(1, "optimal-time scaling amplitudes");
}

#[test]
fn criterion_2_optimal_qfi_scaling() {
    let tat = fitted_amplitude(ProtocolKind::Tat, ScalingModel::Power { exponent: 2.0 }, |r| {
        r.f_q_opt
    });
    assert_within("TAT F_Q ~ A N^2", tat, 0.3627, 0.02);
    let tnt = fitted_amplitude(ProtocolKind::Tnt, ScalingModel::Power { exponent: 1.5 }, |r| {
        r.f_q_opt
    });
    assert_within("TnT F_Q ~ A N^3/2", tnt, 1.32, 0.03);
    let oat = fitted_amplitude(
        ProtocolKind::Oat,
        ScalingModel::Power {
            exponent: 5.0 / 3.0,
        },
        |r| r.f_q_opt,
    );
    assert_within("OAT F_Q ~ A N^5/3", oat, 1.152, 0.02);

    // hierarchy among the protocols at matched sizes
    for &n in &[400usize, 700, 1000] {
        let get = |kind: ProtocolKind| {
            sweep_data()
                .iter()
                .find(|r| r.0 == kind && r.1 == n)
                .map(|r| r.2)
                .expect("row present")
        };
        let (tat, tnt, oat) = (get(ProtocolKind::Tat), get(ProtocolKind::Tnt), get(ProtocolKind::Oat));
        assert!(tat.f_q_opt > oat.f_q_opt && oat.f_q_opt > tnt.f_q_opt, "QFI hierarchy at N={n}");
        assert!(tat.t_opt < tnt.t_opt, "time hierarchy at N={n}");
    }
    report(2, "optimal-QFI scaling amplitudes");
}

#[test]
fn criterion_3_exponent_tables() {
    // boundary-straddling checks of every bound branch:
    // (alpha, d, gamma) -> (beta, regime, correction)
    use Correction::*;
    use Regime::*;
    let bound_cases: [(f64, u32, f64, f64, Regime, Correction); 22] = [
        (4.0, 1, 1.0, 1.0, LinearCone, None),
        (3.0, 1, 1.0, 1.0, Polynomial, SubPolynomialEpsilon),
        (2.5, 1, 1.0, 0.5, Polynomial, SubPolynomialEpsilon),
        (2.0, 1, 1.0, 0.0, Logarithmic, None),
        (1.2, 1, 1.0, 0.0, Logarithmic, None),
        (1.0, 1, 1.0, 0.0, InverseLogarithmic, LogFactor),
        (0.5, 1, 1.0, -0.5, VanishingPolynomial, None),
        (0.0, 1, 1.0, -1.0, VanishingPolynomial, None),
        (3.5, 1, 0.5, 0.5, LinearCone, None),
        (3.0, 1, 0.5, 0.5, Polynomial, SubPolynomialEpsilon),
        (2.5, 1, 0.5, 0.25, Polynomial, SubPolynomialEpsilon),
        (2.0, 1, 0.5, 0.0, Logarithmic, None),
        (1.6, 1, 0.5, 0.0, Logarithmic, None),
        (1.5, 1, 0.5, 0.0, Constant, None),
        (1.4, 1, 0.5, -0.05, VanishingPolynomial, None),
        (1.0, 1, 0.5, -0.5, VanishingPolynomial, LogFactor),
        (0.8, 1, 0.5, -0.7, VanishingPolynomial, None),
        (5.0, 2, 0.5, 0.5, Polynomial, SubPolynomialEpsilon),
        (4.0, 2, 0.5, 0.0, Logarithmic, None),
        (3.0, 2, 0.5, 0.0, Constant, None),
        (2.5, 2, 0.5, -0.25, VanishingPolynomial, None),
        (2.0, 2, 0.5, -1.0, VanishingPolynomial, LogFactor),
    ];
    for (alpha, d, gamma, beta, regime, correction) in bound_cases {
        let result = bound_exponent(&RegimeQuery::new(alpha, d, gamma).unwrap()).unwrap();
        assert!(
            (result.beta - beta).abs() <= 1e-12,
            "bound beta at ({alpha}, {d}, {gamma}): {} vs {beta}",
            result.beta
        );
        assert_eq!(result.regime, regime, "bound regime at ({alpha}, {d}, {gamma})");
        assert_eq!(
            result.correction, correction,
            "bound correction at ({alpha}, {d}, {gamma})"
        );
    }

    // protocol-side spot checks across its branches
    let protocol_cases: [(f64, u32, f64, f64, Regime, bool); 8] = [
        (4.0, 1, 1.0, 1.0, LinearCone, false),
        (2.5, 1, 1.0, 0.5, Polynomial, false),
        (2.0, 1, 0.7, 0.0, SubPolynomialStretch, false),
        (1.8, 1, 0.5, 0.0, Logarithmic, false),
        (1.5, 1, 0.5, 0.0, Logarithmic, true),
        (1.2, 1, 0.5, 0.0, Logarithmic, true),
        (0.5, 1, 0.5, -0.5, VanishingPolynomial, true),
        (0.0, 1, 1.0, -1.0, VanishingPolynomial, false),
    ];
    for (alpha, d, gamma, beta, regime, known_gap) in protocol_cases {
        let result = protocol_exponent(&RegimeQuery::new(alpha, d, gamma).unwrap()).unwrap();
        assert!(
            (result.beta - beta).abs() <= 1e-12,
            "protocol beta at ({alpha}, {d}, {gamma})"
        );
        assert_eq!(result.regime, regime, "protocol regime at ({alpha}, {d}, {gamma})");
        assert_eq!(result.known_gap, known_gap, "gap flag at ({alpha}, {d}, {gamma})");
    }
    let kappa = protocol_exponent(&RegimeQuery::new(1.8, 1, 0.5).unwrap())
        .unwrap()
        .kappa
        .unwrap();
    assert!((kappa - 4.0_f64.ln() / (2.0_f64 / 1.8).ln()).abs() <= 1e-12);

    // saturation: everywhere at the Heisenberg limit, and exactly above
    // alpha = 1.5 d for gamma = 1/2
    let grid: Vec<f64> = (0..=100).map(|i| i as f64 / 20.0).collect();
    for row in saturation_table(1, 1.0, &grid).unwrap() {
        assert!(row.saturated, "gamma=1 not saturated at alpha={}", row.alpha);
    }
    for d in 1u32..=3 {
        let scale = d as f64;
        let grid: Vec<f64> = (0..=100).map(|i| i as f64 / 20.0 * scale).collect();
        for row in saturation_table(d, 0.5, &grid).unwrap() {
            assert_eq!(
                row.saturated,
                row.alpha > 1.5 * scale,
                "gamma=0.5 d={d} alpha={}",
                row.alpha
            );
        }
    }
    report(3, "bound and protocol exponent tables");
}

#[test]
fn criterion_4_oracle_equivalence() {
    for kind in [ProtocolKind::Tat, ProtocolKind::Tnt, ProtocolKind::Oat] {
        for n in [4usize, 6, 8] {
            let spec = ProtocolSpec::new(kind, n).unwrap();
            let grid: Vec<f64> = (0..50)
                .map(|i| 2.0 * spec.time_scale_guess() * i as f64 / 49.0)
                .collect();
            let spectral = diagonalize(&build_protocol_hamiltonian(&spec).unwrap()).unwrap();
            let initial = spec.initial_state().unwrap();
            let dicke_states = evolve_series(&spectral, &initial, &grid).unwrap();

            let full_spectral =
                oracle::FullSpectral::new(&oracle::full_protocol_hamiltonian(&spec).unwrap())
                    .unwrap();
            let full_initial = oracle::embed_dicke(&initial).unwrap();
            for (&t, dicke_state) in grid.iter().zip(&dicke_states) {
                let f_dicke = optimal_qfi(&transverse_covariance(dicke_state).unwrap()).f_q;
                let full_state = full_spectral.evolve(&full_initial, t).unwrap();
                let f_full =
                    optimal_qfi(&oracle::transverse_covariance_full(&full_state).unwrap()).f_q;
                let gap = (f_full - f_dicke).abs() / (1.0 + f_dicke.abs());
                assert!(
                    gap <= 1e-8,
                    "{} N={n} t={t}: QFI gap {gap:.3e}",
                    kind.label()
                );
            }
        }
    }
    report(4, "Dicke vs full-space QFI trajectories");
}

#[test]
fn criterion_5_correlation_bound_property_suite() {
    let suite = cli::verify_fvc(100, 42);
    assert!(
        suite.pass(),
        "correlation-bound suite failures: {:?}",
        suite.failures
    );
    assert_eq!(suite.trials, 100);
    report(5, "mixed-state QFI bound and gap identity, 100 random states");
}

#[test]
fn criterion_6_early_time_model_window() {
    for n in [100usize, 200] {
        let spec = ProtocolSpec::new(ProtocolKind::Tat, n).unwrap();
        let spectral = diagonalize(&build_protocol_hamiltonian(&spec).unwrap()).unwrap();
        let initial = spec.initial_state().unwrap();
        let grid: Vec<f64> = (1..=60).map(|k| k as f64 * 2.5e-4).collect();
        let states = evolve_series(&spectral, &initial, &grid).unwrap();
        let mut checked = 0;
        for (&t, state) in grid.iter().zip(&states) {
            let f_sim = optimal_qfi(&transverse_covariance(state).unwrap()).f_q;
            if f_sim / n as f64 > 10.0 {
                break;
            }
            let f_model = tat_early_time_model(n, tat_model_time(spec.chi(), t)).unwrap();
            let deviation = (f_model - f_sim).abs() / f_sim;
            assert!(
                deviation <= 0.15,
                "N={n} t={t}: model off by {:.1}%",
                deviation * 100.0
            );
            checked += 1;
        }
        assert!(checked >= 10, "N={n}: window covered only {checked} points");
    }
    report(6, "early-time analytic QFI model window");
}

#[test]
fn criterion_7_correlation_envelope() {
    let template = oracle::LatticeSpec::uniform_twisting(4, oracle::LatticeDimension::One, 0.0);
    let t_grid: Vec<f64> = (1..=8).map(|i| 0.0125 * i as f64).collect();
    let envelope = oracle::correlation_envelope_check(&template, &t_grid, 3, 42).unwrap();
    assert!(
        envelope.pass,
        "envelope ratio trend: relative slope {:.3} (ratios {:?})",
        envelope.relative_slope, envelope.max_ratio_per_size
    );
    assert_eq!(envelope.sizes, vec![4, 6, 8, 10]);

    // nearest-neighbor preset: distant pairs stay silent at early times
    let n = 10;
    let lattice = oracle::build_lattice(&oracle::LatticeSpec::nearest_neighbor(
        n,
        oracle::LatticeDimension::One,
    ))
    .unwrap();
    let spectral = oracle::FullSpectral::new(&lattice.to_dense()).unwrap();
    let initial =
        oracle::FullState::polarized_x(n, spinsqueeze::collective::Direction::MinusX).unwrap();
    for &t in &[0.02, 0.05, 0.1] {
        let state = spectral.evolve(&initial, t).unwrap();
        let (corr, _) =
            oracle::connected_correlations(&state, &oracle::sz_site_ops(n)).unwrap();
        let distant = corr[(0, n - 1)].abs();
        assert!(distant <= 1e-6, "distant pair at t={t}: {distant:.3e}");
    }

    // sanity on the generator set used throughout: unit-bounded site ops
    for op in oracle::sz_site_ops(3) {
        let norm = op
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0_f64, f64::max);
        assert!(norm <= 1.0);
    }
    let _ = Axis::Z;
    report(7, "correlation envelope and light-cone suppression");
}

#[test]
fn criterion_8_deterministic_pipeline() {
    let dir = std::env::temp_dir().join(format!("spinsqueeze-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bin = env!("CARGO_BIN_EXE_spinsqueeze");

    // both runs use identical paths and seeds; the first run's outputs
    // are snapshotted before the rerun overwrites them
    let sweep = dir.join("sweep.csv");
    let stages: Vec<(&str, Vec<String>)> = vec![
        (
            "sweep",
            vec![
                "sweep".into(),
                "--protocols".into(),
                "tat,tnt,oat".into(),
                "--n".into(),
                "400,500".into(),
                "--jobs".into(),
                "2".into(),
                "--out".into(),
                sweep.display().to_string(),
            ],
        ),
        (
            "fit",
            vec![
                "fit".into(),
                "--input".into(),
                sweep.display().to_string(),
                "--format".into(),
                "json".into(),
                "--out".into(),
                dir.join("fit.json").display().to_string(),
            ],
        ),
        (
            "bounds",
            vec![
                "bounds".into(),
                "--out".into(),
                dir.join("bounds.csv").display().to_string(),
            ],
        ),
        (
            "simulate",
            vec![
                "simulate".into(),
                "--protocol".into(),
                "tat".into(),
                "--n".into(),
                "50".into(),
                "--t-points".into(),
                "64".into(),
                "--format".into(),
                "json".into(),
                "--out".into(),
                dir.join("traj.json").display().to_string(),
            ],
        ),
        (
            "verify",
            vec![
                "verify".into(),
                "--suite".into(),
                "fvc".into(),
                "--trials".into(),
                "40".into(),
                "--seed".into(),
                "42".into(),
                "--format".into(),
                "json".into(),
                "--out".into(),
                dir.join("verify.json").display().to_string(),
            ],
        ),
    ];
    let run_pipeline = || -> Vec<(String, PathBuf)> {
        stages
            .iter()
            .map(|(name, args)| {
                let out = Command::new(bin).args(args).output().expect("stage runs");
                assert!(
                    out.status.success(),
                    "{name} failed: {}",
                    String::from_utf8_lossy(&out.stderr)
                );
                (name.to_string(), PathBuf::from(args.last().unwrap()))
            })
            .collect()
    };

    let first = run_pipeline();
    let snapshots: Vec<(String, Vec<u8>)> = first
        .iter()
        .map(|(name, path)| (name.clone(), std::fs::read(path).unwrap()))
        .collect();
    let second = run_pipeline();
    for ((name, snapshot), (_, path)) in snapshots.iter().zip(&second) {
        let rerun = std::fs::read(path).unwrap();
        assert_eq!(snapshot, &rerun, "stage {name} not byte-identical");
    }
    report(8, "byte-identical pipeline outputs at fixed seed");
}
