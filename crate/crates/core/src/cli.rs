//! Batch command-line front end.
//!
//! Subcommands: `simulate`, `optimize`, `sweep`, `fit`, `bounds`,
//! `verify`. Every command honors the global flags `--seed`, `--jobs`,
//! `--format {csv,json}`, `--out <path>`, and `--config <file>`, where the
//! config file is a flat `key = value` text file whose keys mirror the long
//! flag names; explicit flags override file entries.
//!
//! CSV output is UTF-8, comma-separated, LF-terminated, with a header row
//! and 12 significant digits on floating-point columns. JSON output is a
//! single object `{"meta": {...}, "rows": [...]}` with unrounded numbers;
//! `meta` echoes the crate version, the seed, and the resolved
//! configuration. Outputs are byte-identical across runs at a fixed seed;
//! sweep jobs run in parallel but merge in a fixed order.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::bounds::{saturation_table, SaturationRow};
use crate::collective::{build_collective, Axis, Direction};
use crate::dynamics::{diagonalize, evolve_series};
use crate::error::Error;
use crate::fitting::{fit_amplitude, FitResult, ScalingModel};
use crate::oracle;
use crate::protocols::{
    build_protocol_hamiltonian, find_optimal, qfi_trajectory, OptimalResult, ProtocolKind,
    ProtocolSpec, TrajectoryRecord,
};
use crate::qfi::{self, optimal_qfi, MixedState};

const DEFAULT_SEED: u64 = 42;
const DEFAULT_TRIALS: usize = 100;

/// Failure modes of a CLI invocation, mapped to exit codes:
/// 0 success, 1 runtime or verification failure, 2 usage error.
enum CliError {
    Usage(String),
    Failure(String),
    /// Verification failed; the report table still gets written.
    VerifyFailed(Table),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) | CliError::VerifyFailed(_) => 1,
        }
    }

    fn message(&self) -> Option<&str> {
        match self {
            CliError::Usage(msg) | CliError::Failure(msg) => Some(msg),
            CliError::VerifyFailed(_) => None,
        }
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        match err {
            Error::InvalidArgument(_) => CliError::Usage(err.to_string()),
            other => CliError::Failure(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Failure(format!("i/o error: {err}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format '{other}' (expected csv or json)")),
        }
    }
}

impl std::fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DirectionArg {
    PlusX,
    MinusX,
}

impl FromStr for DirectionArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "plus-x" | "+x" => Ok(DirectionArg::PlusX),
            "minus-x" | "-x" => Ok(DirectionArg::MinusX),
            other => Err(format!(
                "unknown direction '{other}' (expected plus-x or minus-x)"
            )),
        }
    }
}

impl std::fmt::Display for DirectionArg {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DirectionArg::PlusX => "plus-x",
            DirectionArg::MinusX => "minus-x",
        })
    }
}

impl From<DirectionArg> for Direction {
    fn from(d: DirectionArg) -> Self {
        match d {
            DirectionArg::PlusX => Direction::PlusX,
            DirectionArg::MinusX => Direction::MinusX,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "spinsqueeze",
    version,
    about = "Collective spin squeezing, quantum Fisher information, and preparation-time scaling"
)]
struct Cli {
    #[command(flatten)]
    common: CommonArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Flat key = value config file; flags override file entries.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for the randomized verification suites.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for parallel sweeps (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Output format.
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    /// Output path; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Record one squeezing trajectory: t, moments, optimal angle, QFI.
    Simulate(SimulateArgs),
    /// Locate the optimal squeezing time of one run.
    Optimize(OptimizeArgs),
    /// Optimal time and QFI across protocols and an N grid.
    Sweep(SweepArgs),
    /// Fit scaling-law amplitudes to a sweep file.
    Fit(FitArgs),
    /// Tabulate bound and protocol time-scaling exponents.
    Bounds(BoundsArgs),
    /// Run the cross-validation and property suites.
    Verify(VerifyArgs),
}

#[derive(Args, Clone)]
struct SimulateArgs {
    /// Protocol: tat, tnt, or oat.
    #[arg(long)]
    protocol: Option<ProtocolKind>,
    /// Number of spins.
    #[arg(long)]
    n: Option<usize>,
    /// Interaction strength (sets the time unit 1/chi).
    #[arg(long)]
    chi: Option<f64>,
    /// Twist-and-turn field (TnT only; default chi*N/2).
    #[arg(long)]
    b_field: Option<f64>,
    /// Initial polarization.
    #[arg(long, value_enum)]
    direction: Option<DirectionArg>,
    /// Last grid time (default: twice the protocol's optimal-time scale).
    #[arg(long)]
    t_max: Option<f64>,
    /// Number of grid points.
    #[arg(long)]
    t_points: Option<usize>,
    /// Append a column comparing against the full-Hilbert-space engine
    /// (needs n <= 10).
    #[arg(long)]
    oracle_check: bool,
}

#[derive(Args, Clone)]
struct OptimizeArgs {
    /// Protocol: tat, tnt, or oat.
    #[arg(long)]
    protocol: Option<ProtocolKind>,
    /// Number of spins.
    #[arg(long)]
    n: Option<usize>,
    /// Interaction strength.
    #[arg(long)]
    chi: Option<f64>,
    /// Twist-and-turn field (TnT only).
    #[arg(long)]
    b_field: Option<f64>,
    /// Initial polarization.
    #[arg(long, value_enum)]
    direction: Option<DirectionArg>,
}

#[derive(Args, Clone)]
struct SweepArgs {
    /// Comma-separated protocols, e.g. tat,tnt,oat.
    #[arg(long)]
    protocols: Option<String>,
    /// N grid: single value, comma list, or start:stop:step.
    #[arg(long)]
    n: Option<String>,
    /// Interaction strength.
    #[arg(long)]
    chi: Option<f64>,
    /// Initial polarization.
    #[arg(long, value_enum)]
    direction: Option<DirectionArg>,
}

#[derive(Args, Clone)]
struct FitArgs {
    /// Sweep CSV file to fit.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Restrict to one quantity: t-opt or f-q-opt (default: both).
    #[arg(long)]
    quantity: Option<String>,
}

#[derive(Args, Clone)]
struct BoundsArgs {
    /// Comma-separated lattice dimensions (default 1).
    #[arg(long)]
    d: Option<String>,
    /// Comma-separated gamma values (default 1.0,0.5).
    #[arg(long)]
    gamma: Option<String>,
    /// Alpha grid: single value, comma list, or start:stop:step
    /// (default 0:4:0.1).
    #[arg(long)]
    alpha: Option<String>,
}

#[derive(Args, Clone)]
struct VerifyArgs {
    /// Suite: all, zeta, fvc, sector, or envelope.
    #[arg(long)]
    suite: Option<String>,
    /// Trials for the randomized suites.
    #[arg(long)]
    trials: Option<usize>,
}

/// Flat `key = value` config file; `#` starts a comment.
fn load_config(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Usage(format!(
                "config {}:{}: expected 'key = value', got '{raw}'",
                path.display(),
                lineno + 1
            )));
        };
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

/// Flag-over-config-over-default resolution; every resolved value is
/// echoed into the JSON meta block.
struct Resolver {
    config: BTreeMap<String, String>,
    echo: BTreeMap<String, String>,
}

impl Resolver {
    fn new(common: &CommonArgs) -> Result<Self, CliError> {
        let config = match &common.config {
            Some(path) => load_config(path)?,
            None => BTreeMap::new(),
        };
        Ok(Self {
            config,
            echo: BTreeMap::new(),
        })
    }

    fn lookup<T>(&mut self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError>
    where
        T: FromStr + ToString,
        T::Err: std::fmt::Display,
    {
        let value = match flag {
            Some(v) => Some(v),
            None => match self.config.get(key) {
                Some(raw) => Some(
                    raw.parse::<T>()
                        .map_err(|e| CliError::Usage(format!("config key '{key}' = '{raw}': {e}")))?,
                ),
                None => None,
            },
        };
        if let Some(v) = &value {
            self.echo.insert(key.to_string(), v.to_string());
        }
        Ok(value)
    }

    fn with_default<T>(&mut self, flag: Option<T>, key: &str, default: T) -> Result<T, CliError>
    where
        T: FromStr + ToString,
        T::Err: std::fmt::Display,
    {
        let value = self.lookup(flag, key)?.unwrap_or(default);
        self.echo.insert(key.to_string(), value.to_string());
        Ok(value)
    }

    fn require<T>(&mut self, flag: Option<T>, key: &str) -> Result<T, CliError>
    where
        T: FromStr + ToString,
        T::Err: std::fmt::Display,
    {
        self.lookup(flag, key)?
            .ok_or_else(|| CliError::Usage(format!("missing required option --{key}")))
    }

    fn flag_bool(&mut self, flag: bool, key: &str) -> Result<bool, CliError> {
        let value = if flag {
            true
        } else {
            match self.config.get(key) {
                Some(raw) => raw
                    .parse::<bool>()
                    .map_err(|e| CliError::Usage(format!("config key '{key}' = '{raw}': {e}")))?,
                None => false,
            }
        };
        self.echo.insert(key.to_string(), value.to_string());
        Ok(value)
    }
}

/// Parses "start:stop:step", a comma list, or a single value. Grid values
/// snap to a 1e-9 lattice so decimal steps land exactly on regime
/// boundaries like 1.5.
fn parse_f64_grid(text: &str) -> Result<Vec<f64>, CliError> {
    let parse_one = |s: &str| -> Result<f64, CliError> {
        s.trim()
            .parse::<f64>()
            .map_err(|e| CliError::Usage(format!("bad number '{s}': {e}")))
    };
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(CliError::Usage(format!(
                "bad range '{text}' (expected start:stop:step)"
            )));
        }
        let (start, stop, step) =
            (parse_one(parts[0])?, parse_one(parts[1])?, parse_one(parts[2])?);
        if !(step > 0.0) || stop < start {
            return Err(CliError::Usage(format!("bad range '{text}'")));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize;
        Ok((0..=count)
            .map(|i| ((start + step * i as f64) * 1e9).round() / 1e9)
            .collect())
    } else {
        text.split(',').map(parse_one).collect()
    }
}

fn parse_usize_grid(text: &str) -> Result<Vec<usize>, CliError> {
    parse_f64_grid(text)?
        .into_iter()
        .map(|v| {
            if v >= 1.0 && v.fract() == 0.0 {
                Ok(v as usize)
            } else {
                Err(CliError::Usage(format!(
                    "expected positive integer, got {v}"
                )))
            }
        })
        .collect()
}

/// 12 significant digits, scientific notation.
fn fmt_f64(x: f64) -> String {
    format!("{x:.11e}")
}

/// One output table, rendered to CSV or JSON rows.
struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    json_rows: Vec<serde_json::Value>,
}

impl Table {
    fn new(header: Vec<&'static str>) -> Self {
        Self {
            header,
            rows: Vec::new(),
            json_rows: Vec::new(),
        }
    }

    fn push(&mut self, csv: Vec<String>, json: serde_json::Value) {
        debug_assert_eq!(csv.len(), self.header.len());
        self.rows.push(csv);
        self.json_rows.push(json);
    }
}

fn render(
    table: &Table,
    format: OutputFormat,
    command: &str,
    seed: u64,
    echo: &BTreeMap<String, String>,
) -> String {
    match format {
        OutputFormat::Csv => {
            let mut text = String::new();
            text.push_str(&table.header.join(","));
            text.push('\n');
            for row in &table.rows {
                text.push_str(&row.join(","));
                text.push('\n');
            }
            text
        }
        OutputFormat::Json => {
            let config: serde_json::Map<String, serde_json::Value> = echo
                .iter()
                .map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone())))
                .collect();
            let doc = json!({
                "meta": {
                    "command": command,
                    "version": env!("CARGO_PKG_VERSION"),
                    "seed": seed,
                    "config": config,
                },
                "rows": table.json_rows,
            });
            let mut text = serde_json::to_string_pretty(&doc).expect("json serialization");
            text.push('\n');
            text
        }
    }
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn build_spec(
    kind: ProtocolKind,
    n: usize,
    chi: f64,
    b_field: Option<f64>,
    direction: Direction,
) -> Result<ProtocolSpec, CliError> {
    let mut spec = ProtocolSpec::new(kind, n)?.with_chi(chi)?;
    if let Some(b) = b_field {
        spec = spec.with_b_field(b)?;
    }
    Ok(spec.with_initial_direction(direction))
}

fn cmd_simulate(args: SimulateArgs, resolver: &mut Resolver) -> Result<Table, CliError> {
    let kind: ProtocolKind = resolver.require(args.protocol, "protocol")?;
    let n = resolver.require(args.n, "n")?;
    let chi = resolver.with_default(args.chi, "chi", 1.0)?;
    let b_field = resolver.lookup(args.b_field, "b-field")?;
    let direction: DirectionArg =
        resolver.with_default(args.direction, "direction", DirectionArg::MinusX)?;
    let spec = build_spec(kind, n, chi, b_field, direction.into())?;
    let t_max = resolver.with_default(args.t_max, "t-max", 2.0 * spec.time_scale_guess())?;
    let t_points = resolver.with_default(args.t_points, "t-points", 256usize)?;
    let oracle_check = resolver.flag_bool(args.oracle_check, "oracle-check")?;
    if t_points < 2 {
        return Err(CliError::Usage("t-points must be at least 2".into()));
    }
    if !(t_max > 0.0) || !t_max.is_finite() {
        return Err(CliError::Usage("t-max must be positive and finite".into()));
    }
    if oracle_check && n > 10 {
        return Err(CliError::Usage(
            "oracle-check needs n <= 10 (full 2^N engine)".into(),
        ));
    }

    let grid: Vec<f64> = (0..t_points)
        .map(|i| t_max * i as f64 / (t_points - 1) as f64)
        .collect();
    let records = qfi_trajectory(&spec, &grid)?;
    let discrepancies = if oracle_check {
        Some(oracle_discrepancies(&spec, &grid, &records)?)
    } else {
        None
    };

    let mut header = vec!["t", "syy", "szz", "cross", "theta_opt", "f_q"];
    if oracle_check {
        header.push("oracle_discrepancy");
    }
    let mut table = Table::new(header);
    for (i, rec) in records.iter().enumerate() {
        let mut csv = vec![
            fmt_f64(rec.t),
            fmt_f64(rec.covariance.syy),
            fmt_f64(rec.covariance.szz),
            fmt_f64(rec.covariance.cross),
            fmt_f64(rec.theta_opt),
            fmt_f64(rec.f_q),
        ];
        let mut row = json!({
            "t": rec.t,
            "syy": rec.covariance.syy,
            "szz": rec.covariance.szz,
            "cross": rec.covariance.cross,
            "theta_opt": rec.theta_opt,
            "f_q": rec.f_q,
        });
        if let Some(d) = &discrepancies {
            csv.push(fmt_f64(d[i]));
            row["oracle_discrepancy"] = json!(d[i]);
        }
        table.push(csv, row);
    }
    Ok(table)
}

/// Mixed absolute/relative gap between the Dicke trajectory QFI and a full
/// 2^N-space recomputation: `|ΔF| / (1 + F)`.
fn oracle_discrepancies(
    spec: &ProtocolSpec,
    grid: &[f64],
    records: &[TrajectoryRecord],
) -> Result<Vec<f64>, CliError> {
    let h_full = oracle::full_protocol_hamiltonian(spec)?;
    let spectral = oracle::FullSpectral::new(&h_full)?;
    let initial = oracle::embed_dicke(&spec.initial_state()?)?;
    let mut out = Vec::with_capacity(grid.len());
    for (&t, record) in grid.iter().zip(records) {
        let state = spectral.evolve(&initial, t)?;
        let f_full = optimal_qfi(&oracle::transverse_covariance_full(&state)?).f_q;
        out.push((f_full - record.f_q).abs() / (1.0 + record.f_q.abs()));
    }
    Ok(out)
}

const OPTIMAL_HEADER: [&str; 6] = [
    "protocol",
    "n",
    "t_opt",
    "f_q_opt",
    "theta_opt",
    "evaluations",
];

fn optimal_table_row(
    kind: ProtocolKind,
    n: usize,
    r: &OptimalResult,
) -> (Vec<String>, serde_json::Value) {
    (
        vec![
            kind.label().to_string(),
            n.to_string(),
            fmt_f64(r.t_opt),
            fmt_f64(r.f_q_opt),
            fmt_f64(r.theta_opt),
            r.evaluations.to_string(),
        ],
        json!({
            "protocol": kind.label(),
            "n": n,
            "t_opt": r.t_opt,
            "f_q_opt": r.f_q_opt,
            "theta_opt": r.theta_opt,
            "evaluations": r.evaluations,
        }),
    )
}

fn cmd_optimize(args: OptimizeArgs, resolver: &mut Resolver) -> Result<Table, CliError> {
    let kind: ProtocolKind = resolver.require(args.protocol, "protocol")?;
    let n = resolver.require(args.n, "n")?;
    let chi = resolver.with_default(args.chi, "chi", 1.0)?;
    let b_field = resolver.lookup(args.b_field, "b-field")?;
    let direction: DirectionArg =
        resolver.with_default(args.direction, "direction", DirectionArg::MinusX)?;
    let spec = build_spec(kind, n, chi, b_field, direction.into())?;
    let result = find_optimal(&spec).map_err(|e| CliError::Failure(e.to_string()))?;
    let mut table = Table::new(OPTIMAL_HEADER.to_vec());
    let (csv, row) = optimal_table_row(kind, n, &result);
    table.push(csv, row);
    Ok(table)
}

fn cmd_sweep(args: SweepArgs, resolver: &mut Resolver, jobs: usize) -> Result<Table, CliError> {
    let protocols_text =
        resolver.with_default(args.protocols, "protocols", "tat,tnt,oat".to_string())?;
    let kinds: Vec<ProtocolKind> = protocols_text
        .split(',')
        .map(|s| s.trim().parse::<ProtocolKind>())
        .collect::<crate::error::Result<_>>()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let n_text = resolver.require(args.n, "n")?;
    let ns = parse_usize_grid(&n_text)?;
    let chi = resolver.with_default(args.chi, "chi", 1.0)?;
    let direction: DirectionArg =
        resolver.with_default(args.direction, "direction", DirectionArg::MinusX)?;

    let job_list: Vec<(ProtocolKind, usize)> = kinds
        .iter()
        .flat_map(|&kind| ns.iter().map(move |&n| (kind, n)))
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Failure(format!("thread pool: {e}")))?;
    // jobs are independent and pure; the ordered collect keeps output
    // deterministic regardless of the parallelism degree
    let results: Vec<(ProtocolKind, usize, crate::error::Result<OptimalResult>)> =
        pool.install(|| {
            use rayon::prelude::*;
            job_list
                .par_iter()
                .map(|&(kind, n)| {
                    let run = ProtocolSpec::new(kind, n)
                        .and_then(|s| s.with_chi(chi))
                        .map(|s| s.with_initial_direction(direction.into()))
                        .and_then(|spec| find_optimal(&spec));
                    (kind, n, run)
                })
                .collect()
        });

    let mut table = Table::new(OPTIMAL_HEADER.to_vec());
    let mut failures = Vec::new();
    for (kind, n, result) in &results {
        match result {
            Ok(r) => {
                let (csv, row) = optimal_table_row(*kind, *n, r);
                table.push(csv, row);
            }
            Err(e) => failures.push(format!("{} n={}: {e}", kind.label(), n)),
        }
    }
    if !failures.is_empty() {
        for f in &failures {
            eprintln!("sweep row failed: {f}");
        }
        return Err(CliError::Failure(format!(
            "{} of {} sweep rows failed",
            failures.len(),
            results.len()
        )));
    }
    Ok(table)
}

/// The published scaling model of each (protocol, quantity) pair.
fn model_for(kind: ProtocolKind, quantity: &str) -> ScalingModel {
    match (kind, quantity) {
        (ProtocolKind::Tat, "t_opt") | (ProtocolKind::Tnt, "t_opt") => ScalingModel::LogOverN,
        (ProtocolKind::Oat, "t_opt") => ScalingModel::Power {
            exponent: -2.0 / 3.0,
        },
        (ProtocolKind::Tat, _) => ScalingModel::Power { exponent: 2.0 },
        (ProtocolKind::Tnt, _) => ScalingModel::Power { exponent: 1.5 },
        (ProtocolKind::Oat, _) => ScalingModel::Power {
            exponent: 5.0 / 3.0,
        },
    }
}

fn cmd_fit(args: FitArgs, resolver: &mut Resolver) -> Result<Table, CliError> {
    let input: PathBuf = resolver.require(args.input.map(p2s), "input").map(s2p)?;
    let quantity = resolver.lookup(args.quantity, "quantity")?;
    let quantities: Vec<&str> = match quantity.as_deref() {
        None => vec!["t_opt", "f_q_opt"],
        Some("t-opt") | Some("t_opt") => vec!["t_opt"],
        Some("f-q-opt") | Some("f_q_opt") => vec!["f_q_opt"],
        Some(other) => {
            return Err(CliError::Usage(format!(
                "unknown quantity '{other}' (expected t-opt or f-q-opt)"
            )))
        }
    };

    let text = std::fs::read_to_string(&input)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", input.display())))?;
    let mut lines = text.lines();
    let header: Vec<&str> = lines
        .next()
        .ok_or_else(|| CliError::Usage("empty sweep file".into()))?
        .split(',')
        .collect();
    let col = |name: &str| -> Result<usize, CliError> {
        header
            .iter()
            .position(|&h| h == name)
            .ok_or_else(|| CliError::Usage(format!("sweep file lacks column '{name}'")))
    };
    let (c_protocol, c_n) = (col("protocol")?, col("n")?);
    let c_quantity: Vec<usize> = quantities.iter().map(|q| col(q)).collect::<Result<_, _>>()?;

    let mut per_protocol: BTreeMap<String, Vec<(f64, Vec<f64>)>> = BTreeMap::new();
    for line in lines.filter(|l| !l.trim().is_empty()) {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != header.len() {
            return Err(CliError::Usage(format!("ragged sweep row: '{line}'")));
        }
        let n: f64 = fields[c_n]
            .parse()
            .map_err(|e| CliError::Usage(format!("bad n '{}': {e}", fields[c_n])))?;
        let values: Vec<f64> = c_quantity
            .iter()
            .map(|&c| {
                fields[c]
                    .parse::<f64>()
                    .map_err(|e| CliError::Usage(format!("bad value '{}': {e}", fields[c])))
            })
            .collect::<Result<_, _>>()?;
        per_protocol
            .entry(fields[c_protocol].to_string())
            .or_default()
            .push((n, values));
    }
    if per_protocol.is_empty() {
        return Err(CliError::Usage("sweep file has no data rows".into()));
    }

    let mut table = Table::new(vec![
        "protocol",
        "quantity",
        "model",
        "amplitude",
        "std_error",
        "residual_rms",
        "n_points",
    ]);
    for (protocol, rows) in &per_protocol {
        let kind: ProtocolKind = protocol
            .parse()
            .map_err(|e: Error| CliError::Usage(e.to_string()))?;
        for (qi, &quantity) in quantities.iter().enumerate() {
            let data: Vec<(f64, f64)> = rows.iter().map(|(n, v)| (*n, v[qi])).collect();
            let model = model_for(kind, quantity);
            let fit: FitResult = fit_amplitude(&data, model)?;
            table.push(
                vec![
                    protocol.clone(),
                    quantity.to_string(),
                    model.describe(),
                    fmt_f64(fit.amplitude),
                    fmt_f64(fit.std_error),
                    fmt_f64(fit.residual_rms),
                    fit.n_points.to_string(),
                ],
                json!({
                    "protocol": protocol,
                    "quantity": quantity,
                    "model": model.describe(),
                    "amplitude": fit.amplitude,
                    "std_error": fit.std_error,
                    "residual_rms": fit.residual_rms,
                    "n_points": fit.n_points,
                }),
            );
        }
    }
    Ok(table)
}

// PathBuf lacks Display; round-trip through String for the resolver.
fn p2s(p: PathBuf) -> String {
    p.display().to_string()
}

fn s2p(s: String) -> PathBuf {
    PathBuf::from(s)
}

fn cmd_bounds(args: BoundsArgs, resolver: &mut Resolver) -> Result<Table, CliError> {
    let d_text = resolver.with_default(args.d, "d", "1".to_string())?;
    let gamma_text = resolver.with_default(args.gamma, "gamma", "1.0,0.5".to_string())?;
    let alpha_text = resolver.with_default(args.alpha, "alpha", "0:4:0.1".to_string())?;
    let dims = parse_usize_grid(&d_text)?;
    let gammas = parse_f64_grid(&gamma_text)?;
    let alphas = parse_f64_grid(&alpha_text)?;

    let mut table = Table::new(vec![
        "alpha",
        "d",
        "gamma",
        "beta_bound",
        "bound_regime",
        "beta_protocol",
        "protocol_regime",
        "saturated",
    ]);
    for &d in &dims {
        for &gamma in &gammas {
            let rows: Vec<SaturationRow> = saturation_table(d as u32, gamma, &alphas)?;
            for row in rows {
                table.push(
                    vec![
                        fmt_f64(row.alpha),
                        d.to_string(),
                        fmt_f64(row.gamma),
                        fmt_f64(row.beta_bound),
                        row.bound_regime.label().to_string(),
                        fmt_f64(row.beta_protocol),
                        row.protocol_regime.label().to_string(),
                        row.saturated.to_string(),
                    ],
                    json!({
                        "alpha": row.alpha,
                        "d": d,
                        "gamma": row.gamma,
                        "beta_bound": row.beta_bound,
                        "bound_regime": row.bound_regime.label(),
                        "beta_protocol": row.beta_protocol,
                        "protocol_regime": row.protocol_regime.label(),
                        "saturated": row.saturated,
                    }),
                );
            }
        }
    }
    Ok(table)
}

/// Outcome of one verification suite.
pub struct SuiteReport {
    pub suite: &'static str,
    pub trials: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// ζ-coefficient checks: non-negativity plus agreement of the two
/// algebraic routes `λ+λ' − (λ−λ')²/(λ+λ')` and `4λλ'/(λ+λ')`.
pub fn verify_zeta(trials: usize, seed: u64) -> SuiteReport {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let mut pairs: Vec<(f64, f64)> = vec![(1.0, 0.0), (0.5, 0.5), (1e-12, 1.0), (0.7, 0.3)];
    for _ in 0..trials {
        pairs.push((rng.random::<f64>(), rng.random::<f64>()));
    }
    let total = pairs.len();
    for (a, b) in pairs {
        match qfi::zeta_coefficient(a, b) {
            Ok(zeta) => {
                if zeta < 0.0 {
                    failures.push(format!("zeta({a}, {b}) = {zeta} < 0"));
                }
                let product_route = 4.0 * a * b / (a + b);
                if (zeta - product_route).abs() > 1e-12 * (1.0 + product_route) {
                    failures.push(format!(
                        "zeta({a}, {b}) = {zeta} disagrees with 4ab/(a+b) = {product_route}"
                    ));
                }
            }
            Err(e) => failures.push(format!("zeta({a}, {b}): {e}")),
        }
    }
    SuiteReport {
        suite: "zeta",
        trials: total,
        failures,
    }
}

/// Random-mixture checks: the correlation bound dominates the QFI, the
/// ζ identity closes the gap, and the closed-form QFI matches the dense
/// full-basis evaluator.
pub fn verify_fvc(trials: usize, seed: u64) -> SuiteReport {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for trial in 0..trials {
        let n = rng.random_range(2..=8);
        let k = rng.random_range(1..=4.min(n + 1));
        let mut run = || -> crate::error::Result<()> {
            let rho = MixedState::random_orthonormal(n + 1, k, &mut rng)?;
            let sz = build_collective(Axis::Z, n)?;
            let qfi_value = qfi::qfi_mixed(&rho, &sz)?;
            let bound = qfi::fvc_upper_bound(&rho, &sz)?;
            let scale = bound.abs().max(1.0);
            if bound - qfi_value < -1e-9 * scale {
                return Err(Error::InvariantViolation(format!(
                    "bound {bound} below QFI {qfi_value}"
                )));
            }
            let mut gap = 0.0;
            for (mu, wmu) in rho.weights().iter().enumerate() {
                for (nu, wnu) in rho.weights().iter().enumerate() {
                    if mu != nu && *wmu > qfi::WEIGHT_CUTOFF && *wnu > qfi::WEIGHT_CUTOFF {
                        let image = sz.apply_slice(&rho.components()[nu])?;
                        let overlap: num_complex::Complex64 = rho.components()[mu]
                            .iter()
                            .zip(&image)
                            .map(|(x, y)| x.conj() * y)
                            .sum();
                        gap += qfi::zeta_coefficient(*wmu, *wnu)? * overlap.norm_sqr();
                    }
                }
            }
            if ((qfi_value + 2.0 * gap) - bound).abs() > 1e-9 * scale {
                return Err(Error::InvariantViolation(format!(
                    "identity total {} vs bound {bound}",
                    qfi_value + 2.0 * gap
                )));
            }
            let dense = oracle::qfi_bruteforce_mixed(&rho, &sz.to_dense())?;
            if (dense - qfi_value).abs() > 1e-9 * scale {
                return Err(Error::InvariantViolation(format!(
                    "dense {dense} vs closed-form {qfi_value}"
                )));
            }
            Ok(())
        };
        if let Err(e) = run() {
            failures.push(format!("trial {trial} (n={n}, k={k}): {e}"));
        }
    }
    SuiteReport {
        suite: "fvc",
        trials,
        failures,
    }
}

/// Dicke-subspace dynamics against the full 2^N engine for all three
/// protocols at N = 4, 6, 8: state fidelity, sector weight, and the
/// angle-optimized QFI.
pub fn verify_sector() -> SuiteReport {
    let mut failures = Vec::new();
    let mut trials = 0;
    for kind in [ProtocolKind::Tat, ProtocolKind::Tnt, ProtocolKind::Oat] {
        for n in [4usize, 6, 8] {
            trials += 1;
            let run = || -> crate::error::Result<()> {
                let spec = ProtocolSpec::new(kind, n)?;
                let guess = spec.time_scale_guess();
                let grid: Vec<f64> = (0..10).map(|i| 2.0 * guess * i as f64 / 9.0).collect();
                let dicke_h = build_protocol_hamiltonian(&spec)?;
                let spectral = diagonalize(&dicke_h)?;
                let initial = spec.initial_state()?;
                let dicke_states = evolve_series(&spectral, &initial, &grid)?;
                let full_h = oracle::full_protocol_hamiltonian(&spec)?;
                let full_spectral = oracle::FullSpectral::new(&full_h)?;
                let full_initial = oracle::embed_dicke(&initial)?;
                for (&t, dicke_state) in grid.iter().zip(&dicke_states) {
                    let full_state = full_spectral.evolve(&full_initial, t)?;
                    let (projected, weight) = oracle::project_state(&full_state)?;
                    if (weight - 1.0).abs() > 1e-9 {
                        return Err(Error::InvariantViolation(format!(
                            "sector weight {weight} at t={t}"
                        )));
                    }
                    let overlap: num_complex::Complex64 = projected
                        .iter()
                        .zip(dicke_state.amplitudes())
                        .map(|(a, b)| a.conj() * b)
                        .sum();
                    if overlap.norm_sqr() < 1.0 - 1e-9 {
                        return Err(Error::InvariantViolation(format!(
                            "fidelity {} at t={t}",
                            overlap.norm_sqr()
                        )));
                    }
                    let f_dicke = optimal_qfi(&qfi::transverse_covariance(dicke_state)?).f_q;
                    let f_full =
                        optimal_qfi(&oracle::transverse_covariance_full(&full_state)?).f_q;
                    let gap = (f_full - f_dicke).abs() / (1.0 + f_dicke.abs());
                    if gap > 1e-8 {
                        return Err(Error::InvariantViolation(format!(
                            "QFI gap {gap:.3e} at t={t}"
                        )));
                    }
                }
                Ok(())
            };
            if let Err(e) = run() {
                failures.push(format!("{} n={n}: {e}", kind.label()));
            }
        }
    }
    SuiteReport {
        suite: "sector",
        trials,
        failures,
    }
}

/// Correlation-envelope trend check plus nearest-neighbor light-cone
/// suppression.
pub fn verify_envelope(trials: usize, seed: u64) -> SuiteReport {
    let mut failures = Vec::new();
    let template = oracle::LatticeSpec::uniform_twisting(4, oracle::LatticeDimension::One, 0.0);
    let t_grid: Vec<f64> = (1..=8).map(|i| 0.0125 * i as f64).collect();
    let envelope_trials = trials.clamp(1, 5);
    match oracle::correlation_envelope_check(&template, &t_grid, envelope_trials, seed) {
        Ok(report) => {
            if !report.pass {
                failures.push(format!(
                    "uniform-coupling ratio trend: relative slope {:.3} > {:.3}",
                    report.relative_slope, report.threshold
                ));
            }
        }
        Err(e) => failures.push(format!("envelope check: {e}")),
    }

    // distant pairs stay uncorrelated at early times under
    // nearest-neighbor coupling
    let light_cone = || -> crate::error::Result<()> {
        let n = 10usize;
        let spec = oracle::LatticeSpec::nearest_neighbor(n, oracle::LatticeDimension::One);
        let lattice = oracle::build_lattice(&spec)?;
        let spectral = oracle::FullSpectral::new(&lattice.to_dense())?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e3779b97f4a7c15);
        let initial = oracle::FullState::random_product(n, &mut rng)?;
        for &t in &[0.05, 0.1] {
            let state = spectral.evolve(&initial, t)?;
            let (corr, _) = oracle::connected_correlations(&state, &oracle::sz_site_ops(n))?;
            let distant = corr[(0, n - 1)].abs();
            if distant > 1e-6 {
                return Err(Error::InvariantViolation(format!(
                    "distant-pair correlation {distant:.3e} at t={t}"
                )));
            }
        }
        Ok(())
    };
    if let Err(e) = light_cone() {
        failures.push(format!("light cone: {e}"));
    }
    SuiteReport {
        suite: "envelope",
        trials: envelope_trials + 1,
        failures,
    }
}

fn cmd_verify(args: VerifyArgs, resolver: &mut Resolver, seed: u64) -> Result<Table, CliError> {
    let suite = resolver.with_default(args.suite, "suite", "all".to_string())?;
    let trials = resolver.with_default(args.trials, "trials", DEFAULT_TRIALS)?;
    let selected: Vec<&str> = match suite.as_str() {
        "all" => vec!["zeta", "fvc", "sector", "envelope"],
        "zeta" => vec!["zeta"],
        "fvc" => vec!["fvc"],
        "sector" => vec!["sector"],
        "envelope" => vec!["envelope"],
        other => {
            return Err(CliError::Usage(format!(
                "unknown suite '{other}' (expected all, zeta, fvc, sector, or envelope)"
            )))
        }
    };

    let mut table = Table::new(vec!["suite", "trials", "failures", "pass"]);
    let mut all_pass = true;
    for name in selected {
        let report = match name {
            "zeta" => verify_zeta(trials, seed),
            "fvc" => verify_fvc(trials, seed),
            "sector" => verify_sector(),
            _ => verify_envelope(trials, seed),
        };
        all_pass &= report.pass();
        eprintln!(
            "suite {}: {} ({} trials, {} failures)",
            report.suite,
            if report.pass() { "PASS" } else { "FAIL" },
            report.trials,
            report.failures.len()
        );
        for failure in &report.failures {
            eprintln!("  {failure}");
        }
        table.push(
            vec![
                report.suite.to_string(),
                report.trials.to_string(),
                report.failures.len().to_string(),
                report.pass().to_string(),
            ],
            json!({
                "suite": report.suite,
                "trials": report.trials,
                "failures": report.failures,
                "pass": report.pass(),
            }),
        );
    }
    if all_pass {
        Ok(table)
    } else {
        Err(CliError::VerifyFailed(table))
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    let mut resolver = Resolver::new(&cli.common)?;
    let seed = resolver.with_default(cli.common.seed, "seed", DEFAULT_SEED)?;
    let jobs = resolver.with_default(
        cli.common.jobs,
        "jobs",
        std::thread::available_parallelism()
            .map(|p| p.get())
            .unwrap_or(1),
    )?;
    let format = resolver.with_default(cli.common.format, "format", OutputFormat::Csv)?;
    // the sink path is not echoed into meta: outputs written to different
    // locations must still be byte-identical
    let out = cli
        .common
        .out
        .or_else(|| resolver.config.get("out").map(PathBuf::from));

    let (command, result) = match cli.command {
        Command::Simulate(args) => ("simulate", cmd_simulate(args, &mut resolver)),
        Command::Optimize(args) => ("optimize", cmd_optimize(args, &mut resolver)),
        Command::Sweep(args) => ("sweep", cmd_sweep(args, &mut resolver, jobs)),
        Command::Fit(args) => ("fit", cmd_fit(args, &mut resolver)),
        Command::Bounds(args) => ("bounds", cmd_bounds(args, &mut resolver)),
        Command::Verify(args) => ("verify", cmd_verify(args, &mut resolver, seed)),
    };
    match result {
        Ok(table) => {
            let text = render(&table, format, command, seed, &resolver.echo);
            emit(&text, &out)?;
            Ok(())
        }
        Err(CliError::VerifyFailed(table)) => {
            // persist the failing report, then exit nonzero
            let text = render(&table, format, command, seed, &resolver.echo);
            emit(&text, &out)?;
            Err(CliError::Failure("verification failed".into()))
        }
        Err(other) => Err(other),
    }
}

/// Entry point used by the binary; returns the process exit code.
pub fn run() -> i32 {
    run_from(std::env::args_os())
}

/// Entry point with explicit arguments, for tests.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(err) => {
            if let Some(msg) = err.message() {
                eprintln!("error: {msg}");
            }
            err.code()
        }
    }
}
