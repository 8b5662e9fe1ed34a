//! Command-line front end. All file I/O of the tool happens here and in
//! [`crate::io`].

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::calibration::{calibrate, calibrated_params, default_grid, CalibrationConfig};
use crate::evaluation::{aggregate, compute_all_traces, summarize, EvalConfig, Measure, MeasureParams};
use crate::io;
use crate::oracle::{check_gaussian, check_geometry, check_survival, OracleCheck, OracleConfig};
use crate::scenarios::{default_scenario_set, generate, ScenarioInstance, ScenarioSpec};

pub const THREADS_ENV: &str = "RISKHORIZON_THREADS";

#[derive(Debug, Parser)]
#[command(name = "riskhorizon", version, about = "Collision risk measures on synthetic traffic scenarios")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate scenario trajectories and an instance manifest.
    Gen(GenArgs),
    /// Compute risk traces for every instance of a manifest.
    Run(RunArgs),
    /// Aggregate traces into the statistics table.
    Stats(StatsArgs),
    /// Grid-search measure constants on a scenario set.
    Calibrate(CalibrateArgs),
    /// Check closed forms against brute-force and Monte Carlo oracles.
    Oracle(OracleArgs),
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// Scenario config (JSON list or {"scenarios": [...]}); the default set when absent.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
    /// Seed of the default scenario set.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Instance manifest, or the directory holding it.
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory for trace CSVs.
    #[arg(long)]
    pub out: PathBuf,
    /// Comma-separated measures.
    #[arg(long, value_delimiter = ',', default_value = "ttce,gauss,sa,ttc")]
    pub measures: Vec<Measure>,
    /// Parameter file; the calibrated constants when absent.
    #[arg(long)]
    pub params: Option<PathBuf>,
    /// Prediction horizon in seconds.
    #[arg(long, default_value_t = 6.0)]
    pub horizon: f64,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    /// Trace index (traces.json), or the directory holding it.
    #[arg(long)]
    pub config: PathBuf,
    /// Output CSV.
    #[arg(long)]
    pub out: PathBuf,
    /// Detection threshold.
    #[arg(long, default_value_t = 0.7)]
    pub rth: f64,
}

#[derive(Debug, Args)]
pub struct CalibrateArgs {
    /// Instance manifest (or its directory); the default set when absent.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output parameter file.
    #[arg(long)]
    pub out: PathBuf,
    /// Comma-separated measures to tune; TTC follows TTCE.
    #[arg(long, value_delimiter = ',', default_value = "ttce,gauss,sa")]
    pub measures: Vec<Measure>,
    /// Detection threshold.
    #[arg(long, default_value_t = 0.7)]
    pub rth: f64,
    /// Prediction horizon in seconds.
    #[arg(long, default_value_t = 6.0)]
    pub horizon: f64,
    /// Seed of the default scenario set.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Lower bound every near-crash peak must exceed.
    #[arg(long, default_value_t = 0.5)]
    pub near_min: f64,
    /// Held-out false positives allowed above the admissible minimum.
    #[arg(long, default_value_t = 0)]
    pub fp_slack: usize,
    /// Also write the full candidate table as JSON.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleName {
    Geometry,
    Gaussian,
    Survival,
    All,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(value_enum, default_value = "all")]
    pub name: OracleName,
    /// Seed of the random cases and the Monte Carlo streams.
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Monte Carlo samples per estimate.
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,
    /// Random cases (geometry) or pairs (gaussian).
    #[arg(long)]
    pub cases: Option<usize>,
    /// Optional JSON report.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Caps the global thread pool from `RISKHORIZON_THREADS` when set.
pub fn init_threads() -> Result<()> {
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v.trim().parse().with_context(|| format!("{THREADS_ENV}={v:?} is not a count"))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .with_context(|| format!("configuring {n} threads"))?;
    }
    Ok(())
}

fn resolve(path: &Path, default_name: &str) -> PathBuf {
    if path.is_dir() {
        path.join(default_name)
    } else {
        path.to_path_buf()
    }
}

fn default_instances(seed: u64) -> Result<Vec<ScenarioInstance>> {
    Ok(default_scenario_set(seed).iter().map(generate).collect::<crate::Result<Vec<_>>>()?)
}

/// Generates the instances of `specs`, checking that ids are present and unique.
pub fn generate_all(specs: &[ScenarioSpec]) -> Result<Vec<ScenarioInstance>> {
    if specs.is_empty() {
        bail!("the scenario list is empty");
    }
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::with_capacity(specs.len());
    for (i, spec) in specs.iter().enumerate() {
        let mut spec = spec.clone();
        if spec.id.is_empty() {
            spec.id = format!("scenario{i}");
        }
        if !seen.insert(spec.id.clone()) {
            bail!("duplicate scenario id {:?}", spec.id);
        }
        out.push(generate(&spec).with_context(|| format!("scenario {:?}", spec.id))?);
    }
    Ok(out)
}

pub fn cmd_gen(args: &GenArgs) -> Result<PathBuf> {
    let specs = match &args.config {
        Some(path) => io::read_scenario_config(path)?,
        None => default_scenario_set(args.seed),
    };
    let instances = generate_all(&specs)?;
    let manifest = io::write_instances(&args.out, &instances)?;
    println!("wrote {} instances ({} trajectories) to {}", instances.len(), 2 * instances.len(), args.out.display());
    Ok(manifest)
}

fn load_params(path: Option<&Path>) -> Result<MeasureParams> {
    let params = match path {
        Some(p) => io::read_params(p)?,
        None => calibrated_params(),
    };
    params.validate()?;
    Ok(params)
}

pub fn cmd_run(args: &RunArgs) -> Result<PathBuf> {
    let instances = io::read_instances(&resolve(&args.config, io::MANIFEST_NAME))?;
    if instances.is_empty() {
        bail!("the manifest lists no instances");
    }
    let params = load_params(args.params.as_deref())?;
    let cfg = EvalConfig { horizon: args.horizon, ..EvalConfig::default() };
    let mut measures: Vec<Measure> = Vec::new();
    for &m in &args.measures {
        if !measures.contains(&m) {
            measures.push(m);
        }
    }
    let traces = compute_all_traces(&instances, &measures, &params, &cfg)?;
    let index = io::write_traces(&args.out, &traces)?;
    println!("wrote {} traces to {}", traces.len(), args.out.display());
    Ok(index)
}

pub fn cmd_stats(args: &StatsArgs) -> Result<()> {
    if !(args.rth > 0.0 && args.rth < 1.0) {
        bail!("--rth must lie in (0, 1), got {}", args.rth);
    }
    let traces = io::read_traces(&resolve(&args.config, io::TRACE_INDEX_NAME))?;
    let rows = aggregate(&traces, args.rth)?;
    io::write_stats(&args.out, &rows)?;
    print!("{}", String::from_utf8(io::stats_csv(&rows)?)?);
    let mut measures: Vec<Measure> = traces.iter().map(|t| t.measure).collect();
    measures.sort();
    measures.dedup();
    for m in measures {
        let s = summarize(&traces, m, args.rth);
        let t_d = s.mean_abs_t_d.map(|t| format!("{t:.3} s")).unwrap_or_else(|| "-".into());
        println!(
            "{m}: mean |t_d| {t_d}, missed {}/{}, FP {}/{}",
            s.misses, s.crashes, s.fp, s.non_crash_traces
        );
    }
    Ok(())
}

/// Runs the requested calibrations. Returns whether every measure found an
/// admissible candidate; the parameter file holds the selected constants
/// (unchanged defaults for infeasible measures).
pub fn cmd_calibrate(args: &CalibrateArgs) -> Result<bool> {
    let instances = match &args.config {
        Some(p) => io::read_instances(&resolve(p, io::MANIFEST_NAME))?,
        None => default_instances(args.seed)?,
    };
    let cfg = CalibrationConfig {
        eval: EvalConfig { horizon: args.horizon, r_th: args.rth, ..EvalConfig::default() },
        near_crash_min: args.near_min,
        fp_slack: args.fp_slack,
        ..CalibrationConfig::default()
    };
    let base = MeasureParams::default();
    let mut params = base;
    let mut feasible = true;
    let mut reports = Vec::new();
    for &m in &args.measures {
        let report = calibrate(&instances, m, &default_grid(m, &base)?, &cfg)?;
        match &report.selected {
            Some(best) => {
                match m {
                    Measure::Ttce | Measure::Ttc => params.ttce = best.params.ttce,
                    Measure::Gauss => params.gauss = best.params.gauss,
                    Measure::Sa => params.sa = best.params.sa,
                }
                println!(
                    "{m}: {} of {} candidates admissible, held-out FP cap {}, selected mean |t_d| {:.3} s, FP {}+{}, near-crash min R_max {:.3}",
                    report.admissible,
                    report.evaluated,
                    report.fp_cap.unwrap_or(0),
                    best.fit_mean_abs_t_d.unwrap_or(0.0),
                    best.fit_fp,
                    best.heldout_fp,
                    best.near_crash_min_r_max,
                );
            }
            None => {
                feasible = false;
                println!("{m}: INFEASIBLE: {}", report.infeasibility(&cfg).unwrap_or_default());
            }
        }
        reports.push(report);
    }
    io::write_params(&args.out, &params)?;
    if let Some(path) = &args.report {
        io::write_params(path, &reports)?;
    }
    Ok(feasible)
}

pub fn cmd_oracle(args: &OracleArgs) -> Result<Vec<OracleCheck>> {
    let cfg = OracleConfig { mc_samples: args.samples, rng_seed: args.seed, ..OracleConfig::default() };
    let want = |n: OracleName| args.name == n || args.name == OracleName::All;
    let mut checks = Vec::new();
    if want(OracleName::Geometry) {
        checks.push(check_geometry(args.cases.unwrap_or(1000), args.seed, &cfg)?);
    }
    if want(OracleName::Gaussian) {
        checks.push(check_gaussian(args.cases.unwrap_or(50), args.seed, &cfg)?);
    }
    if want(OracleName::Survival) {
        checks.push(check_survival(&cfg)?);
    }
    for c in &checks {
        println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    if let Some(path) = &args.out {
        io::write_params(path, &checks)?;
    }
    Ok(checks)
}

/// Runs one parsed command. `Ok(false)` means the command completed but a
/// check failed (oracle mismatch or infeasible calibration).
pub fn run(cli: &Cli) -> Result<bool> {
    init_threads()?;
    match &cli.command {
        Command::Gen(a) => cmd_gen(a).map(|_| true),
        Command::Run(a) => cmd_run(a).map(|_| true),
        Command::Stats(a) => cmd_stats(a).map(|_| true),
        Command::Calibrate(a) => cmd_calibrate(a),
        Command::Oracle(a) => Ok(cmd_oracle(a)?.iter().all(|c| c.passed)),
    }
}
