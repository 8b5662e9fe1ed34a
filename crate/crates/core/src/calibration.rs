//! Grid search for measure constants.
//!
//! The instances of every kind × case group are split by position into a fit
//! half (even) and a held-out half (odd). A candidate is admissible when it
//! detects every crash, keeps every near-crash peak above a floor, and meets
//! the crash-course and receding limits. Among admissible candidates, the
//! held-out false positives are capped at their minimum plus a slack, and the
//! fit-half mean detection time decides.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::evaluation::{compute_trace, detect, risk_at, EvalConfig, Measure, MeasureParams};
use crate::kinematics::{KinematicState, Vec2};
use crate::risk_measures::{GaussParams, TtceParams};
use crate::scenarios::{ScenarioCase, ScenarioInstance};
use crate::survival::SurvivalParams;

/// Reference inputs for the limit behavior of a measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LimitConfig {
    /// Closing speeds (m/s) of the crash-course and receding probes.
    pub speeds: Vec<f64>,
    /// Time before contact at which the crash-course probe is evaluated.
    pub lead_time: f64,
    pub crash_min: f64,
    pub receding_distance: f64,
    pub receding_max: f64,
}

impl Default for LimitConfig {
    fn default() -> Self {
        Self {
            speeds: vec![1.0, 2.0, 5.0, 10.0, 15.0, 20.0, 30.0],
            lead_time: 0.02,
            crash_min: 0.99,
            receding_distance: 100.0,
            receding_max: 0.05,
        }
    }
}

/// Risk one `lead_time` before contact on a head-on crash course.
pub fn crash_course_risk(
    measure: Measure,
    params: &MeasureParams,
    cfg: &EvalConfig,
    speed: f64,
    lead_time: f64,
) -> Result<Option<f64>> {
    let a = KinematicState::new(0.0, Vec2::new(-speed * lead_time, 0.0), Vec2::new(speed, 0.0))?;
    let b = KinematicState::new(0.0, Vec2::ZERO, Vec2::ZERO)?;
    risk_at(&a, &b, measure, params, cfg)
}

/// Risk of two participants `distance` apart and separating at `speed`.
pub fn receding_risk(
    measure: Measure,
    params: &MeasureParams,
    cfg: &EvalConfig,
    speed: f64,
    distance: f64,
) -> Result<f64> {
    let a = KinematicState::new(0.0, Vec2::new(-distance, 0.0), Vec2::new(-speed, 0.0))?;
    let b = KinematicState::new(0.0, Vec2::ZERO, Vec2::ZERO)?;
    // TTC has no value for separating participants, which reads as zero risk
    Ok(risk_at(&a, &b, measure, params, cfg)?.unwrap_or(0.0))
}

/// Smallest crash-course risk and largest receding risk over the probe speeds.
pub fn limit_extremes(measure: Measure, params: &MeasureParams, cfg: &EvalConfig, limits: &LimitConfig) -> Result<(f64, f64)> {
    let mut crash_min = f64::INFINITY;
    let mut receding_max = 0.0_f64;
    for &v in &limits.speeds {
        let r = crash_course_risk(measure, params, cfg, v, limits.lead_time)?.unwrap_or(0.0);
        crash_min = crash_min.min(r);
        receding_max = receding_max.max(receding_risk(measure, params, cfg, v, limits.receding_distance)?);
    }
    Ok((crash_min, receding_max))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CalibrationConfig {
    pub eval: EvalConfig,
    /// Every near-crash peak must exceed this.
    pub near_crash_min: f64,
    /// Held-out false positives allowed above the admissible minimum.
    pub fp_slack: usize,
    pub limits: LimitConfig,
}

impl Default for CalibrationConfig {
    fn default() -> Self {
        Self { eval: EvalConfig::default(), near_crash_min: 0.5, fp_slack: 0, limits: LimitConfig::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateScore {
    pub params: MeasureParams,
    /// Mean |t_d| over detected fit-half crashes.
    pub fit_mean_abs_t_d: Option<f64>,
    pub misses: usize,
    pub near_crash_min_r_max: f64,
    pub fit_fp: usize,
    pub heldout_fp: usize,
    pub limit_crash_min: f64,
    pub limit_receding_max: f64,
}

impl CandidateScore {
    pub fn total_fp(&self) -> usize {
        self.fit_fp + self.heldout_fp
    }

    /// Hard constraints that do not depend on the other candidates.
    pub fn admissible(&self, cfg: &CalibrationConfig) -> bool {
        self.misses == 0
            && self.fit_mean_abs_t_d.is_some()
            && self.near_crash_min_r_max > cfg.near_crash_min
            && self.limit_crash_min >= cfg.limits.crash_min
            && self.limit_receding_max <= cfg.limits.receding_max
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationReport {
    pub measure: Measure,
    pub selected: Option<CandidateScore>,
    pub evaluated: usize,
    pub admissible: usize,
    /// Held-out false-positive cap applied to admissible candidates.
    pub fp_cap: Option<usize>,
    /// Candidates in grid order.
    pub candidates: Vec<CandidateScore>,
}

impl CalibrationReport {
    /// Human-readable reason when nothing was selected.
    pub fn infeasibility(&self, cfg: &CalibrationConfig) -> Option<String> {
        if self.selected.is_some() {
            return None;
        }
        let c = &self.candidates;
        let count = |f: &dyn Fn(&CandidateScore) -> bool| c.iter().filter(|s| f(s)).count();
        let best_near = c.iter().map(|s| s.near_crash_min_r_max).fold(f64::NEG_INFINITY, f64::max);
        Some(format!(
            "no admissible {} candidate among {}: {} detect every crash, {} keep near-crash R_max > {} (best {:.3}), {} meet the crash-course limit, {} meet the receding limit",
            self.measure,
            c.len(),
            count(&|s| s.misses == 0),
            count(&|s| s.near_crash_min_r_max > cfg.near_crash_min),
            cfg.near_crash_min,
            best_near,
            count(&|s| s.limit_crash_min >= cfg.limits.crash_min),
            count(&|s| s.limit_receding_max <= cfg.limits.receding_max),
        ))
    }
}

/// Temporal decay rates (1/s) relative to ε searched for TTCE and Gauss.
const TEMPORAL_RATES: [f64; 13] = [0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5, 0.6, 0.8, 1.0];

fn log_grid(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    let n = ((hi / lo).log10() * per_decade as f64).round() as usize;
    (0..=n).map(|i| lo * 10f64.powf(i as f64 / per_decade as f64)).map(|x| (x * 1e6).round() / 1e6).collect()
}

/// Default search grid for a measure, varying only that measure's constants
/// of `base`. TTC has no grid of its own since it reuses the TTCE constants.
pub fn default_grid(measure: Measure, base: &MeasureParams) -> Result<Vec<MeasureParams>> {
    let mut grid = Vec::new();
    match measure {
        Measure::Ttce => {
            for d_c in TEMPORAL_RATES {
                for diffusion in log_grid(1.0, 1000.0, 6) {
                    let ttce = TtceParams { d_c, diffusion, ..base.ttce };
                    grid.push(MeasureParams { ttce, ..*base });
                }
            }
        }
        Measure::Gauss => {
            // the temporal factor only sees D_c/ε, the spatial one only D_c
            for ratio in TEMPORAL_RATES {
                for d_c in log_grid(1.0, 1000.0, 6) {
                    grid.push(MeasureParams { gauss: GaussParams::with_joint(d_c / ratio, d_c), ..*base });
                }
            }
        }
        Measure::Sa => {
            for tau_coll0_inv in [20.0, 50.0, 100.0] {
                for tau0_inv in log_grid(0.02, 1.0, 5) {
                    for beta_coll in [0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5, 0.55, 0.6, 0.65, 0.7] {
                        let sa = SurvivalParams {
                            tau0_inv,
                            tau_coll0_inv,
                            beta_coll,
                            dt_int: base.sa.dt_int.min(1.0 / tau_coll0_inv),
                            ..base.sa
                        };
                        grid.push(MeasureParams { sa, ..*base });
                    }
                }
            }
        }
        Measure::Ttc => return Err(invalid("measure", "TTC reuses the TTCE constants; calibrate TTCE")),
    }
    Ok(grid)
}

/// Positions within each kind × case group; even positions form the fit half.
fn fit_mask(instances: &[ScenarioInstance]) -> Vec<bool> {
    let mut seen: HashMap<_, usize> = HashMap::new();
    instances
        .iter()
        .map(|inst| {
            let k = seen.entry((inst.kind(), inst.case())).or_insert(0);
            *k += 1;
            (*k - 1) % 2 == 0
        })
        .collect()
}

/// Scores one candidate on the instance set.
pub fn score_candidate(
    instances: &[ScenarioInstance],
    measure: Measure,
    params: &MeasureParams,
    cfg: &CalibrationConfig,
) -> Result<CandidateScore> {
    let fit = fit_mask(instances);
    let r_th = cfg.eval.r_th;
    let mut t_d = Vec::new();
    let mut score = CandidateScore {
        params: *params,
        fit_mean_abs_t_d: None,
        misses: 0,
        near_crash_min_r_max: f64::INFINITY,
        fit_fp: 0,
        heldout_fp: 0,
        limit_crash_min: 0.0,
        limit_receding_max: 0.0,
    };
    for (inst, &in_fit) in instances.iter().zip(&fit) {
        let trace = compute_trace(inst, measure, params, &cfg.eval)?;
        if !trace.is_applicable() {
            continue;
        }
        match inst.case() {
            ScenarioCase::Crash => match detect(&trace, r_th) {
                Some(t) if in_fit => t_d.push(t.abs()),
                Some(_) => {}
                None => score.misses += 1,
            },
            case => {
                let r_max = trace.r_max().unwrap_or(0.0);
                if case == ScenarioCase::NearCrash {
                    score.near_crash_min_r_max = score.near_crash_min_r_max.min(r_max);
                }
                if r_max > r_th {
                    if in_fit {
                        score.fit_fp += 1;
                    } else {
                        score.heldout_fp += 1;
                    }
                }
            }
        }
    }
    if !t_d.is_empty() {
        score.fit_mean_abs_t_d = Some(t_d.iter().sum::<f64>() / t_d.len() as f64);
    }
    let (crash_min, receding_max) = limit_extremes(measure, params, &cfg.eval, &cfg.limits)?;
    score.limit_crash_min = crash_min;
    score.limit_receding_max = receding_max;
    Ok(score)
}

/// Evaluates `grid` and selects the best admissible candidate. The result is
/// independent of thread count: ties go to the earlier grid entry.
pub fn calibrate(
    instances: &[ScenarioInstance],
    measure: Measure,
    grid: &[MeasureParams],
    cfg: &CalibrationConfig,
) -> Result<CalibrationReport> {
    cfg.eval.validate()?;
    if instances.is_empty() {
        return Err(invalid("instances", "calibration needs at least one scenario"));
    }
    if grid.is_empty() {
        return Err(invalid("grid", "empty candidate grid"));
    }
    let candidates = grid
        .par_iter()
        .map(|p| score_candidate(instances, measure, p, cfg))
        .collect::<Result<Vec<_>>>()?;

    let admissible: Vec<&CandidateScore> = candidates.iter().filter(|c| c.admissible(cfg)).collect();
    let fp_cap = admissible.iter().map(|c| c.heldout_fp).min().map(|m| m + cfg.fp_slack);
    let mut selected: Option<&CandidateScore> = None;
    for c in admissible.iter().copied().filter(|c| Some(c.heldout_fp) <= fp_cap) {
        let better = match selected {
            None => true,
            Some(s) => {
                let (a, b) = (c.fit_mean_abs_t_d.unwrap_or(0.0), s.fit_mean_abs_t_d.unwrap_or(0.0));
                a > b || (a == b && c.total_fp() < s.total_fp())
            }
        };
        if better {
            selected = Some(c);
        }
    }
    Ok(CalibrationReport {
        measure,
        selected: selected.cloned(),
        evaluated: candidates.len(),
        admissible: admissible.len(),
        fp_cap,
        candidates,
    })
}

/// Calibrates TTCE, Gauss and SA in turn on their default grids and returns
/// the combined parameters plus one report per measure. Measures without an
/// admissible candidate keep their `base` constants.
pub fn calibrate_all(
    instances: &[ScenarioInstance],
    base: &MeasureParams,
    cfg: &CalibrationConfig,
) -> Result<(MeasureParams, Vec<CalibrationReport>)> {
    let mut params = *base;
    let mut reports = Vec::new();
    for measure in [Measure::Ttce, Measure::Gauss, Measure::Sa] {
        let report = calibrate(instances, measure, &default_grid(measure, base)?, cfg)?;
        if let Some(best) = &report.selected {
            match measure {
                Measure::Ttce => params.ttce = best.params.ttce,
                Measure::Gauss => params.gauss = best.params.gauss,
                Measure::Sa => params.sa = best.params.sa,
                Measure::Ttc => {}
            }
        }
        reports.push(report);
    }
    Ok((params, reports))
}

/// Constants selected by [`calibrate_all`] with the default configuration on
/// `default_scenario_set(42)`. TTC shares the TTCE constants.
pub fn calibrated_params() -> MeasureParams {
    MeasureParams {
        ttce: TtceParams { epsilon: 1.0, alpha: 1.0, d_c: 0.25, diffusion: 46.415888 },
        gauss: GaussParams::with_joint(68.129207 / 0.6, 68.129207),
        sa: SurvivalParams { tau0_inv: 0.2, tau_coll0_inv: 100.0, beta_coll: 0.55, dt_int: 0.01, horizon: 6.0 },
    }
}
