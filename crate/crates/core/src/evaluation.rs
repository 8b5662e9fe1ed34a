//! Per-timestep risk traces, threshold detection and table statistics.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, RiskError};
use crate::kinematics::{closest_encounter, distance_profile, KinematicState, RelativeState};
use crate::risk_measures::{risk_gauss, risk_ttc, risk_ttce, GaussParams, TtceParams};
use crate::scenarios::{ScenarioCase, ScenarioInstance, ScenarioKind};
use crate::survival::{risk_sa, SurvivalParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Measure {
    #[serde(rename = "TTC")]
    Ttc,
    #[serde(rename = "TTCE")]
    Ttce,
    #[serde(rename = "Gauss")]
    Gauss,
    #[serde(rename = "SA")]
    Sa,
}

impl Measure {
    pub const ALL: [Measure; 4] = [Measure::Ttce, Measure::Gauss, Measure::Sa, Measure::Ttc];

    pub fn as_str(&self) -> &'static str {
        match self {
            Measure::Ttc => "TTC",
            Measure::Ttce => "TTCE",
            Measure::Gauss => "Gauss",
            Measure::Sa => "SA",
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Measure {
    type Err = RiskError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ttc" => Ok(Measure::Ttc),
            "ttce" => Ok(Measure::Ttce),
            "gauss" => Ok(Measure::Gauss),
            "sa" => Ok(Measure::Sa),
            _ => Err(RiskError::InvalidParam { name: "measure", reason: format!("unknown measure {s:?}") }),
        }
    }
}

/// Parameters of every measure. TTC reuses the TTCE temporal constants.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct MeasureParams {
    pub ttce: TtceParams,
    pub gauss: GaussParams,
    pub sa: SurvivalParams,
}

impl MeasureParams {
    pub fn validate(&self) -> Result<()> {
        self.ttce.validate()?;
        self.gauss.validate()?;
        self.sa.validate()
    }
}

/// Settings shared by every trace computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EvalConfig {
    /// Prediction horizon s_H, s.
    pub horizon: f64,
    /// Sampling step of the predicted distance profile, s.
    pub profile_step: f64,
    /// Detection threshold.
    pub r_th: f64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self { horizon: 6.0, profile_step: 0.01, r_th: 0.7 }
    }
}

impl EvalConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.r_th > 0.0 && self.r_th < 1.0) {
            return Err(RiskError::InvalidParam { name: "r_th", reason: format!("must lie in (0, 1), got {}", self.r_th) });
        }
        if !(self.horizon > 0.0) || !(self.profile_step > 0.0) || self.profile_step > self.horizon {
            return Err(RiskError::InvalidStep { horizon: self.horizon, dt: self.profile_step });
        }
        Ok(())
    }
}

/// Risk per scene time for one measure on one scenario. `None` marks samples
/// where the measure does not apply.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiskTrace {
    pub instance_id: String,
    pub measure: Measure,
    pub kind: ScenarioKind,
    pub case: ScenarioCase,
    pub t_event: f64,
    pub times: Vec<f64>,
    pub values: Vec<Option<f64>>,
}

impl RiskTrace {
    pub fn is_applicable(&self) -> bool {
        self.values.iter().any(Option::is_some)
    }

    /// Largest risk value on the trace.
    pub fn r_max(&self) -> Option<f64> {
        self.values.iter().flatten().copied().reduce(f64::max)
    }

    pub fn value_at(&self, t: f64) -> Option<f64> {
        let i = self.times.iter().position(|&x| (x - t).abs() < 1e-9)?;
        self.values[i]
    }
}

/// TTC is only defined for collinear approach: `|sin∠(Δx, Δv)| < 0.05` and closing.
pub fn ttc_applicable(rel: &RelativeState) -> bool {
    let (dx, dv) = (rel.delta_x, rel.delta_v);
    let denom = dx.norm() * dv.norm();
    denom > 0.0 && dx.dot(dv) < 0.0 && dx.cross(dv).abs() / denom < 0.05
}

/// Risk between two instantaneous states under constant-velocity prediction.
/// `None` when the measure does not apply (TTC off a closing lane).
pub fn risk_at(
    a: &KinematicState,
    b: &KinematicState,
    measure: Measure,
    params: &MeasureParams,
    cfg: &EvalConfig,
) -> Result<Option<f64>> {
    let rel = a.relative_to(b);
    Ok(match measure {
        Measure::Ttc => ttc_applicable(&rel).then(|| risk_ttc(closest_encounter(&rel).s_e, &params.ttce)),
        Measure::Ttce => Some(risk_ttce(&closest_encounter(&rel), &params.ttce)),
        Measure::Gauss => {
            let profile = distance_profile(a, b, cfg.horizon, cfg.profile_step)?;
            Some(risk_gauss(&profile, &params.gauss)?.risk)
        }
        Measure::Sa => {
            let sa = SurvivalParams { horizon: cfg.horizon, ..params.sa };
            let profile = distance_profile(a, b, cfg.horizon, sa.dt_int)?;
            Some(risk_sa(&profile, &sa)?)
        }
    })
}

/// Evaluates `measure` at every scene time up to the event, predicting the
/// distance with constant velocities from the current states.
pub fn compute_trace(
    instance: &ScenarioInstance,
    measure: Measure,
    params: &MeasureParams,
    cfg: &EvalConfig,
) -> Result<RiskTrace> {
    cfg.validate()?;
    if cfg.horizon <= instance.spec.start_offset {
        return Err(RiskError::HorizonTooShort { horizon: cfg.horizon, start_offset: instance.spec.start_offset });
    }
    let sa = SurvivalParams { horizon: cfg.horizon, ..params.sa };
    match measure {
        Measure::Ttc | Measure::Ttce => params.ttce.validate()?,
        Measure::Gauss => params.gauss.validate()?,
        Measure::Sa => sa.validate()?,
    }

    let longitudinal = instance.kind() == ScenarioKind::Longitudinal;
    let mut times = Vec::new();
    let mut values = Vec::new();
    for (a, b) in instance.traj_a.samples().iter().zip(instance.traj_b.samples()) {
        if a.time > instance.t_event + 1e-9 {
            break;
        }
        // TTC is a one-dimensional lane measure; crossing paths never qualify
        let value = if measure == Measure::Ttc && !longitudinal {
            None
        } else {
            risk_at(a, b, measure, params, cfg)?
        };
        times.push(a.time);
        values.push(value);
    }
    Ok(RiskTrace {
        instance_id: instance.id().to_string(),
        measure,
        kind: instance.kind(),
        case: instance.case(),
        t_event: instance.t_event,
        times,
        values,
    })
}

/// Traces for every instance × measure, in input order. Inapplicable TTC
/// traces are dropped.
pub fn compute_all_traces(
    instances: &[ScenarioInstance],
    measures: &[Measure],
    params: &MeasureParams,
    cfg: &EvalConfig,
) -> Result<Vec<RiskTrace>> {
    let jobs: Vec<(&ScenarioInstance, Measure)> =
        instances.iter().flat_map(|i| measures.iter().map(move |&m| (i, m))).collect();
    let traces = jobs
        .par_iter()
        .map(|(inst, m)| compute_trace(inst, *m, params, cfg))
        .collect::<Result<Vec<_>>>()?;
    Ok(traces.into_iter().filter(RiskTrace::is_applicable).collect())
}

/// First scene time (relative to the event) at which the trace reaches `r_th`.
pub fn detect(trace: &RiskTrace, r_th: f64) -> Option<f64> {
    trace
        .times
        .iter()
        .zip(&trace.values)
        .find(|(_, v)| v.is_some_and(|v| v >= r_th))
        .map(|(t, _)| t - trace.t_event)
}

/// One row of the statistics table. Crash rows carry detection times,
/// near/non-crash rows carry peak risks and false positives.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionStats {
    pub measure: Measure,
    pub kind: ScenarioKind,
    pub case: ScenarioCase,
    pub t_d_mean: Option<f64>,
    /// Population standard deviation of detection times.
    pub sigma_t: Option<f64>,
    /// Crash traces that never reached the threshold.
    pub misses: Option<usize>,
    pub r_max_mean: Option<f64>,
    /// Population standard deviation of per-trace peak risk.
    pub sigma_r: Option<f64>,
    pub fp: Option<usize>,
    pub n: usize,
}

fn mean_std(xs: &[f64]) -> Option<(f64, f64)> {
    if xs.is_empty() {
        return None;
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    Some((mean, var.sqrt()))
}

/// Statistics of one group of traces sharing measure, kind and case.
pub fn group_stats(traces: &[&RiskTrace], r_th: f64) -> Result<DetectionStats> {
    let first = traces.first().ok_or_else(|| RiskError::EmptyGroup("no traces".into()))?;
    let (measure, kind, case) = (first.measure, first.kind, first.case);
    if let Some(t) = traces.iter().find(|t| (t.measure, t.kind, t.case) != (measure, kind, case)) {
        return Err(RiskError::EmptyGroup(format!("mixed group: {} in {measure}/{kind:?}/{case:?}", t.instance_id)));
    }
    let mut row = DetectionStats {
        measure,
        kind,
        case,
        t_d_mean: None,
        sigma_t: None,
        misses: None,
        r_max_mean: None,
        sigma_r: None,
        fp: None,
        n: traces.len(),
    };
    if case == ScenarioCase::Crash {
        let detections: Vec<f64> = traces.iter().filter_map(|t| detect(t, r_th)).collect();
        row.misses = Some(traces.len() - detections.len());
        if let Some((m, s)) = mean_std(&detections) {
            row.t_d_mean = Some(m);
            row.sigma_t = Some(s);
        }
    } else {
        let peaks: Vec<f64> = traces.iter().filter_map(|t| t.r_max()).collect();
        row.fp = Some(peaks.iter().filter(|&&r| r > r_th).count());
        if let Some((m, s)) = mean_std(&peaks) {
            row.r_max_mean = Some(m);
            row.sigma_r = Some(s);
        }
    }
    Ok(row)
}

/// Groups traces by measure × kind × case and computes one row per group, in
/// a fixed order. Every measure present gets all six kind × case rows; groups
/// without traces (TTC off the longitudinal lane) come out as empty rows.
pub fn aggregate(traces: &[RiskTrace], r_th: f64) -> Result<Vec<DetectionStats>> {
    if traces.is_empty() {
        return Err(RiskError::EmptyGroup("no traces to aggregate".into()));
    }
    let mut groups: BTreeMap<(Measure, ScenarioKind, ScenarioCase), Vec<&RiskTrace>> = BTreeMap::new();
    for t in traces {
        groups.entry((t.measure, t.kind, t.case)).or_default().push(t);
    }
    let measures: std::collections::BTreeSet<Measure> = traces.iter().map(|t| t.measure).collect();
    let mut rows = Vec::new();
    for measure in measures {
        for kind in ScenarioKind::ALL {
            for case in ScenarioCase::ALL {
                rows.push(match groups.get(&(measure, kind, case)) {
                    Some(g) => group_stats(g, r_th)?,
                    None => DetectionStats {
                        measure,
                        kind,
                        case,
                        t_d_mean: None,
                        sigma_t: None,
                        misses: None,
                        r_max_mean: None,
                        sigma_r: None,
                        fp: None,
                        n: 0,
                    },
                });
            }
        }
    }
    Ok(rows)
}

/// Summary figures used to compare measures across the whole set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureSummary {
    pub mean_abs_t_d: Option<f64>,
    pub misses: usize,
    pub crashes: usize,
    pub fp: usize,
    pub non_crash_traces: usize,
}

pub fn summarize(traces: &[RiskTrace], measure: Measure, r_th: f64) -> MeasureSummary {
    let mine: Vec<&RiskTrace> = traces.iter().filter(|t| t.measure == measure).collect();
    let crash: Vec<&RiskTrace> = mine.iter().copied().filter(|t| t.case == ScenarioCase::Crash).collect();
    let dets: Vec<f64> = crash.iter().filter_map(|t| detect(t, r_th)).map(f64::abs).collect();
    let others: Vec<&RiskTrace> = mine.iter().copied().filter(|t| t.case != ScenarioCase::Crash).collect();
    MeasureSummary {
        mean_abs_t_d: mean_std(&dets).map(|(m, _)| m),
        misses: crash.len() - dets.len(),
        crashes: crash.len(),
        fp: others.iter().filter(|t| t.r_max().is_some_and(|r| r > r_th)).count(),
        non_crash_traces: others.len(),
    }
}
