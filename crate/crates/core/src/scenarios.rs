//! Synthetic two-participant scenarios: longitudinal car following and
//! perpendicular intersection crossings, each as crash, near-crash and
//! non-crash variants.
//!
//! Scene time is chosen so that the moment of maximal criticality is `t = 0`;
//! trajectories run from `-start_offset` to `0`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, RiskError};
use crate::kinematics::{KinematicState, Trajectory, Vec2};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    Longitudinal,
    Intersection,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 2] = [ScenarioKind::Longitudinal, ScenarioKind::Intersection];

    pub fn as_str(&self) -> &'static str {
        match self {
            ScenarioKind::Longitudinal => "longitudinal",
            ScenarioKind::Intersection => "intersection",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioCase {
    Crash,
    NearCrash,
    NonCrash,
}

impl ScenarioCase {
    pub const ALL: [ScenarioCase; 3] = [ScenarioCase::Crash, ScenarioCase::NearCrash, ScenarioCase::NonCrash];

    pub fn as_str(&self) -> &'static str {
        match self {
            ScenarioCase::Crash => "crash",
            ScenarioCase::NearCrash => "near_crash",
            ScenarioCase::NonCrash => "non_crash",
        }
    }
}

/// Constant acceleration applied from scene time `from` until the next phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AccelPhase {
    pub from: f64,
    pub accel: f64,
}

pub const DEFAULT_NEAR_CRASH_OFFSET: f64 = 7.0;
pub const DEFAULT_NON_CRASH_OFFSET: f64 = 12.0;

/// Declarative description of one scenario.
///
/// Participant `a` is the follower (longitudinal) or the participant with
/// right of way (intersection); `b` is the leader or the yielding participant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    #[serde(default)]
    pub id: String,
    pub kind: ScenarioKind,
    pub case: ScenarioCase,
    #[serde(default = "default_start_offset")]
    pub start_offset: f64,
    /// Initial speeds of `a` and `b`, m/s.
    pub speeds: [f64; 2],
    /// Per-participant piecewise-constant accelerations, m/s².
    #[serde(default)]
    pub accel: [Vec<AccelPhase>; 2],
    /// Lateral path shift for longitudinal near/non-crash cases, m.
    #[serde(default)]
    pub lateral_offset: Option<f64>,
    /// Arrival-time gap at the conflict point for intersection non-crash cases, s.
    #[serde(default = "default_pass_gap")]
    pub pass_gap: f64,
    /// Scene time at which the yielding participant starts braking.
    #[serde(default = "default_yield_trigger")]
    pub yield_trigger: f64,
    /// Distance before the conflict point at which the yielding participant stops, m.
    #[serde(default = "default_yield_margin")]
    pub yield_margin: f64,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default)]
    pub seed: u64,
}

fn default_start_offset() -> f64 {
    5.5
}
fn default_pass_gap() -> f64 {
    2.0
}
fn default_yield_trigger() -> f64 {
    -2.5
}
fn default_yield_margin() -> f64 {
    6.0
}
fn default_dt() -> f64 {
    0.02
}

impl ScenarioSpec {
    pub fn new(kind: ScenarioKind, case: ScenarioCase, speeds: [f64; 2]) -> Self {
        Self {
            id: String::new(),
            kind,
            case,
            start_offset: default_start_offset(),
            speeds,
            accel: [Vec::new(), Vec::new()],
            lateral_offset: None,
            pass_gap: default_pass_gap(),
            yield_trigger: default_yield_trigger(),
            yield_margin: default_yield_margin(),
            dt: default_dt(),
            seed: 0,
        }
    }

    fn effective_lateral_offset(&self) -> f64 {
        match self.case {
            ScenarioCase::Crash => 0.0,
            ScenarioCase::NearCrash => self.lateral_offset.unwrap_or(DEFAULT_NEAR_CRASH_OFFSET),
            ScenarioCase::NonCrash => self.lateral_offset.unwrap_or(DEFAULT_NON_CRASH_OFFSET),
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(RiskError::InconsistentSpec(msg));
        if !(self.start_offset > 0.0) {
            return bad(format!("start_offset must be positive, got {}", self.start_offset));
        }
        if !(self.dt > 0.0) || self.dt > self.start_offset {
            return bad(format!("dt must be in (0, start_offset], got {}", self.dt));
        }
        if self.speeds.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
            return bad(format!("speeds must be finite and non-negative, got {:?}", self.speeds));
        }
        for phases in &self.accel {
            if phases.iter().any(|p| !p.from.is_finite() || !p.accel.is_finite()) {
                return bad("acceleration phases must be finite".into());
            }
            if phases.windows(2).any(|w| w[1].from < w[0].from) {
                return bad("acceleration phases must be ordered by start time".into());
            }
        }
        if let Some(off) = self.lateral_offset {
            if !(off >= 0.0) {
                return bad(format!("lateral_offset must be non-negative, got {off}"));
            }
        }
        Ok(())
    }

    fn time_grid(&self) -> Vec<f64> {
        let n = (self.start_offset / self.dt).round() as i64;
        (-n..=0).map(|k| k as f64 * self.dt).collect()
    }
}

/// Generated trajectories together with their spec.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioInstance {
    pub spec: ScenarioSpec,
    pub traj_a: Trajectory,
    pub traj_b: Trajectory,
    pub t_event: f64,
}

impl ScenarioInstance {
    /// Builds an instance from externally supplied trajectories.
    pub fn from_trajectories(spec: ScenarioSpec, traj_a: Trajectory, traj_b: Trajectory) -> Result<Self> {
        if traj_a.len() != traj_b.len()
            || (traj_a.dt() - traj_b.dt()).abs() > 1e-9
            || (traj_a.start_time() - traj_b.start_time()).abs() > 1e-9
        {
            return Err(RiskError::InconsistentSpec(format!(
                "trajectories of {} do not share a time grid",
                spec.id
            )));
        }
        Ok(Self { spec, traj_a, traj_b, t_event: 0.0 })
    }

    pub fn id(&self) -> &str {
        &self.spec.id
    }

    pub fn kind(&self) -> ScenarioKind {
        self.spec.kind
    }

    pub fn case(&self) -> ScenarioCase {
        self.spec.case
    }

    pub fn distances(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.traj_a
            .samples()
            .iter()
            .zip(self.traj_b.samples())
            .map(|(a, b)| (a.time, (b.position - a.position).norm()))
    }

    /// Sampled minimum inter-participant distance as `(t, d)`.
    pub fn min_distance(&self) -> (f64, f64) {
        self.distances().fold((f64::NAN, f64::INFINITY), |best, (t, d)| if d < best.1 { (t, d) } else { best })
    }
}

/// Along-path displacement and speed of a participant on a time grid,
/// integrating piecewise-constant acceleration exactly. Speed never drops
/// below zero; a participant that brakes to a halt stays put.
fn integrate_path(v0: f64, phases: &[AccelPhase], times: &[f64]) -> Vec<(f64, f64)> {
    let accel_at = |t: f64| phases.iter().rev().find(|p| p.from <= t).map_or(0.0, |p| p.accel);
    let mut out = Vec::with_capacity(times.len());
    let (mut x, mut v) = (0.0, v0);
    out.push((x, v));
    for w in times.windows(2) {
        let (mut t, t_end) = (w[0], w[1]);
        while t < t_end - 1e-12 {
            let next_break = phases.iter().map(|p| p.from).filter(|&f| f > t + 1e-12).fold(t_end, f64::min);
            let a = accel_at(t + 1e-12);
            let tau = next_break - t;
            if a < 0.0 && v + a * tau < 0.0 {
                // halts inside this piece and stays halted until the next phase
                let stop = v / -a;
                x += 0.5 * v * stop;
                v = 0.0;
            } else {
                x += v * tau + 0.5 * a * tau * tau;
                v = (v + a * tau).max(0.0);
            }
            t = next_break;
        }
        out.push((x, v));
    }
    out
}

fn straight_trajectory(
    id: &str,
    times: &[f64],
    motion: &[(f64, f64)],
    origin: Vec2,
    direction: Vec2,
) -> Result<Trajectory> {
    let samples = times
        .iter()
        .zip(motion)
        .map(|(&t, &(x, v))| KinematicState::new(t, origin + direction * x, direction * v))
        .collect::<Result<Vec<_>>>()?;
    Trajectory::new(id, samples)
}

/// Path displacement at the final grid time (scene time 0).
fn displacement_to_event(motion: &[(f64, f64)]) -> f64 {
    motion.last().expect("non-empty grid").0
}

/// Car-following scenario along +x. In the crash case the follower reaches
/// the leader's position at `t = 0`; otherwise the leader's path is shifted
/// laterally so the two pass side by side at `t = 0`.
pub fn gen_longitudinal(spec: &ScenarioSpec) -> Result<ScenarioInstance> {
    spec.validate()?;
    if spec.kind != ScenarioKind::Longitudinal {
        return Err(RiskError::InconsistentSpec("gen_longitudinal needs kind = longitudinal".into()));
    }
    let times = spec.time_grid();
    let ma = integrate_path(spec.speeds[0], &spec.accel[0], &times);
    let mb = integrate_path(spec.speeds[1], &spec.accel[1], &times);

    // closing must be strict before the event, or the follower never reaches the leader at t = 0
    for (k, (a, b)) in ma.iter().zip(&mb).enumerate().take(times.len() - 1) {
        if a.1 <= b.1 {
            return Err(RiskError::InconsistentSpec(format!(
                "{}: follower ({:.3} m/s) is not faster than leader ({:.3} m/s) at t = {:.3}",
                spec.id, a.1, b.1, times[k]
            )));
        }
    }
    let x = Vec2::new(1.0, 0.0);
    let offset = spec.effective_lateral_offset();
    let traj_a = straight_trajectory("a", &times, &ma, Vec2::new(-displacement_to_event(&ma), 0.0), x)?;
    let traj_b = straight_trajectory("b", &times, &mb, Vec2::new(-displacement_to_event(&mb), offset), x)?;
    Ok(ScenarioInstance { spec: spec.clone(), traj_a, traj_b, t_event: 0.0 })
}

/// Perpendicular crossing at the origin: `a` travels along +x, `b` along +y.
///
/// * crash: both reach the origin at `t = 0`;
/// * near-crash: `b` starts on a collision course, then brakes at constant
///   deceleration from `yield_trigger` and halts `yield_margin` before the
///   origin while `a` passes;
/// * non-crash: constant speeds, arrivals separated by `pass_gap`, timed so
///   the closest approach falls on `t = 0`.
pub fn gen_intersection(spec: &ScenarioSpec) -> Result<ScenarioInstance> {
    spec.validate()?;
    if spec.kind != ScenarioKind::Intersection {
        return Err(RiskError::InconsistentSpec("gen_intersection needs kind = intersection".into()));
    }
    if spec.speeds.iter().any(|&v| v <= 0.0) {
        return Err(RiskError::InconsistentSpec(format!("{}: both participants must be moving", spec.id)));
    }
    let times = spec.time_grid();
    let (ex, ey) = (Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0));

    let (ma, mb, start_a, start_b) = match spec.case {
        ScenarioCase::Crash => {
            let ma = integrate_path(spec.speeds[0], &spec.accel[0], &times);
            let mb = integrate_path(spec.speeds[1], &spec.accel[1], &times);
            let (da, db) = (displacement_to_event(&ma), displacement_to_event(&mb));
            (ma, mb, -da, -db)
        }
        ScenarioCase::NearCrash => {
            if !(spec.yield_trigger > times[0] && spec.yield_trigger < 0.0) {
                return Err(RiskError::InconsistentSpec(format!(
                    "{}: yield_trigger {} outside the scenario ({}, 0)",
                    spec.id, spec.yield_trigger, times[0]
                )));
            }
            if spec.accel[1].iter().any(|p| p.from >= spec.yield_trigger) {
                return Err(RiskError::InconsistentSpec(format!(
                    "{}: yielding participant has acceleration phases after the trigger",
                    spec.id
                )));
            }
            let ma = integrate_path(spec.speeds[0], &spec.accel[0], &times);
            let unyielded = integrate_path(spec.speeds[1], &spec.accel[1], &times);
            let start_b = -displacement_to_event(&unyielded);
            // state of b at the trigger on its original collision course
            let trig = integrate_path(spec.speeds[1], &spec.accel[1], &[times[0], spec.yield_trigger]);
            let (pos_trig, v_trig) = trig[1];
            let remaining = -(start_b + pos_trig) - spec.yield_margin;
            if remaining <= 0.0 || v_trig <= 0.0 {
                return Err(RiskError::InconsistentSpec(format!(
                    "{}: yielding participant cannot stop {} m before the conflict point",
                    spec.id, spec.yield_margin
                )));
            }
            let decel = v_trig * v_trig / (2.0 * remaining);
            let mut phases = spec.accel[1].clone();
            phases.push(AccelPhase { from: spec.yield_trigger, accel: -decel });
            let mb = integrate_path(spec.speeds[1], &phases, &times);
            let da = displacement_to_event(&ma);
            (ma, mb, -da, start_b)
        }
        ScenarioCase::NonCrash => {
            if spec.accel.iter().any(|p| !p.is_empty()) {
                return Err(RiskError::InconsistentSpec(format!(
                    "{}: intersection non-crash cases use constant speeds",
                    spec.id
                )));
            }
            if !(spec.pass_gap > 0.0) {
                return Err(RiskError::InconsistentSpec(format!("{}: pass_gap must be positive", spec.id)));
            }
            let (va, vb) = (spec.speeds[0], spec.speeds[1]);
            let t_a = -spec.pass_gap * vb * vb / (va * va + vb * vb);
            let t_b = t_a + spec.pass_gap;
            let ma = integrate_path(va, &[], &times);
            let mb = integrate_path(vb, &[], &times);
            // positions at the grid start so that arrivals happen at t_a and t_b
            (ma, mb, va * (times[0] - t_a), vb * (times[0] - t_b))
        }
    };
    let traj_a = straight_trajectory("a", &times, &ma, Vec2::new(start_a, 0.0), ex)?;
    let traj_b = straight_trajectory("b", &times, &mb, Vec2::new(0.0, start_b), ey)?;
    Ok(ScenarioInstance { spec: spec.clone(), traj_a, traj_b, t_event: 0.0 })
}

pub fn generate(spec: &ScenarioSpec) -> Result<ScenarioInstance> {
    match spec.kind {
        ScenarioKind::Longitudinal => gen_longitudinal(spec),
        ScenarioKind::Intersection => gen_intersection(spec),
    }
}

/// Base scenarios per kind in the default set.
pub const BASES_PER_KIND: usize = 7;

/// The default evaluation set: seven base scenarios per kind, each in crash,
/// near-crash and non-crash variants (42 instances). Speeds and manoeuvre
/// parameters come from a seeded generator so the set is reproducible.
pub fn default_scenario_set(seed: u64) -> Vec<ScenarioSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut half_step = |lo: f64, hi: f64| (rng.random_range(lo..=hi) * 2.0).round() / 2.0;
    let mut specs = Vec::with_capacity(6 * BASES_PER_KIND);

    for base in 0..BASES_PER_KIND {
        let closing = half_step(6.0, 20.0);
        let leader = half_step(0.0, 14.0);
        // every other base has a braking leader, violating the constant-velocity prediction
        let leader_accel = if base % 2 == 1 { half_step(-2.0, -0.5) } else { 0.0 };
        let accel_from = half_step(-4.0, -2.0);
        for case in ScenarioCase::ALL {
            let mut s = ScenarioSpec::new(ScenarioKind::Longitudinal, case, [leader + closing, leader]);
            s.id = format!("lon{}_{}", base, case.as_str());
            s.seed = seed;
            if leader_accel != 0.0 {
                s.accel[1] = vec![AccelPhase { from: accel_from, accel: leader_accel }];
            }
            specs.push(s);
        }
    }
    for base in 0..BASES_PER_KIND {
        let va = half_step(7.0, 15.0);
        let vb = half_step(7.0, 15.0);
        let a_accel = if base % 2 == 1 { half_step(-1.5, 1.5) } else { 0.0 };
        let trigger = half_step(-3.5, -2.0);
        let margin = half_step(4.0, 8.0);
        for case in ScenarioCase::ALL {
            let mut s = ScenarioSpec::new(ScenarioKind::Intersection, case, [va, vb]);
            s.id = format!("int{}_{}", base, case.as_str());
            s.seed = seed;
            if a_accel != 0.0 && case != ScenarioCase::NonCrash {
                s.accel[0] = vec![AccelPhase { from: -3.0, accel: a_accel }];
            }
            s.yield_trigger = trigger;
            s.yield_margin = margin;
            specs.push(s);
        }
    }
    specs
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn longitudinal_crash_geometry() {
        let inst = gen_longitudinal(&ScenarioSpec::new(ScenarioKind::Longitudinal, ScenarioCase::Crash, [20.0, 10.0])).unwrap();
        let (_, d0) = inst.distances().next().unwrap();
        assert_relative_eq!(d0, 55.0, epsilon = 1e-9);
        let (t, d) = inst.min_distance();
        assert!(d < 1e-9 && t.abs() < 1e-12);
        assert_eq!(inst.traj_a.len(), 276);
    }

    #[test]
    fn longitudinal_offsets() {
        for (case, off) in [(ScenarioCase::NearCrash, 7.0), (ScenarioCase::NonCrash, 12.0)] {
            let inst = gen_longitudinal(&ScenarioSpec::new(ScenarioKind::Longitudinal, case, [20.0, 10.0])).unwrap();
            let (_, d) = inst.min_distance();
            assert!((d - off).abs() <= 0.02 * 30.0, "{case:?}: {d}");
            assert_relative_eq!(d, off, epsilon = 1e-9);
        }
    }

    #[test]
    fn braking_leader_still_meets_at_event() {
        let mut spec = ScenarioSpec::new(ScenarioKind::Longitudinal, ScenarioCase::Crash, [18.0, 8.0]);
        spec.accel[1] = vec![AccelPhase { from: -3.0, accel: -1.5 }];
        let inst = gen_longitudinal(&spec).unwrap();
        let (t, d) = inst.min_distance();
        assert!(d < 1e-9 && t == 0.0);
        let v_end = inst.traj_b.samples().last().unwrap().velocity.x;
        assert_relative_eq!(v_end, 8.0 - 4.5, epsilon = 1e-9);
    }

    #[test]
    fn longitudinal_rejects_slower_follower() {
        let spec = ScenarioSpec::new(ScenarioKind::Longitudinal, ScenarioCase::Crash, [10.0, 10.0]);
        assert!(matches!(gen_longitudinal(&spec), Err(RiskError::InconsistentSpec(_))));
        let spec = ScenarioSpec::new(ScenarioKind::Intersection, ScenarioCase::Crash, [10.0, 10.0]);
        assert!(gen_longitudinal(&spec).is_err());
    }

    #[test]
    fn intersection_crash_symmetric() {
        let inst = gen_intersection(&ScenarioSpec::new(ScenarioKind::Intersection, ScenarioCase::Crash, [10.0, 10.0])).unwrap();
        let a0 = inst.traj_a.samples()[0].position;
        assert_relative_eq!(a0.x, -55.0, epsilon = 1e-9);
        let last_a = inst.traj_a.samples().last().unwrap().position;
        let last_b = inst.traj_b.samples().last().unwrap().position;
        assert!(last_a.norm() < 1e-9 && last_b.norm() < 1e-9);
    }

    #[test]
    fn intersection_non_crash_min_distance() {
        let inst = gen_intersection(&ScenarioSpec::new(ScenarioKind::Intersection, ScenarioCase::NonCrash, [10.0, 10.0])).unwrap();
        // oracle: arrivals at 0 s and 2 s, grid scan of the closed-form distance at 1e-3
        let oracle = (-5000..=5000)
            .map(|i| {
                let t = i as f64 * 1e-3;
                (10.0 * t).hypot(10.0 * (t - 2.0))
            })
            .fold(f64::INFINITY, f64::min);
        assert_relative_eq!(oracle, 14.142_135_623_730_95, epsilon = 1e-6);
        let (t, d) = inst.min_distance();
        assert_relative_eq!(d, oracle, epsilon = 1e-6);
        assert!(t.abs() < 1e-9);
    }

    #[test]
    fn intersection_near_crash_yields() {
        let inst = gen_intersection(&ScenarioSpec::new(ScenarioKind::Intersection, ScenarioCase::NearCrash, [10.0, 10.0])).unwrap();
        let (_, d) = inst.min_distance();
        assert!(d > 0.0);
        assert!(d >= 6.0 - 1e-6, "{d}");
        for s in inst.traj_a.samples().iter().chain(inst.traj_b.samples()) {
            assert!(s.velocity.norm() >= 0.0);
            assert!(s.velocity.x >= 0.0 && s.velocity.y >= 0.0);
        }
        // b never passes the stop line
        let stop = inst.traj_b.samples().iter().map(|s| s.position.y).fold(f64::NEG_INFINITY, f64::max);
        assert!(stop <= -6.0 + 1e-6);
    }

    #[test]
    fn intersection_near_crash_rejects_late_trigger() {
        let mut spec = ScenarioSpec::new(ScenarioKind::Intersection, ScenarioCase::NearCrash, [10.0, 10.0]);
        spec.yield_trigger = -0.5;
        assert!(gen_intersection(&spec).is_err());
        spec.yield_trigger = 1.0;
        assert!(gen_intersection(&spec).is_err());
    }

    #[test]
    fn generation_is_deterministic() {
        let a: Vec<_> = default_scenario_set(7).iter().map(|s| generate(s).unwrap()).collect();
        let b: Vec<_> = default_scenario_set(7).iter().map(|s| generate(s).unwrap()).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn default_set_shape() {
        let specs = default_scenario_set(1);
        assert_eq!(specs.len(), 42);
        for kind in ScenarioKind::ALL {
            for case in ScenarioCase::ALL {
                assert_eq!(specs.iter().filter(|s| s.kind == kind && s.case == case).count(), 7);
            }
        }
        for s in &specs {
            let inst = generate(s).unwrap();
            let d_start = inst.distances().next().unwrap().1;
            assert!(d_start <= 125.0, "{}: {}", s.id, d_start);
            let (t, d) = inst.min_distance();
            match s.case {
                ScenarioCase::Crash => assert!(d <= 0.1 && t.abs() <= s.dt, "{}", s.id),
                ScenarioCase::NearCrash => assert!(d > 3.0, "{}: {d}", s.id),
                ScenarioCase::NonCrash => assert!(d > 10.0, "{}: {d}", s.id),
            }
        }
    }

    #[test]
    fn integrate_path_stops_at_zero_speed() {
        let times: Vec<f64> = (0..=50).map(|k| k as f64 * 0.1).collect();
        let m = integrate_path(4.0, &[AccelPhase { from: 0.0, accel: -2.0 }], &times);
        let (x, v) = *m.last().unwrap();
        assert_eq!(v, 0.0);
        assert_relative_eq!(x, 4.0, epsilon = 1e-9);
    }

    #[test]
    fn spec_json_defaults() {
        let spec: ScenarioSpec =
            serde_json::from_str(r#"{"kind":"intersection","case":"non_crash","speeds":[10,12]}"#).unwrap();
        assert_eq!(spec.start_offset, 5.5);
        assert_eq!(spec.pass_gap, 2.0);
        assert_eq!(spec.dt, 0.02);
        assert!(serde_json::from_str::<ScenarioSpec>(r#"{"kind":"x","case":"crash","speeds":[1,2]}"#).is_err());
    }
}
