//! Planar kinematics: trajectories, constant-velocity prediction and the
//! closed-form closest-encounter geometry shared by every risk measure.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Result, RiskError};

/// Squared relative speed (m²/s²) below which the encounter is taken to be "now".
pub const V_EPS: f64 = 1e-9;

/// Relative tolerance used when checking uniform sampling.
const SAMPLING_RTOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, other: Vec2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, rhs: f64) -> Vec2 {
        Vec2::new(self.x * rhs, self.y * rhs)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// Position and velocity of one participant at a scene time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KinematicState {
    pub time: f64,
    pub position: Vec2,
    pub velocity: Vec2,
}

impl KinematicState {
    pub fn new(time: f64, position: Vec2, velocity: Vec2) -> Result<Self> {
        if !position.is_finite() {
            return Err(RiskError::NonFinite("position"));
        }
        if !velocity.is_finite() {
            return Err(RiskError::NonFinite("velocity"));
        }
        if !time.is_finite() {
            return Err(RiskError::NonFinite("time"));
        }
        Ok(Self { time, position, velocity })
    }

    /// Relative state of `other` as seen from `self`.
    pub fn relative_to(&self, other: &KinematicState) -> RelativeState {
        RelativeState {
            delta_x: other.position - self.position,
            delta_v: other.velocity - self.velocity,
        }
    }
}

/// Uniformly sampled states of one participant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    participant_id: String,
    samples: Vec<KinematicState>,
    dt: f64,
}

impl Trajectory {
    /// Validates that samples are finite and uniformly spaced in time.
    pub fn new(participant_id: impl Into<String>, samples: Vec<KinematicState>) -> Result<Self> {
        let times: Vec<f64> = samples.iter().map(|s| s.time).collect();
        let dt = uniform_step(&times)?;
        for s in &samples {
            KinematicState::new(s.time, s.position, s.velocity)?;
        }
        Ok(Self { participant_id: participant_id.into(), samples, dt })
    }

    pub fn participant_id(&self) -> &str {
        &self.participant_id
    }

    pub fn samples(&self) -> &[KinematicState] {
        &self.samples
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn start_time(&self) -> f64 {
        self.samples[0].time
    }

    pub fn end_time(&self) -> f64 {
        self.samples[self.samples.len() - 1].time
    }
}

/// Checks `times` for at least two strictly increasing, evenly spaced entries
/// and returns the spacing.
fn uniform_step(times: &[f64]) -> Result<f64> {
    if times.len() < 2 {
        return Err(RiskError::TooFewSamples { needed: 2, got: times.len() });
    }
    if times.iter().any(|t| !t.is_finite()) {
        return Err(RiskError::NonFinite("time"));
    }
    let span = times[times.len() - 1] - times[0];
    let dt = span / (times.len() - 1) as f64;
    if dt <= 0.0 {
        return Err(RiskError::NonUniformSampling { index: 1, step: times[1] - times[0], expected: dt });
    }
    for (i, w) in times.windows(2).enumerate() {
        let step = w[1] - w[0];
        if (step - dt).abs() > SAMPLING_RTOL * dt {
            return Err(RiskError::NonUniformSampling { index: i + 1, step, expected: dt });
        }
    }
    Ok(dt)
}

/// Relative position and velocity between two participants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelativeState {
    pub delta_x: Vec2,
    pub delta_v: Vec2,
}

impl RelativeState {
    pub fn new(delta_x: Vec2, delta_v: Vec2) -> Self {
        Self { delta_x, delta_v }
    }

    /// Predicted separation `s` seconds ahead.
    pub fn distance_at(&self, s: f64) -> f64 {
        (self.delta_x + self.delta_v * s).norm()
    }
}

/// Time until and distance at the closest predicted approach.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Encounter {
    pub s_e: f64,
    pub d_e: f64,
}

/// Constant-velocity position prediction.
pub fn predict_cv(state: &KinematicState, s: f64) -> Vec2 {
    debug_assert!(s >= 0.0);
    state.position + state.velocity * s
}

/// Predicted inter-participant distances on a uniform grid starting at s = 0.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceProfile {
    step: f64,
    distances: Vec<f64>,
}

impl DistanceProfile {
    pub fn new(step: f64, distances: Vec<f64>) -> Result<Self> {
        if !(step > 0.0) || !step.is_finite() {
            return Err(RiskError::InvalidStep { horizon: f64::NAN, dt: step });
        }
        if distances.is_empty() {
            return Err(RiskError::EmptyProfile);
        }
        if distances.iter().any(|d| !d.is_finite() || *d < 0.0) {
            return Err(RiskError::NonFinite("distance"));
        }
        Ok(Self { step, distances })
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn distances(&self) -> &[f64] {
        &self.distances
    }

    pub fn len(&self) -> usize {
        self.distances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.distances.is_empty()
    }

    /// Prediction time of the last sample.
    pub fn span(&self) -> f64 {
        (self.distances.len() - 1) as f64 * self.step
    }

    pub fn time_at(&self, i: usize) -> f64 {
        i as f64 * self.step
    }

    /// `(s, d)` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.distances.iter().enumerate().map(move |(i, &d)| (self.time_at(i), d))
    }

    /// Nearest-sample lookup; `s` beyond the span clamps to the last sample.
    pub fn nearest(&self, s: f64) -> f64 {
        let i = (s / self.step).round().max(0.0) as usize;
        self.distances[i.min(self.distances.len() - 1)]
    }
}

/// Number of grid points on `[0, horizon]` at spacing `dt`, endpoints included.
pub(crate) fn grid_len(horizon: f64, dt: f64) -> usize {
    (horizon / dt + 1e-9).floor() as usize + 1
}

/// Constant-velocity distance profile between `a` and `b` over `[0, horizon]`.
pub fn distance_profile(
    a: &KinematicState,
    b: &KinematicState,
    horizon: f64,
    dt: f64,
) -> Result<DistanceProfile> {
    if !(dt > 0.0) || !(horizon > 0.0) || dt > horizon {
        return Err(RiskError::InvalidStep { horizon, dt });
    }
    let rel = a.relative_to(b);
    let distances = (0..grid_len(horizon, dt)).map(|i| rel.distance_at(i as f64 * dt)).collect();
    DistanceProfile::new(dt, distances)
}

/// Closed-form closest encounter under constant relative velocity. Separating
/// participants and near-zero relative velocity both clamp to `s_e = 0`.
pub fn closest_encounter(rel: &RelativeState) -> Encounter {
    let dv_sq = rel.delta_v.norm_sq();
    if dv_sq < V_EPS {
        return Encounter { s_e: 0.0, d_e: rel.delta_x.norm() };
    }
    let s_e = (-rel.delta_x.dot(rel.delta_v) / dv_sq).max(0.0);
    Encounter { s_e, d_e: rel.distance_at(s_e) }
}

/// Builds a trajectory from positions only, using central differences inside
/// and one-sided differences at both ends.
pub fn estimate_velocities(participant_id: impl Into<String>, positions: &[(f64, Vec2)]) -> Result<Trajectory> {
    let times: Vec<f64> = positions.iter().map(|(t, _)| *t).collect();
    let dt = uniform_step(&times)?;
    let n = positions.len();
    let samples = (0..n)
        .map(|i| {
            let velocity = if i == 0 {
                (positions[1].1 - positions[0].1) * (1.0 / dt)
            } else if i == n - 1 {
                (positions[n - 1].1 - positions[n - 2].1) * (1.0 / dt)
            } else {
                (positions[i + 1].1 - positions[i - 1].1) * (0.5 / dt)
            };
            KinematicState::new(positions[i].0, positions[i].1, velocity)
        })
        .collect::<Result<Vec<_>>>()?;
    Trajectory::new(participant_id, samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn state(p: (f64, f64), v: (f64, f64)) -> KinematicState {
        KinematicState::new(0.0, Vec2::new(p.0, p.1), Vec2::new(v.0, v.1)).unwrap()
    }

    #[test]
    fn predict_linear_motion() {
        assert_eq!(predict_cv(&state((0.0, 0.0), (2.0, 0.0)), 3.0), Vec2::new(6.0, 0.0));
        let s = state((1.0, 1.0), (-1.0, 2.0));
        assert_eq!(predict_cv(&s, 0.0), s.position);
        assert_eq!(predict_cv(&s, 0.5), Vec2::new(0.5, 2.0));
    }

    #[test]
    fn head_on_profile() {
        let p = distance_profile(&state((0.0, 0.0), (1.0, 0.0)), &state((10.0, 0.0), (0.0, 0.0)), 2.0, 1.0).unwrap();
        let pairs: Vec<_> = p.iter().collect();
        assert_eq!(pairs, vec![(0.0, 10.0), (1.0, 9.0), (2.0, 8.0)]);
    }

    #[test]
    fn coincident_and_parallel_profiles() {
        let a = state((1.0, 2.0), (3.0, -1.0));
        let p = distance_profile(&a, &a, 5.0, 0.5).unwrap();
        assert!(p.distances().iter().all(|&d| d == 0.0));

        let p = distance_profile(&state((0.0, 0.0), (1.0, 0.0)), &state((3.0, 4.0), (1.0, 0.0)), 7.0, 0.1).unwrap();
        assert_eq!(p.len(), 71);
        assert!(p.distances().iter().all(|&d| (d - 5.0).abs() < 1e-12));
    }

    #[test]
    fn profile_rejects_bad_steps() {
        let a = state((0.0, 0.0), (0.0, 0.0));
        assert!(matches!(distance_profile(&a, &a, 1.0, 0.0), Err(RiskError::InvalidStep { .. })));
        assert!(matches!(distance_profile(&a, &a, 0.0, 0.1), Err(RiskError::InvalidStep { .. })));
        assert!(matches!(distance_profile(&a, &a, 1.0, 2.0), Err(RiskError::InvalidStep { .. })));
    }

    #[test]
    fn encounter_examples() {
        let e = closest_encounter(&RelativeState::new(Vec2::new(10.0, 0.0), Vec2::new(-2.0, 0.0)));
        assert_eq!(e, Encounter { s_e: 5.0, d_e: 0.0 });

        // grid minimisation of |(3,4) + (0,-1)s| over [0, 20] at 1e-4 gives s = 4, d = 3
        let e = closest_encounter(&RelativeState::new(Vec2::new(3.0, 4.0), Vec2::new(0.0, -1.0)));
        assert_relative_eq!(e.s_e, 4.0, epsilon = 1e-12);
        assert_relative_eq!(e.d_e, 3.0, epsilon = 1e-12);

        let e = closest_encounter(&RelativeState::new(Vec2::new(5.0, 0.0), Vec2::new(1.0, 0.0)));
        assert_eq!(e, Encounter { s_e: 0.0, d_e: 5.0 });
    }

    #[test]
    fn encounter_degenerate_velocity() {
        let e = closest_encounter(&RelativeState::new(Vec2::new(3.0, 4.0), Vec2::new(1e-6, 0.0)));
        assert_eq!(e, Encounter { s_e: 0.0, d_e: 5.0 });
    }

    #[test]
    fn estimate_uniform_motion() {
        let pts = [(0.0, Vec2::new(0.0, 0.0)), (1.0, Vec2::new(2.0, 0.0)), (2.0, Vec2::new(4.0, 0.0))];
        let traj = estimate_velocities("a", &pts).unwrap();
        assert!(traj.samples().iter().all(|s| s.velocity == Vec2::new(2.0, 0.0)));
        assert_eq!(traj.dt(), 1.0);
    }

    #[test]
    fn estimate_errors() {
        assert_eq!(
            estimate_velocities("a", &[(0.0, Vec2::ZERO)]).unwrap_err(),
            RiskError::TooFewSamples { needed: 2, got: 1 }
        );
        let pts = [(0.0, Vec2::ZERO), (1.0, Vec2::new(1.0, 0.0)), (3.0, Vec2::new(3.0, 0.0))];
        assert!(matches!(estimate_velocities("a", &pts), Err(RiskError::NonUniformSampling { .. })));
    }

    #[test]
    fn trajectory_rejects_non_finite() {
        let bad = KinematicState { time: 1.0, position: Vec2::new(f64::NAN, 0.0), velocity: Vec2::ZERO };
        let good = KinematicState { time: 0.0, position: Vec2::ZERO, velocity: Vec2::ZERO };
        assert!(Trajectory::new("a", vec![good, bad]).is_err());
    }

    fn vec2() -> impl Strategy<Value = Vec2> {
        (-100.0..100.0f64, -100.0..100.0f64).prop_map(|(x, y)| Vec2::new(x, y))
    }

    proptest! {
        #[test]
        fn sine_identity_when_approaching(dx in vec2(), dv in vec2()) {
            let rel = RelativeState::new(dx, dv);
            prop_assume!(dv.norm_sq() >= V_EPS && dx.dot(dv) <= 0.0);
            let e = closest_encounter(&rel);
            let sin = dx.cross(dv).abs() / (dx.norm() * dv.norm());
            let expected = if dx.norm() == 0.0 { 0.0 } else { dx.norm() * sin };
            prop_assert!((e.d_e - expected).abs() <= 1e-9 * (1.0 + dx.norm()));
        }

        #[test]
        fn encounter_is_grid_minimum(dx in vec2(), dv in vec2()) {
            let rel = RelativeState::new(dx, dv);
            let e = closest_encounter(&rel);
            prop_assert!(e.s_e >= 0.0 && e.d_e >= 0.0);
            prop_assert!(e.d_e <= dx.norm() + 1e-12);
            let grid_min = (0..=20_000).map(|i| rel.distance_at(i as f64 * 1e-3)).fold(f64::INFINITY, f64::min);
            prop_assert!(grid_min >= e.d_e - 1e-6);
        }

        #[test]
        fn collinear_reduces_to_ttc(l in 0.1..200.0f64, v in 0.1..50.0f64, ux in -1.0..1.0f64, uy in -1.0..1.0f64) {
            let u = Vec2::new(ux, uy);
            prop_assume!(u.norm() > 0.1);
            let u = u * (1.0 / u.norm());
            let rel = RelativeState::new(u * l, u * -v);
            let e = closest_encounter(&rel);
            prop_assert!((e.s_e - l / v).abs() <= 1e-12 * (l / v));
        }

        #[test]
        fn profile_matches_direct_evaluation(dx in vec2(), dv in vec2(), dt in 0.01..1.0f64) {
            let a = KinematicState::new(0.0, Vec2::ZERO, Vec2::ZERO).unwrap();
            let b = KinematicState::new(0.0, dx, dv).unwrap();
            let p = distance_profile(&a, &b, 6.0, dt).unwrap();
            prop_assert_eq!(p.len(), grid_len(6.0, dt));
            for (s, d) in p.iter() {
                prop_assert_eq!(d, (dx + dv * s).norm());
            }
        }
    }
}
