//! Survival-analysis risk.
//!
//! Events arrive as an inhomogeneous Poisson process whose rate is an escape
//! rate plus a distance-dependent collision rate. The risk is the probability
//! that the first event is critical, with all probability mass that survives
//! the prediction horizon counted as escaping.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result, RiskError};
use crate::kinematics::{grid_len, DistanceProfile};
use crate::risk_measures::positive;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SurvivalParams {
    /// Escape rate, 1/s.
    pub tau0_inv: f64,
    /// Collision rate at zero distance, 1/s.
    pub tau_coll0_inv: f64,
    /// Spatial decay of the collision rate, 1/m.
    pub beta_coll: f64,
    /// Quadrature step, s.
    pub dt_int: f64,
    /// Prediction horizon, s.
    pub horizon: f64,
}

impl Default for SurvivalParams {
    fn default() -> Self {
        Self { tau0_inv: 0.3, tau_coll0_inv: 20.0, beta_coll: 0.3, dt_int: 0.05, horizon: 6.0 }
    }
}

impl SurvivalParams {
    pub fn validate(&self) -> Result<()> {
        positive("tau0_inv", self.tau0_inv)?;
        positive("tau_coll0_inv", self.tau_coll0_inv)?;
        positive("beta_coll", self.beta_coll)?;
        positive("dt_int", self.dt_int)?;
        positive("horizon", self.horizon)?;
        if self.dt_int > self.horizon {
            return Err(invalid("dt_int", "must not exceed the horizon"));
        }
        // instantaneous event probability must stay a probability on the grid
        if self.tau_coll0_inv * self.dt_int > 1.0 + 1e-12 {
            return Err(invalid(
                "tau_coll0_inv",
                format!("tau_coll0_inv * dt_int = {} exceeds 1", self.tau_coll0_inv * self.dt_int),
            ));
        }
        Ok(())
    }
}

/// Instantaneous collision rate `τ_coll,0⁻¹ · exp(-β_coll · d)`.
pub fn collision_rate(d: f64, p: &SurvivalParams) -> f64 {
    p.tau_coll0_inv * (-p.beta_coll * d).exp()
}

/// Event rates sampled on the quadrature grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateProfile {
    step: f64,
    critical_rate: Vec<f64>,
    escape_rate: f64,
}

impl RateProfile {
    pub fn new(step: f64, critical_rate: Vec<f64>, escape_rate: f64) -> Result<Self> {
        positive("step", step)?;
        if critical_rate.is_empty() {
            return Err(RiskError::EmptyProfile);
        }
        if !(escape_rate >= 0.0) || critical_rate.iter().any(|r| !(*r >= 0.0) || !r.is_finite()) {
            return Err(invalid("rate", "rates must be finite and non-negative"));
        }
        Ok(Self { step, critical_rate, escape_rate })
    }

    /// Constant rates on `[0, horizon]`.
    pub fn constant(step: f64, horizon: f64, critical: f64, escape: f64) -> Result<Self> {
        Self::new(step, vec![critical; grid_len(horizon, step)], escape)
    }

    /// Adds another critical term (e.g. loss of control) sampled on the same grid.
    pub fn add_critical_term(&mut self, rates: &[f64]) -> Result<()> {
        if rates.len() != self.critical_rate.len() {
            return Err(invalid("rates", format!("expected {} samples, got {}", self.critical_rate.len(), rates.len())));
        }
        if rates.iter().any(|r| !(*r >= 0.0) || !r.is_finite()) {
            return Err(invalid("rates", "rates must be finite and non-negative"));
        }
        for (acc, r) in self.critical_rate.iter_mut().zip(rates) {
            *acc += r;
        }
        Ok(())
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn len(&self) -> usize {
        self.critical_rate.len()
    }

    pub fn is_empty(&self) -> bool {
        self.critical_rate.is_empty()
    }

    pub fn s_grid(&self) -> Vec<f64> {
        (0..self.len()).map(|i| i as f64 * self.step).collect()
    }

    pub fn critical_rate(&self) -> &[f64] {
        &self.critical_rate
    }

    pub fn escape_rate(&self) -> f64 {
        self.escape_rate
    }

    pub fn total_rate(&self, i: usize) -> f64 {
        self.escape_rate + self.critical_rate[i]
    }

    pub fn max_total_rate(&self) -> f64 {
        self.escape_rate + self.critical_rate.iter().copied().fold(0.0, f64::max)
    }
}

/// Samples the collision rate along a distance profile on the `dt_int` grid,
/// taking the nearest profile sample for each grid point.
pub fn build_rate_profile(profile: &DistanceProfile, p: &SurvivalParams) -> Result<RateProfile> {
    p.validate()?;
    let n = grid_len(p.horizon, p.dt_int);
    let needed = (n - 1) as f64 * p.dt_int;
    // allow half a profile step of slack: nearest-sample lookup covers it
    if profile.span() + 0.5 * profile.step() + 1e-9 < needed {
        return Err(RiskError::ProfileTooShort { covered: profile.span(), horizon: p.horizon });
    }
    let critical = (0..n).map(|i| collision_rate(profile.nearest(i as f64 * p.dt_int), p)).collect();
    RateProfile::new(p.dt_int, critical, p.tau0_inv)
}

/// Survival function, event density and accumulated event probability on the
/// rate grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurvivalCurve {
    pub s_grid: Vec<f64>,
    pub survival: Vec<f64>,
    pub event_density: Vec<f64>,
    pub accumulated: Vec<f64>,
    /// Accumulated probability of escape events alone.
    pub accumulated_escape: Vec<f64>,
}

impl SurvivalCurve {
    /// Survival at the end of the grid.
    pub fn final_survival(&self) -> f64 {
        *self.survival.last().expect("non-empty curve")
    }

    pub fn final_accumulated(&self) -> f64 {
        *self.accumulated.last().expect("non-empty curve")
    }

    /// Probability of escaping every critical event, counting survivors past
    /// the grid end as escapes.
    pub fn escape_probability(&self) -> f64 {
        *self.accumulated_escape.last().expect("non-empty curve") + self.final_survival()
    }
}

/// Trapezoidal integration of the survival equations.
pub fn integrate_survival(rates: &RateProfile) -> SurvivalCurve {
    let n = rates.len();
    let h = rates.step();
    let mut survival = Vec::with_capacity(n);
    let mut density = Vec::with_capacity(n);
    let mut accumulated = Vec::with_capacity(n);
    let mut acc_escape = Vec::with_capacity(n);

    let mut hazard = 0.0;
    let (mut a, mut a0) = (0.0, 0.0);
    for i in 0..n {
        if i > 0 {
            hazard += 0.5 * h * (rates.total_rate(i - 1) + rates.total_rate(i));
        }
        let s = (-hazard).exp();
        let e = rates.total_rate(i) * s;
        if i > 0 {
            a += 0.5 * h * (density[i - 1] + e);
            a0 += 0.5 * h * rates.escape_rate() * (survival[i - 1] + s);
        }
        survival.push(s);
        density.push(e);
        accumulated.push(a);
        acc_escape.push(a0);
    }
    SurvivalCurve {
        s_grid: rates.s_grid(),
        survival,
        event_density: density,
        accumulated,
        accumulated_escape: acc_escape,
    }
}

/// Risk from an already sampled rate profile.
pub fn risk_from_rates(rates: &RateProfile) -> f64 {
    let curve = integrate_survival(rates);
    (1.0 - curve.escape_probability()).clamp(0.0, 1.0)
}

/// Survival-analysis risk of a predicted distance profile.
pub fn risk_sa(profile: &DistanceProfile, p: &SurvivalParams) -> Result<f64> {
    Ok(risk_from_rates(&build_rate_profile(profile, p)?))
}
