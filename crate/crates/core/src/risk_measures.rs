//! TTC, TTCE and Gaussian-overlap risk measures.
//!
//! All three share the temporal factor `(ε / (ε + D·s))^α`. TTCE evaluates it
//! at the closed-form closest encounter; the Gaussian method maximizes the
//! event probability over a sampled distance profile.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result, RiskError};
use crate::kinematics::{DistanceProfile, Encounter};

/// Constants of the TTC / TTCE measures.
///
/// `d_c` scales prediction time inside the temporal factor, `diffusion` is the
/// variance growth rate (m²/s) of the spatial factor. Both default to the same
/// value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TtceParams {
    pub epsilon: f64,
    pub alpha: f64,
    pub d_c: f64,
    pub diffusion: f64,
}

impl Default for TtceParams {
    fn default() -> Self {
        Self { epsilon: 1.0, alpha: 1.0, d_c: 1.0, diffusion: 1.0 }
    }
}

impl TtceParams {
    /// Single joint constant for both factors.
    pub fn with_joint(epsilon: f64, alpha: f64, d_c: f64) -> Self {
        Self { epsilon, alpha, d_c, diffusion: d_c }
    }

    pub fn validate(&self) -> Result<()> {
        positive("epsilon", self.epsilon)?;
        positive("alpha", self.alpha)?;
        positive("d_c", self.d_c)?;
        positive("diffusion", self.diffusion)
    }
}

/// Constants of the Gaussian method. The exponent of the temporal factor is
/// fixed at 1/2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GaussParams {
    pub epsilon: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Default for GaussParams {
    fn default() -> Self {
        Self { epsilon: 1.0, d1: 0.5, d2: 0.5 }
    }
}

impl GaussParams {
    pub const ALPHA: f64 = 0.5;

    /// Splits a joint diffusion constant evenly between both participants.
    pub fn with_joint(epsilon: f64, d_c: f64) -> Self {
        Self { epsilon, d1: 0.5 * d_c, d2: 0.5 * d_c }
    }

    /// Joint diffusion constant `D₁ + D₂`.
    pub fn d_c(&self) -> f64 {
        self.d1 + self.d2
    }

    pub fn validate(&self) -> Result<()> {
        positive("epsilon", self.epsilon)?;
        if !(self.d1 >= 0.0 && self.d2 >= 0.0) {
            return Err(invalid("d1/d2", "diffusion constants must be non-negative"));
        }
        positive("d1 + d2", self.d_c())
    }
}

pub(crate) fn positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(name, format!("must be positive and finite, got {v}")))
    }
}

#[inline]
fn temporal_factor(s: f64, epsilon: f64, d_c: f64, alpha: f64) -> f64 {
    let ratio = epsilon / (epsilon + d_c * s);
    if alpha == 1.0 {
        ratio
    } else if alpha == 0.5 {
        ratio.sqrt()
    } else {
        ratio.powf(alpha)
    }
}

/// `exp(-d² / (2·D·s))`, taking the `s → 0⁺` limit at `s = 0`.
#[inline]
fn spatial_factor(d: f64, s: f64, diffusion: f64) -> f64 {
    if d == 0.0 {
        1.0
    } else if s <= 0.0 {
        0.0
    } else {
        (-d * d / (2.0 * diffusion * s)).exp()
    }
}

/// TTC risk `[ε / (ε + D_c·s_e)]^α`.
pub fn risk_ttc(s_e: f64, p: &TtceParams) -> f64 {
    temporal_factor(s_e.max(0.0), p.epsilon, p.d_c, p.alpha)
}

/// TTCE risk: the TTC temporal factor times a Gaussian spatial factor whose
/// variance grows linearly with the time to closest encounter.
pub fn risk_ttce(enc: &Encounter, p: &TtceParams) -> f64 {
    risk_ttc(enc.s_e, p) * spatial_factor(enc.d_e, enc.s_e, p.diffusion)
}

/// Product of two 1D Gaussian densities, `f₁·f₂ = S_c · N(μ_c, σ_c²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianProduct {
    pub mu_c: f64,
    pub sigma_c_sq: f64,
    pub s_c: f64,
}

pub fn gaussian_product(mu1: f64, var1: f64, mu2: f64, var2: f64) -> Result<GaussianProduct> {
    for v in [var1, var2] {
        if !(v > 0.0) {
            return Err(RiskError::NonPositiveVariance(v));
        }
    }
    let var_sum = var1 + var2;
    let diff = mu1 - mu2;
    let s_c = (-diff * diff / (2.0 * var_sum)).exp() / (2.0 * std::f64::consts::PI * var_sum).sqrt();
    Ok(GaussianProduct {
        // precision-weighted mean
        mu_c: (mu1 * var2 + mu2 * var1) / var_sum,
        sigma_c_sq: var1 * var2 / var_sum,
        s_c,
    })
}

/// Normalized collision event probability at prediction time `s` for an
/// expected distance `d`.
pub fn event_prob_gauss(d: f64, s: f64, p: &GaussParams) -> f64 {
    let d_c = p.d_c();
    temporal_factor(s.max(0.0), p.epsilon, d_c, GaussParams::ALPHA) * spatial_factor(d, s, d_c)
}

/// Maximal event probability on a profile together with its location.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussRisk {
    pub risk: f64,
    pub s_e: f64,
}

/// Gaussian risk: maximum of [`event_prob_gauss`] over the sampled profile,
/// ties resolved toward the earliest sample.
pub fn risk_gauss(profile: &DistanceProfile, p: &GaussParams) -> Result<GaussRisk> {
    if profile.is_empty() {
        return Err(RiskError::EmptyProfile);
    }
    let mut best = GaussRisk { risk: f64::NEG_INFINITY, s_e: 0.0 };
    for (s, d) in profile.iter() {
        let r = event_prob_gauss(d, s, p);
        if r > best.risk {
            best = GaussRisk { risk: r, s_e: s };
        }
    }
    Ok(best)
}
