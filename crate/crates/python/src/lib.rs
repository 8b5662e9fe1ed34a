//! Python bindings for `riskhorizon`.
//!
//! Distance profiles are passed as a list of distances sampled from s = 0 at
//! a fixed step. Errors from the core library surface as `ValueError`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use riskhorizon::calibration;
use riskhorizon::evaluation::{self, EvalConfig, Measure};
use riskhorizon::kinematics::{self, DistanceProfile, Encounter, RelativeState, Vec2};
use riskhorizon::risk_measures::{self, GaussParams, TtceParams};
use riskhorizon::scenarios::{default_scenario_set, generate};
use riskhorizon::survival::{self, SurvivalParams};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn profile(distances: Vec<f64>, step: f64) -> PyResult<DistanceProfile> {
    DistanceProfile::new(step, distances).map_err(value_error)
}

/// Closest encounter `(s_e, d_e)` for relative position and velocity.
#[pyfunction]
pub fn closest_encounter(dx: f64, dy: f64, dvx: f64, dvy: f64) -> (f64, f64) {
    let e = kinematics::closest_encounter(&RelativeState::new(Vec2::new(dx, dy), Vec2::new(dvx, dvy)));
    (e.s_e, e.d_e)
}

#[pyfunction]
#[pyo3(signature = (s_e, epsilon=1.0, alpha=1.0, d_c=1.0))]
pub fn risk_ttc(s_e: f64, epsilon: f64, alpha: f64, d_c: f64) -> PyResult<f64> {
    let p = TtceParams::with_joint(epsilon, alpha, d_c);
    p.validate().map_err(value_error)?;
    Ok(risk_measures::risk_ttc(s_e, &p))
}

/// TTCE risk. `diffusion` defaults to `d_c`.
#[pyfunction]
#[pyo3(signature = (s_e, d_e, epsilon=1.0, alpha=1.0, d_c=1.0, diffusion=None))]
pub fn risk_ttce(s_e: f64, d_e: f64, epsilon: f64, alpha: f64, d_c: f64, diffusion: Option<f64>) -> PyResult<f64> {
    let p = TtceParams { epsilon, alpha, d_c, diffusion: diffusion.unwrap_or(d_c) };
    p.validate().map_err(value_error)?;
    Ok(risk_measures::risk_ttce(&Encounter { s_e, d_e }, &p))
}

/// `(mu_c, sigma_c_sq, s_c)` of the product of two 1D Gaussian densities.
#[pyfunction]
pub fn gaussian_product(mu1: f64, var1: f64, mu2: f64, var2: f64) -> PyResult<(f64, f64, f64)> {
    let g = risk_measures::gaussian_product(mu1, var1, mu2, var2).map_err(value_error)?;
    Ok((g.mu_c, g.sigma_c_sq, g.s_c))
}

/// Gaussian-method risk and its location `(risk, s)` on a distance profile.
#[pyfunction]
#[pyo3(signature = (distances, step, epsilon=1.0, d_c=1.0))]
pub fn risk_gauss(distances: Vec<f64>, step: f64, epsilon: f64, d_c: f64) -> PyResult<(f64, f64)> {
    let p = GaussParams::with_joint(epsilon, d_c);
    p.validate().map_err(value_error)?;
    let g = risk_measures::risk_gauss(&profile(distances, step)?, &p).map_err(value_error)?;
    Ok((g.risk, g.s_e))
}

/// Survival-analysis risk. The profile step doubles as the quadrature step and
/// its span as the horizon.
#[pyfunction]
#[pyo3(signature = (distances, step, tau0_inv=0.3, tau_coll0_inv=20.0, beta_coll=0.3))]
pub fn risk_sa(distances: Vec<f64>, step: f64, tau0_inv: f64, tau_coll0_inv: f64, beta_coll: f64) -> PyResult<f64> {
    let prof = profile(distances, step)?;
    let p = SurvivalParams { tau0_inv, tau_coll0_inv, beta_coll, dt_int: step, horizon: prof.span().max(step) };
    survival::risk_sa(&prof, &p).map_err(value_error)
}

/// Shipped calibrated constants as a nested dict.
#[pyfunction]
pub fn calibrated_params(py: Python<'_>) -> PyResult<Bound<'_, PyDict>> {
    let p = calibration::calibrated_params();
    let ttce = PyDict::new(py);
    ttce.set_item("epsilon", p.ttce.epsilon)?;
    ttce.set_item("alpha", p.ttce.alpha)?;
    ttce.set_item("d_c", p.ttce.d_c)?;
    ttce.set_item("diffusion", p.ttce.diffusion)?;
    let gauss = PyDict::new(py);
    gauss.set_item("epsilon", p.gauss.epsilon)?;
    gauss.set_item("d_c", p.gauss.d_c())?;
    let sa = PyDict::new(py);
    sa.set_item("tau0_inv", p.sa.tau0_inv)?;
    sa.set_item("tau_coll0_inv", p.sa.tau_coll0_inv)?;
    sa.set_item("beta_coll", p.sa.beta_coll)?;
    sa.set_item("dt_int", p.sa.dt_int)?;
    let out = PyDict::new(py);
    out.set_item("TTCE", ttce)?;
    out.set_item("Gauss", gauss)?;
    out.set_item("SA", sa)?;
    Ok(out)
}

/// Runs every measure on the default scenario set with the calibrated
/// constants and returns one dict per measure/kind/case group.
#[pyfunction]
#[pyo3(signature = (seed=42, r_th=0.7))]
pub fn evaluate_default_set(py: Python<'_>, seed: u64, r_th: f64) -> PyResult<Vec<Bound<'_, PyDict>>> {
    let instances = default_scenario_set(seed).iter().map(generate).collect::<Result<Vec<_>, _>>().map_err(value_error)?;
    let cfg = EvalConfig { r_th, ..EvalConfig::default() };
    cfg.validate().map_err(value_error)?;
    let traces = py
        .detach(|| evaluation::compute_all_traces(&instances, &Measure::ALL, &calibration::calibrated_params(), &cfg))
        .map_err(value_error)?;
    let rows = evaluation::aggregate(&traces, r_th).map_err(value_error)?;
    rows.into_iter()
        .map(|r| {
            let d = PyDict::new(py);
            d.set_item("measure", r.measure.as_str())?;
            d.set_item("kind", r.kind.as_str())?;
            d.set_item("case", r.case.as_str())?;
            d.set_item("t_d", r.t_d_mean)?;
            d.set_item("sigma_t", r.sigma_t)?;
            d.set_item("misses", r.misses)?;
            d.set_item("R_max", r.r_max_mean)?;
            d.set_item("sigma_R", r.sigma_r)?;
            d.set_item("FP", r.fp)?;
            d.set_item("N", r.n)?;
            Ok(d)
        })
        .collect()
}

#[pymodule]
fn pyriskhorizon(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(closest_encounter, m)?)?;
    m.add_function(wrap_pyfunction!(risk_ttc, m)?)?;
    m.add_function(wrap_pyfunction!(risk_ttce, m)?)?;
    m.add_function(wrap_pyfunction!(gaussian_product, m)?)?;
    m.add_function(wrap_pyfunction!(risk_gauss, m)?)?;
    m.add_function(wrap_pyfunction!(risk_sa, m)?)?;
    m.add_function(wrap_pyfunction!(calibrated_params, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate_default_set, m)?)?;
    Ok(())
}
