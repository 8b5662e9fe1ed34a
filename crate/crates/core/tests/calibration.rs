use riskhorizon::calibration::{calibrate_all, calibrated_params, score_candidate, CalibrationConfig};
use riskhorizon::evaluation::{Measure, MeasureParams};
use riskhorizon::scenarios::{default_scenario_set, generate, ScenarioInstance};

fn default_set() -> Vec<ScenarioInstance> {
    default_scenario_set(42).iter().map(|s| generate(s).unwrap()).collect()
}

#[test]
fn shipped_constants_are_admissible() {
    let instances = default_set();
    let cfg = CalibrationConfig::default();
    let params = calibrated_params();
    params.validate().unwrap();
    for m in [Measure::Ttce, Measure::Gauss, Measure::Sa] {
        let s = score_candidate(&instances, m, &params, &cfg).unwrap();
        assert!(s.admissible(&cfg), "{m}: {s:?}");
    }
}

// Slow: the full grid search takes minutes on one core.
#[test]
#[ignore]
fn recalibration_reproduces_shipped_constants() {
    let (params, reports) = calibrate_all(&default_set(), &MeasureParams::default(), &CalibrationConfig::default()).unwrap();
    assert!(reports.iter().all(|r| r.selected.is_some()));
    let shipped = calibrated_params();
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * b.abs().max(1.0);
    assert_eq!(params.sa, shipped.sa);
    assert!(close(params.ttce.d_c, shipped.ttce.d_c) && close(params.ttce.diffusion, shipped.ttce.diffusion));
    assert!(close(params.gauss.epsilon, shipped.gauss.epsilon) && close(params.gauss.d_c(), shipped.gauss.d_c()));
}
