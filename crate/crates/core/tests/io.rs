use std::fs;

use riskhorizon::evaluation::{aggregate, compute_all_traces, EvalConfig, Measure, MeasureParams};
use riskhorizon::io;
use riskhorizon::scenarios::{generate, ScenarioCase, ScenarioKind, ScenarioSpec};
use tempfile::TempDir;

#[test]
fn instances_round_trip_exactly() {
    let tmp = TempDir::new().unwrap();
    let mut spec = ScenarioSpec::new(ScenarioKind::Intersection, ScenarioCase::NearCrash, [11.0, 9.5]);
    spec.id = "x".into();
    let inst = generate(&spec).unwrap();
    let manifest = io::write_instances(tmp.path(), std::slice::from_ref(&inst)).unwrap();
    let back = io::read_instances(&manifest).unwrap();
    assert_eq!(back, vec![inst]);
}

#[test]
fn positions_only_files_get_estimated_velocities() {
    let tmp = TempDir::new().unwrap();
    let path = tmp.path().join("p.csv");
    fs::write(&path, "t,x,y\n0,0,0\n0.5,1,0\n1.0,2,1\n").unwrap();
    let traj = io::read_trajectory_csv(&path, "p").unwrap();
    let v = traj.samples()[1].velocity;
    assert_eq!((v.x, v.y), (2.0, 1.0));
    // velocities in the file win over estimates
    fs::write(&path, "t,x,y,vx,vy\n0,0,0,5,5\n0.5,1,0,5,5\n").unwrap();
    assert_eq!(io::read_trajectory_csv(&path, "p").unwrap().samples()[0].velocity.x, 5.0);
}

#[test]
fn non_uniform_sampling_is_rejected_with_the_path() {
    let tmp = TempDir::new().unwrap();
    let path = tmp.path().join("bad.csv");
    fs::write(&path, "t,x,y\n0,0,0\n0.5,1,0\n1.2,2,0\n").unwrap();
    let err = format!("{:#}", io::read_trajectory_csv(&path, "p").unwrap_err());
    assert!(err.contains("bad.csv"), "{err}");
}

#[test]
fn traces_round_trip_through_csv() {
    let tmp = TempDir::new().unwrap();
    let mut spec = ScenarioSpec::new(ScenarioKind::Longitudinal, ScenarioCase::Crash, [20.0, 10.0]);
    spec.id = "c".into();
    let inst = generate(&spec).unwrap();
    let traces =
        compute_all_traces(&[inst], &Measure::ALL, &MeasureParams::default(), &EvalConfig::default()).unwrap();
    let index = io::write_traces(tmp.path(), &traces).unwrap();
    let back = io::read_traces(&index).unwrap();
    assert_eq!(back, traces);
    assert_eq!(aggregate(&back, 0.7).unwrap(), aggregate(&traces, 0.7).unwrap());
}

#[test]
fn scenario_config_accepts_both_shapes() {
    let list = r#"[{"kind": "longitudinal", "case": "crash", "speeds": [20, 10]}]"#;
    let wrapped = format!(r#"{{"scenarios": {list}}}"#);
    assert_eq!(io::parse_scenario_config(list).unwrap(), io::parse_scenario_config(&wrapped).unwrap());
    assert!(io::parse_scenario_config(r#"{"specs": []}"#).is_err());
}

#[test]
fn atomic_write_replaces_content() {
    let tmp = TempDir::new().unwrap();
    let path = tmp.path().join("sub/f.txt");
    io::write_atomic(&path, b"one").unwrap();
    io::write_atomic(&path, b"two").unwrap();
    assert_eq!(fs::read(&path).unwrap(), b"two");
    assert_eq!(fs::read_dir(path.parent().unwrap()).unwrap().count(), 1);
}
