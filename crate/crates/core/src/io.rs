//! File formats: trajectory, trace and statistics CSVs, scenario configs and
//! the instance manifest. Every writer goes through [`write_atomic`].

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use crate::evaluation::{DetectionStats, Measure, RiskTrace};
use crate::kinematics::{estimate_velocities, KinematicState, Trajectory, Vec2};
use crate::scenarios::{ScenarioCase, ScenarioInstance, ScenarioKind, ScenarioSpec};

/// Writes `bytes` to a sibling temp file and renames it over `path`, so a
/// reader never observes a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let name = path.file_name().with_context(|| format!("{} has no file name", path.display()))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    fs::write(&tmp, bytes).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("renaming {} to {}", tmp.display(), path.display()))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

#[derive(Debug, Serialize, Deserialize)]
struct TrajectoryRow {
    t: f64,
    x: f64,
    y: f64,
    #[serde(default)]
    vx: Option<f64>,
    #[serde(default)]
    vy: Option<f64>,
}

/// CSV with header `t,x,y,vx,vy` (seconds, meters, m/s).
pub fn trajectory_csv(traj: &Trajectory) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for s in traj.samples() {
        w.serialize(TrajectoryRow {
            t: s.time,
            x: s.position.x,
            y: s.position.y,
            vx: Some(s.velocity.x),
            vy: Some(s.velocity.y),
        })?;
    }
    Ok(w.into_inner()?)
}

/// Reads `t,x,y[,vx,vy]`. Velocities in the file are used as given; when the
/// columns are absent or empty they are estimated from the positions.
pub fn read_trajectory_csv(path: &Path, participant_id: &str) -> Result<Trajectory> {
    let mut r = csv::Reader::from_path(path).with_context(|| format!("opening {}", path.display()))?;
    let rows = r
        .deserialize::<TrajectoryRow>()
        .collect::<std::result::Result<Vec<_>, _>>()
        .with_context(|| format!("parsing {}", path.display()))?;
    if rows.is_empty() {
        bail!("{} has no samples", path.display());
    }
    let ctx = || format!("in {}", path.display());
    if rows.iter().all(|r| r.vx.is_some() && r.vy.is_some()) {
        let samples = rows
            .iter()
            .map(|r| KinematicState::new(r.t, Vec2::new(r.x, r.y), Vec2::new(r.vx.unwrap(), r.vy.unwrap())))
            .collect::<crate::Result<Vec<_>>>()
            .with_context(ctx)?;
        Trajectory::new(participant_id, samples).with_context(ctx)
    } else {
        let pts: Vec<(f64, Vec2)> = rows.iter().map(|r| (r.t, Vec2::new(r.x, r.y))).collect();
        estimate_velocities(participant_id, &pts).with_context(ctx)
    }
}

/// Reads a scenario config: either `{"scenarios": [...]}` or a bare list of specs.
pub fn read_scenario_config(path: &Path) -> Result<Vec<ScenarioSpec>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_scenario_config(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn parse_scenario_config(text: &str) -> Result<Vec<ScenarioSpec>> {
    // parse as a value first so schema errors name the offending entry
    let value: serde_json::Value = serde_json::from_str(text)?;
    let list = match &value {
        serde_json::Value::Array(items) => items.clone(),
        serde_json::Value::Object(map) if map.contains_key("scenarios") => match &map["scenarios"] {
            serde_json::Value::Array(items) => items.clone(),
            _ => bail!("\"scenarios\" must be a list"),
        },
        _ => bail!("expected a list of scenarios or an object with a \"scenarios\" list"),
    };
    let mut specs = Vec::with_capacity(list.len());
    for (i, item) in list.into_iter().enumerate() {
        let spec: ScenarioSpec =
            serde_json::from_value(item).with_context(|| format!("scenario #{i}: invalid spec"))?;
        specs.push(spec);
    }
    Ok(specs)
}

/// One entry of the instance manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub spec: ScenarioSpec,
    pub t_event: f64,
    /// Trajectory files relative to the manifest directory.
    pub files: [String; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub instances: Vec<ManifestEntry>,
}

pub const MANIFEST_NAME: &str = "manifest.json";

/// Writes two trajectory CSVs per instance plus `manifest.json` into `dir`.
pub fn write_instances(dir: &Path, instances: &[ScenarioInstance]) -> Result<PathBuf> {
    let mut entries = Vec::with_capacity(instances.len());
    for inst in instances {
        let files = [format!("{}_a.csv", inst.id()), format!("{}_b.csv", inst.id())];
        write_atomic(&dir.join(&files[0]), &trajectory_csv(&inst.traj_a)?)?;
        write_atomic(&dir.join(&files[1]), &trajectory_csv(&inst.traj_b)?)?;
        entries.push(ManifestEntry { spec: inst.spec.clone(), t_event: inst.t_event, files });
    }
    let path = dir.join(MANIFEST_NAME);
    write_json(&path, &Manifest { instances: entries })?;
    Ok(path)
}

/// Loads every instance listed in a manifest, reading its trajectory files.
pub fn read_instances(manifest_path: &Path) -> Result<Vec<ScenarioInstance>> {
    let manifest: Manifest = read_json(manifest_path)?;
    let dir = manifest_path.parent().unwrap_or(Path::new("."));
    manifest
        .instances
        .into_iter()
        .map(|e| {
            let a = read_trajectory_csv(&dir.join(&e.files[0]), "a")?;
            let b = read_trajectory_csv(&dir.join(&e.files[1]), "b")?;
            let mut inst = ScenarioInstance::from_trajectories(e.spec, a, b)?;
            inst.t_event = e.t_event;
            Ok(inst)
        })
        .collect()
}

/// Trace CSV with header `t,measure,R`; inapplicable samples have an empty `R`.
pub fn trace_csv(trace: &RiskTrace) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["t", "measure", "R"])?;
    for (t, v) in trace.times.iter().zip(&trace.values) {
        let r = v.map(|v| v.to_string()).unwrap_or_default();
        w.write_record([t.to_string().as_str(), trace.measure.as_str(), r.as_str()])?;
    }
    Ok(w.into_inner()?)
}

/// Index describing the trace files of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceIndexEntry {
    pub instance_id: String,
    pub measure: Measure,
    pub kind: ScenarioKind,
    pub case: ScenarioCase,
    pub t_event: f64,
    pub file: String,
}

pub const TRACE_INDEX_NAME: &str = "traces.json";

pub fn trace_file_name(trace: &RiskTrace) -> String {
    format!("{}_{}.csv", trace.instance_id, trace.measure.as_str().to_ascii_lowercase())
}

/// Writes one CSV per trace plus `traces.json` into `dir`.
pub fn write_traces(dir: &Path, traces: &[RiskTrace]) -> Result<PathBuf> {
    let mut index = Vec::with_capacity(traces.len());
    for tr in traces {
        let file = trace_file_name(tr);
        write_atomic(&dir.join(&file), &trace_csv(tr)?)?;
        index.push(TraceIndexEntry {
            instance_id: tr.instance_id.clone(),
            measure: tr.measure,
            kind: tr.kind,
            case: tr.case,
            t_event: tr.t_event,
            file,
        });
    }
    let path = dir.join(TRACE_INDEX_NAME);
    write_json(&path, &index)?;
    Ok(path)
}

#[derive(Debug, Deserialize)]
struct TraceRow {
    t: f64,
    measure: Measure,
    #[serde(rename = "R")]
    r: Option<f64>,
}

pub fn read_trace_csv(path: &Path, entry: &TraceIndexEntry) -> Result<RiskTrace> {
    let mut r = csv::Reader::from_path(path).with_context(|| format!("opening {}", path.display()))?;
    let mut times = Vec::new();
    let mut values = Vec::new();
    for row in r.deserialize::<TraceRow>() {
        let row = row.with_context(|| format!("parsing {}", path.display()))?;
        if row.measure != entry.measure {
            bail!("{}: row measure {} does not match index {}", path.display(), row.measure, entry.measure);
        }
        times.push(row.t);
        values.push(row.r);
    }
    Ok(RiskTrace {
        instance_id: entry.instance_id.clone(),
        measure: entry.measure,
        kind: entry.kind,
        case: entry.case,
        t_event: entry.t_event,
        times,
        values,
    })
}

/// Reads every trace listed in a `traces.json` index.
pub fn read_traces(index_path: &Path) -> Result<Vec<RiskTrace>> {
    let index: Vec<TraceIndexEntry> = read_json(index_path)?;
    let dir = index_path.parent().unwrap_or(Path::new("."));
    index.iter().map(|e| read_trace_csv(&dir.join(&e.file), e)).collect()
}

fn cell(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.4}")).unwrap_or_default()
}

/// Statistics CSV `measure,kind,case,t_d,sigma_t,R_max,sigma_R,FP,N`; cells
/// that do not apply to a case are left empty. Spreads are standard deviations.
pub fn stats_csv(rows: &[DetectionStats]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["measure", "kind", "case", "t_d", "sigma_t", "R_max", "sigma_R", "FP", "N"])?;
    for r in rows {
        w.write_record([
            r.measure.as_str().to_string(),
            r.kind.as_str().to_string(),
            r.case.as_str().to_string(),
            cell(r.t_d_mean),
            cell(r.sigma_t),
            cell(r.r_max_mean),
            cell(r.sigma_r),
            r.fp.map(|f| f.to_string()).unwrap_or_default(),
            r.n.to_string(),
        ])?;
    }
    Ok(w.into_inner()?)
}

pub fn write_stats(path: &Path, rows: &[DetectionStats]) -> Result<()> {
    write_atomic(path, &stats_csv(rows)?)
}

pub fn write_params<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    write_json(path, value)
}

pub fn read_params<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    read_json(path)
}
