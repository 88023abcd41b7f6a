//! Deterministic quasi-static handover simulation and the object safety and
//! delivery accuracy scores.

mod calibration;
mod handover;
mod params;

use std::collections::BTreeMap;
use std::fs::File;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use calibration::{calibrate, residual, safety_and_delivery_scores, Calibration};
pub use handover::{
    delivery_accuracy, grasp_force, object_safety, run_handover, run_handover_traced,
    tip_over_angle, HandoverOutcome, Phase, TraceRow,
};
pub use params::SimParams;

use crate::dataset::{load_pose_track, validate_against_track, ConfigurationAnnotation, PoseTrack};
use crate::error::{Error, Result};
use crate::scoring::SimulationScores;

/// Loads and checks the pose track of every annotation, keyed by config id.
pub fn load_tracks(
    annotations: &[&ConfigurationAnnotation],
    base_dir: &Path,
) -> Result<BTreeMap<String, PoseTrack>> {
    let mut tracks = BTreeMap::new();
    for ann in annotations {
        let path = ann.resolve_pose_path(base_dir);
        let track = load_pose_track(&path)?;
        validate_against_track(ann, &track)?;
        tracks.insert(ann.config_id.clone(), track);
    }
    Ok(tracks)
}

#[derive(Debug, Clone, Default)]
pub struct SimOptions {
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
    pub trace: bool,
}

/// Simulation results embedded in a score report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationSummary {
    pub params: SimParams,
    pub discarded: Vec<String>,
    pub residual_safety: f64,
    pub residual_delivery: f64,
    /// s9, percent.
    pub safety: f64,
    /// s10, percent.
    pub delivery: f64,
    pub outcomes: Vec<HandoverOutcome>,
}

#[derive(Debug, Clone)]
pub struct SimulationRun {
    pub params: SimParams,
    pub calibration: Calibration,
    pub outcomes: Vec<HandoverOutcome>,
    pub trace: Vec<TraceRow>,
    /// s9, percent.
    pub safety: f64,
    /// s10, percent.
    pub delivery: f64,
}

impl SimulationRun {
    pub fn summary(&self) -> SimulationSummary {
        SimulationSummary {
            params: self.params.clone(),
            discarded: self.calibration.discarded.iter().cloned().collect(),
            residual_safety: self.calibration.residual_safety,
            residual_delivery: self.calibration.residual_delivery,
            safety: self.safety,
            delivery: self.delivery,
            outcomes: self.outcomes.clone(),
        }
    }

    pub fn scores(&self) -> SimulationScores {
        SimulationScores {
            safety: self.safety / 100.0,
            delivery: self.delivery / 100.0,
            summary: Some(self.summary()),
        }
    }
}

/// Calibrates on ground truth, then replays every configuration with its
/// predicted object mass (g). Configurations missing from `masses` count as
/// not estimated. Results are ordered by config id.
pub fn simulate(
    annotations: &[&ConfigurationAnnotation],
    tracks: &BTreeMap<String, PoseTrack>,
    masses: &BTreeMap<String, Option<f64>>,
    params: &SimParams,
    options: &SimOptions,
) -> Result<SimulationRun> {
    params.validate()?;
    let mut ordered: Vec<&ConfigurationAnnotation> = annotations.to_vec();
    ordered.sort_by(|a, b| a.config_id.cmp(&b.config_id));

    let run_one = |ann: &&ConfigurationAnnotation| -> Result<(HandoverOutcome, HandoverOutcome, Vec<TraceRow>)> {
        let track = calibration::track_for(tracks, ann)?;
        let truth = run_handover(ann, track, Some(ann.object_mass()), params)?;
        let mass = masses.get(&ann.config_id).copied().flatten();
        let (predicted, trace) = if options.trace {
            run_handover_traced(ann, track, mass, params)?
        } else {
            (run_handover(ann, track, mass, params)?, Vec::new())
        };
        Ok((truth, predicted, trace))
    };

    let results: Vec<_> = match options.jobs {
        Some(jobs) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs.max(1))
                .build()
                .map_err(|e| Error::Simulation(format!("thread pool: {e}")))?;
            pool.install(|| ordered.par_iter().map(run_one).collect::<Result<Vec<_>>>())?
        }
        None => ordered
            .par_iter()
            .map(run_one)
            .collect::<Result<Vec<_>>>()?,
    };

    let mut truths = Vec::with_capacity(results.len());
    let mut outcomes = Vec::with_capacity(results.len());
    let mut trace = Vec::new();
    for (t, p, rows) in results {
        truths.push(t);
        outcomes.push(p);
        trace.extend(rows);
    }
    let calibration = calibration::calibration_from_outcomes(truths);
    for o in &mut outcomes {
        o.discarded = calibration.discarded.contains(&o.config_id);
    }
    let (safety, delivery) = safety_and_delivery_scores(&outcomes, &calibration)?;
    Ok(SimulationRun {
        params: params.clone(),
        calibration,
        outcomes,
        trace,
        safety,
        delivery,
    })
}

/// Writes trace rows as `config_id,frame,ee_x,ee_y,ee_z,state`.
pub fn write_trace(path: impl AsRef<Path>, rows: &[TraceRow]) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut writer = csv::Writer::from_writer(file);
    writer
        .write_record(["config_id", "frame", "ee_x", "ee_y", "ee_z", "state"])
        .map_err(|e| Error::csv(path, e))?;
    for row in rows {
        writer
            .write_record([
                row.config_id.clone(),
                row.frame.to_string(),
                row.ee[0].to_string(),
                row.ee[1].to_string(),
                row.ee[2].to_string(),
                row.state.as_str().to_owned(),
            ])
            .map_err(|e| Error::csv(path, e))?;
    }
    writer.flush().map_err(|e| Error::io(path, e))
}
