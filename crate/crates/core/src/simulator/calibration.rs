use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::handover::{run_handover, HandoverOutcome};
use super::params::SimParams;
use crate::dataset::{ConfigurationAnnotation, PoseTrack};
use crate::error::{Error, Result};

/// Ground-truth replay used to discard failing configurations and to remove
/// the simulator bias from the safety and delivery scores.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub discarded: BTreeSet<String>,
    /// 100 minus the ground-truth safety score, percentage points.
    pub residual_safety: f64,
    /// 100 minus the ground-truth delivery score, percentage points.
    pub residual_delivery: f64,
    pub ground_truth: Vec<HandoverOutcome>,
}

pub fn residual(ground_truth_score: f64) -> f64 {
    100.0 - ground_truth_score
}

pub(crate) fn track_for<'a>(
    tracks: &'a BTreeMap<String, PoseTrack>,
    ann: &ConfigurationAnnotation,
) -> Result<&'a PoseTrack> {
    tracks
        .get(&ann.config_id)
        .ok_or_else(|| Error::Simulation(format!("no pose track for config `{}`", ann.config_id)))
}

/// Runs every configuration with its annotated mass. Configurations that fail
/// to be grasped or delivered are discarded; residuals are computed over the rest.
pub fn calibrate(
    annotations: &[&ConfigurationAnnotation],
    tracks: &BTreeMap<String, PoseTrack>,
    params: &SimParams,
) -> Result<Calibration> {
    let outcomes = annotations
        .iter()
        .map(|ann| {
            run_handover(
                ann,
                track_for(tracks, ann)?,
                Some(ann.object_mass()),
                params,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(calibration_from_outcomes(outcomes))
}

pub(crate) fn calibration_from_outcomes(mut outcomes: Vec<HandoverOutcome>) -> Calibration {
    let mut discarded = BTreeSet::new();
    for o in &mut outcomes {
        if !o.succeeded() {
            o.discarded = true;
            discarded.insert(o.config_id.clone());
        }
    }
    let kept: Vec<&HandoverOutcome> = outcomes.iter().filter(|o| !o.discarded).collect();
    let (residual_safety, residual_delivery) = if kept.is_empty() {
        (0.0, 0.0)
    } else {
        let n = kept.len() as f64;
        let safety = 100.0 * kept.iter().map(|o| o.safety).sum::<f64>() / n;
        let delivery = 100.0 * kept.iter().map(|o| o.delivery).sum::<f64>() / n;
        (residual(safety), residual(delivery))
    };
    Calibration {
        discarded,
        residual_safety,
        residual_delivery,
        ground_truth: outcomes,
    }
}

/// Object safety (s9) and delivery accuracy (s10) in percent, over the
/// configurations kept by calibration, with the residuals added back.
pub fn safety_and_delivery_scores(
    outcomes: &[HandoverOutcome],
    calibration: &Calibration,
) -> Result<(f64, f64)> {
    let kept: Vec<&HandoverOutcome> = outcomes
        .iter()
        .filter(|o| !o.discarded && !calibration.discarded.contains(&o.config_id))
        .collect();
    if kept.is_empty() {
        return Err(Error::Scoring(
            "no configurations left for safety and delivery scores".into(),
        ));
    }
    let n = kept.len() as f64;
    let safety = 100.0
        * kept
            .iter()
            .map(|o| if o.mass_estimated { o.safety } else { 0.0 })
            .sum::<f64>()
        / n;
    let delivery = 100.0 * kept.iter().map(|o| o.delivery).sum::<f64>() / n;
    Ok((
        (safety + calibration.residual_safety).clamp(0.0, 100.0),
        (delivery + calibration.residual_delivery).clamp(0.0, 100.0),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn outcome(id: &str, safety: f64, delivery: f64) -> HandoverOutcome {
        HandoverOutcome {
            config_id: id.into(),
            mass_estimated: true,
            reached: true,
            grasped: true,
            reach_frame: Some(0),
            aperture: 60.0,
            applied_force: 1.0,
            required_force: 1.0,
            safety,
            dropped: false,
            broken: false,
            alpha: 0.0,
            beta: 0.0,
            tip_angle: 0.5,
            delivery,
            discarded: false,
        }
    }

    fn clean() -> Calibration {
        calibration_from_outcomes(vec![outcome("a", 1.0, 1.0), outcome("b", 1.0, 1.0)])
    }

    #[test]
    fn perfect_ground_truth_has_zero_residuals() {
        let cal = clean();
        assert!(cal.discarded.is_empty());
        assert_eq!((cal.residual_safety, cal.residual_delivery), (0.0, 0.0));
    }

    #[test]
    fn failed_ground_truth_is_discarded() {
        let mut bad = outcome("b", 0.0, 0.0);
        bad.reached = false;
        let cal = calibration_from_outcomes(vec![outcome("a", 1.0, 1.0), bad]);
        assert_eq!(cal.discarded, BTreeSet::from(["b".to_owned()]));
    }

    #[test]
    fn residual_arithmetic() {
        assert_eq!(residual(94.0), 6.0);
        let cal = calibration_from_outcomes(vec![outcome("a", 0.94, 0.9), outcome("b", 0.94, 0.9)]);
        assert!((cal.residual_safety - 6.0).abs() < 1e-12);
        assert!((cal.residual_delivery - 10.0).abs() < 1e-12);
        let (s9, s10) = safety_and_delivery_scores(&cal.ground_truth, &cal).unwrap();
        assert!((s9 - 100.0).abs() < 1e-12 && (s10 - 100.0).abs() < 1e-12);
    }

    #[test]
    fn scores_average_and_indicator() {
        let cal = clean();
        let (s9, s10) =
            safety_and_delivery_scores(&[outcome("a", 1.0, 1.0), outcome("b", 1.0, 1.0)], &cal)
                .unwrap();
        assert_eq!((s9, s10), (100.0, 100.0));

        let mut missing = outcome("a", 0.7, 1.0);
        missing.mass_estimated = false;
        let (s9, _) = safety_and_delivery_scores(&[missing, outcome("b", 1.0, 1.0)], &cal).unwrap();
        assert_eq!(s9, 50.0);
    }

    #[test]
    fn scores_clamped_to_percent_range() {
        let mut cal = clean();
        cal.residual_safety = 30.0;
        let (s9, _) = safety_and_delivery_scores(&[outcome("a", 0.9, 1.0)], &cal).unwrap();
        assert_eq!(s9, 100.0);
    }

    #[test]
    fn all_discarded_is_error() {
        let mut cal = clean();
        cal.discarded.insert("a".into());
        assert!(safety_and_delivery_scores(&[outcome("a", 1.0, 1.0)], &cal).is_err());
    }
}
