//! Quasi-static replay of one human-to-robot handover.
//!
//! The end effector chases the annotated container pose from the handover
//! frame, closes the gripper, and carries the container to the target along a
//! straight line. Grasp quality is decided by the ratio between the force the
//! robot applies (from the estimated mass) and the force actually required.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use super::params::SimParams;
use crate::dataset::{ConfigurationAnnotation, PoseTrack};
use crate::error::{Error, Result};

/// Normal force needed to hold `mass_kg` while the arm accelerates, N.
pub fn grasp_force(mass_kg: f64, params: &SimParams) -> f64 {
    mass_kg * (params.gravity + params.max_acceleration) / params.friction
}

/// `(1 - c)^(|applied - required| / required)`.
pub fn object_safety(applied: f64, required: f64, sensitivity: f64) -> Result<f64> {
    if required <= 0.0 {
        return Err(Error::Simulation(format!(
            "required force must be positive, got {required}"
        )));
    }
    let gap = (applied - required).abs() / required;
    Ok((gap * (1.0 - sensitivity).ln()).exp())
}

/// `1 - alpha / eta` if the container lies within `eta` of the target and is
/// tilted less than `phi`, else 0.
pub fn delivery_accuracy(alpha: f64, beta: f64, eta: f64, phi: f64) -> f64 {
    if alpha < eta && beta < phi {
        1.0 - alpha / eta
    } else {
        0.0
    }
}

/// Tilt at which a uniform container pivoting on its base edge tips over.
pub fn tip_over_angle(width_bottom: f64, height: f64) -> f64 {
    (width_bottom / height).atan()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Approach,
    Grasp,
    Transport,
    Placed,
    Dropped,
    Broken,
    Failed,
}

impl Phase {
    pub fn as_str(self) -> &'static str {
        match self {
            Phase::Approach => "approach",
            Phase::Grasp => "grasp",
            Phase::Transport => "transport",
            Phase::Placed => "placed",
            Phase::Dropped => "dropped",
            Phase::Broken => "broken",
            Phase::Failed => "failed",
        }
    }
}

/// End-effector sample for the optional trace file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub config_id: String,
    pub frame: u64,
    pub ee: [f64; 3],
    pub state: Phase,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HandoverOutcome {
    pub config_id: String,
    /// False when no mass estimate was available; the safety term then counts 0.
    pub mass_estimated: bool,
    pub reached: bool,
    pub grasped: bool,
    /// Frame at which the end effector reached the container.
    pub reach_frame: Option<u64>,
    /// Gripper opening at closure, mm.
    pub aperture: f64,
    /// Force applied from the estimated mass, N.
    pub applied_force: f64,
    /// Force required by the annotated mass, N.
    pub required_force: f64,
    pub safety: f64,
    pub dropped: bool,
    pub broken: bool,
    /// Distance from the container base to the target, mm.
    pub alpha: f64,
    /// Container tilt from vertical, rad.
    pub beta: f64,
    pub tip_angle: f64,
    pub delivery: f64,
    pub discarded: bool,
}

impl HandoverOutcome {
    /// True when grasp and delivery both succeeded.
    pub fn succeeded(&self) -> bool {
        self.reached && self.grasped && !self.dropped && !self.broken && self.delivery > 0.0
    }
}

fn vec3(a: [f64; 3]) -> Vector3<f64> {
    Vector3::new(a[0], a[1], a[2])
}

/// Replays a handover with the predicted object mass in grams (`None` when
/// the container or filling mass was not estimated).
pub fn run_handover(
    ann: &ConfigurationAnnotation,
    track: &PoseTrack,
    predicted_mass: Option<f64>,
    params: &SimParams,
) -> Result<HandoverOutcome> {
    simulate(ann, track, predicted_mass, params, None)
}

/// As [`run_handover`], also returning the per-frame end-effector trace.
pub fn run_handover_traced(
    ann: &ConfigurationAnnotation,
    track: &PoseTrack,
    predicted_mass: Option<f64>,
    params: &SimParams,
) -> Result<(HandoverOutcome, Vec<TraceRow>)> {
    let mut trace = Vec::new();
    let outcome = simulate(ann, track, predicted_mass, params, Some(&mut trace))?;
    Ok((outcome, trace))
}

fn simulate(
    ann: &ConfigurationAnnotation,
    track: &PoseTrack,
    predicted_mass: Option<f64>,
    params: &SimParams,
    mut trace: Option<&mut Vec<TraceRow>>,
) -> Result<HandoverOutcome> {
    if let Some(m) = predicted_mass {
        if !(m >= 0.0) {
            return Err(Error::Simulation(format!(
                "config `{}`: predicted mass must be non-negative, got {m}",
                ann.config_id
            )));
        }
    }
    crate::dataset::validate_against_track(ann, track)?;

    let mut record = |frame: u64, ee: &Vector3<f64>, state: Phase| {
        if let Some(rows) = trace.as_deref_mut() {
            rows.push(TraceRow {
                config_id: ann.config_id.clone(),
                frame,
                ee: [ee.x, ee.y, ee.z],
                state,
            });
        }
    };

    // approach: chase the container at bounded speed inside the workspace
    let step = params.max_speed * 1000.0 / ann.frame_rate;
    let base = vec3(params.base);
    let hold_frames = (params.hold_after_end * ann.frame_rate).ceil() as u64;
    let last_frame = track.last_frame() + hold_frames;
    let mut ee = vec3(params.home);
    let mut reach_frame = None;
    for frame in ann.handover_frame..=last_frame {
        let object = track.pose_at(frame)?.translation;
        let mut goal = object;
        let offset = goal - base;
        if offset.norm() > params.max_reach {
            goal = base + offset.normalize() * params.max_reach;
        }
        let to_goal = goal - ee;
        let dist = to_goal.norm();
        if dist <= step {
            ee = goal;
        } else {
            ee += to_goal * (step / dist);
        }
        record(frame, &ee, Phase::Approach);
        if (ee - object).norm() <= params.reach_tolerance {
            reach_frame = Some(frame);
            break;
        }
    }

    let tip_angle = params
        .tip_angle_override
        .unwrap_or_else(|| tip_over_angle(ann.width_bottom, ann.height));
    let width = ann.grasp_width();
    let aperture = width - params.grip_margin;
    let required_force = grasp_force(ann.object_mass() / 1000.0, params);
    let applied_force = predicted_mass.map_or(0.0, |m| grasp_force(m / 1000.0, params));

    let mut outcome = HandoverOutcome {
        config_id: ann.config_id.clone(),
        mass_estimated: predicted_mass.is_some(),
        reached: reach_frame.is_some(),
        grasped: false,
        reach_frame,
        aperture,
        applied_force,
        required_force,
        safety: 0.0,
        dropped: false,
        broken: false,
        alpha: 0.0,
        beta: 0.0,
        tip_angle,
        delivery: 0.0,
        discarded: false,
    };
    let target = vec3(ann.target);
    let Some(grasp_frame) = reach_frame else {
        outcome.alpha = (ee - target).norm();
        return Ok(outcome);
    };

    outcome.grasped = aperture > 0.0 && width <= params.gripper_stroke && predicted_mass.is_some();
    if !outcome.grasped {
        record(grasp_frame, &ee, Phase::Failed);
        outcome.alpha = (ee - target).norm();
        return Ok(outcome);
    }
    record(grasp_frame, &ee, Phase::Grasp);
    outcome.safety = object_safety(applied_force, required_force, params.safety_sensitivity)?;

    let ratio = applied_force / required_force;
    let (slip, tilt) = if ratio < params.slip_threshold {
        outcome.dropped = true;
        record(grasp_frame, &ee, Phase::Dropped);
        // the container falls where it was grasped and lands on its side
        outcome.alpha = (ee - target).norm();
        outcome.beta = std::f64::consts::FRAC_PI_2;
        return Ok(outcome);
    } else if ratio < 1.0 {
        (
            (1.0 - ratio) * params.slip_length,
            (1.0 - ratio) * tip_angle,
        )
    } else if ratio <= params.break_ratio {
        (0.0, 0.0)
    } else {
        outcome.broken = true;
        record(grasp_frame, &ee, Phase::Broken);
        return Ok(outcome);
    };

    // transport along a straight line to the target, one step per frame
    let mut frame = grasp_frame;
    loop {
        let to_target = target - ee;
        let dist = to_target.norm();
        frame += 1;
        if dist <= step {
            ee = target;
            record(frame, &ee, Phase::Placed);
            break;
        }
        ee += to_target * (step / dist);
        record(frame, &ee, Phase::Transport);
    }

    outcome.alpha = slip;
    outcome.beta = tilt;
    outcome.delivery = delivery_accuracy(
        outcome.alpha,
        outcome.beta,
        params.max_delivery_distance,
        tip_angle,
    );
    Ok(outcome)
}
