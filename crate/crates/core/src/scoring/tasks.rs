//! Task scores and their composition into group and overall scores.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::metrics::{filling_mass_error, relative_abs_error, sigma1, weighted_f1};
use crate::dataset::{FillingLevel, FillingType};
use crate::error::{Error, Result};

/// Continuous measure scored by [`task_score`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    Capacity,
    ContainerMass,
    WidthTop,
    WidthBottom,
    Height,
    FillingMass,
}

impl Measure {
    pub const ALL: [Measure; 6] = [
        Measure::Capacity,
        Measure::ContainerMass,
        Measure::WidthTop,
        Measure::WidthBottom,
        Measure::Height,
        Measure::FillingMass,
    ];

    /// Per-configuration error and its contribution in [0, 1].
    pub fn contribution(self, estimate: f64, truth: f64) -> Result<(f64, f64)> {
        match self {
            Measure::Capacity | Measure::ContainerMass => {
                let err = relative_abs_error(estimate, truth)?;
                Ok((err, (-err).exp()))
            }
            Measure::WidthTop | Measure::WidthBottom | Measure::Height => {
                let s = sigma1(estimate, truth)?;
                Ok(((estimate - truth).abs() / truth, s))
            }
            Measure::FillingMass => {
                let err = filling_mass_error(estimate, truth);
                Ok((err, (-err).exp()))
            }
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Measure::Capacity => "capacity",
            Measure::ContainerMass => "container_mass",
            Measure::WidthTop => "width_top",
            Measure::WidthBottom => "width_bottom",
            Measure::Height => "height",
            Measure::FillingMass => "filling_mass",
        };
        f.write_str(name)
    }
}

/// Estimate/annotation pair for one configuration.
#[derive(Debug, Clone, Copy)]
pub struct MeasurePair<'a> {
    pub config_id: &'a str,
    pub estimate: Option<f64>,
    pub truth: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerConfigScore {
    pub config_id: String,
    pub measure: Measure,
    pub indicator: u8,
    /// Relative error for the measure; `None` when not estimated.
    pub error: Option<f64>,
    pub contribution: f64,
}

/// Mean contribution over all configurations. Not-estimated entries add 0
/// but still count in the denominator.
pub fn task_score(
    measure: Measure,
    pairs: &[MeasurePair<'_>],
) -> Result<(f64, Vec<PerConfigScore>)> {
    if pairs.is_empty() {
        return Err(Error::Scoring(format!(
            "no configurations to score {measure}"
        )));
    }
    let mut per_config = Vec::with_capacity(pairs.len());
    for pair in pairs {
        let (indicator, error, contribution) = match pair.estimate {
            Some(est) => {
                let (err, c) = measure
                    .contribution(est, pair.truth)
                    .map_err(|e| Error::Scoring(format!("config `{}`: {e}", pair.config_id)))?;
                (1, Some(err), c)
            }
            None => (0, None, 0.0),
        };
        per_config.push(PerConfigScore {
            config_id: pair.config_id.to_owned(),
            measure,
            indicator,
            error,
            contribution,
        });
    }
    let score = per_config.iter().map(|p| p.contribution).sum::<f64>() / pairs.len() as f64;
    Ok((score, per_config))
}

pub const JOINT_CLASSES: usize = 7;

/// Index of a feasible (type, level) pair: 0 for empty, then
/// pasta 50/90, rice 50/90, water 50/90. `None` for infeasible pairs.
pub fn joint_class(kind: FillingType, level: FillingLevel) -> Option<usize> {
    match (kind, level) {
        (FillingType::None, FillingLevel::Empty) => Some(0),
        (FillingType::None, _) | (_, FillingLevel::Empty) => None,
        (kind, level) => Some(1 + 2 * (kind.code() - 1) + (level.code() - 1)),
    }
}

/// Weighted F1 over the seven feasible filling classes. Missing or
/// infeasible predicted pairs are misses.
pub fn joint_filling_score(
    levels: &[Option<FillingLevel>],
    kinds: &[Option<FillingType>],
    truths: &[(FillingType, FillingLevel)],
) -> Result<f64> {
    if levels.len() != kinds.len() {
        return Err(Error::Scoring(
            "level and type predictions differ in length".into(),
        ));
    }
    let preds: Vec<Option<usize>> = levels
        .iter()
        .zip(kinds)
        .map(|(l, k)| match (l, k) {
            (Some(l), Some(k)) => joint_class(*k, *l),
            _ => None,
        })
        .collect();
    let truth_classes = truths
        .iter()
        .map(|&(k, l)| {
            joint_class(k, l)
                .ok_or_else(|| Error::Scoring(format!("infeasible annotated filling ({k}, {l})")))
        })
        .collect::<Result<Vec<_>>>()?;
    weighted_f1(&preds, &truth_classes, JOINT_CLASSES).map(|(s, _)| s)
}

/// Capacity and dimensions group score: half capacity, half the three
/// dimension scores (top width, bottom width, height).
pub fn capacity_dims_score(capacity: f64, width_top: f64, width_bottom: f64, height: f64) -> f64 {
    capacity / 2.0 + (width_top + width_bottom + height) / 6.0
}

/// Variant that follows the printed formula literally, using container mass
/// in place of height: s3/2 + (s4 + s5 + s6)/6.
pub fn capacity_dims_score_literal(
    capacity: f64,
    container_mass: f64,
    width_top: f64,
    width_bottom: f64,
) -> f64 {
    capacity / 2.0 + (container_mass + width_top + width_bottom) / 6.0
}

/// Weights pi_1..pi_10 for an algorithm addressing `tasks` of the five tasks.
/// The simulation scores are scaled by tasks/5.
pub fn weights(tasks: usize) -> [f64; 10] {
    let scale = tasks.min(5) as f64 / 5.0;
    let eighth = 1.0 / 8.0;
    let twenty_fourth = 1.0 / 24.0;
    [
        eighth,
        eighth,
        eighth,
        eighth,
        twenty_fourth,
        twenty_fourth,
        twenty_fourth,
        eighth,
        scale * eighth,
        scale * eighth,
    ]
}

/// Weighted sum of s1..s10; absent scores should be passed as 0.
pub fn overall_score(scores: &[f64; 10], tasks: usize) -> f64 {
    weights(tasks).iter().zip(scores).map(|(w, s)| w * s).sum()
}
