use std::collections::HashSet;

use super::metrics::{filling_mass, weighted_f1};
use super::report::{ClassBreakdown, ReportOptions, ScoreReport, ScoreVector};
use super::tasks::{joint_filling_score, task_score, Measure, MeasurePair, PerConfigScore};
use crate::dataset::{
    ConfigurationAnnotation, DensityTable, FillingLevel, FillingType, PredictionRecord,
    PredictionSet, SplitSelector, Task,
};
use crate::error::{Error, Result};
use crate::simulator::SimulationSummary;

/// Object safety and delivery scores produced by the simulator, in [0, 1].
#[derive(Debug, Clone)]
pub struct SimulationScores {
    pub safety: f64,
    pub delivery: f64,
    pub summary: Option<SimulationSummary>,
}

#[derive(Debug, Clone, Default)]
pub struct EvalOptions<'a> {
    pub split: Option<SplitSelector>,
    pub s12_literal: bool,
    /// Estimates substituted for unaddressed tasks when computing the filling
    /// mass score; the direct scores always use the original predictions.
    pub filler: Option<&'a PredictionSet>,
    pub filler_name: Option<String>,
    pub seed: Option<u64>,
}

/// Estimated filling mass of one record, `None` when it cannot be formed.
///
/// Needs level and type; the capacity only matters for non-empty fillings.
pub fn estimated_filling_mass(
    record: &PredictionRecord,
    densities: &DensityTable,
) -> Result<Option<f64>> {
    let (Some(level), Some(kind)) = (record.filling_level, record.filling_type) else {
        return Ok(None);
    };
    if level != FillingLevel::Empty && kind != FillingType::None && record.capacity.is_none() {
        return Ok(None);
    }
    filling_mass(level, record.capacity, kind, densities).map(Some)
}

/// Estimated object mass (container plus filling), `None` if either part is missing.
pub fn estimated_object_mass(
    record: &PredictionRecord,
    densities: &DensityTable,
) -> Result<Option<f64>> {
    let filling = estimated_filling_mass(record, densities)?;
    Ok(record.container_mass.zip(filling).map(|(c, f)| c + f))
}

/// Annotations of the selected split, ordered by config id.
pub fn select_split<'a>(
    annotations: &'a [ConfigurationAnnotation],
    split: Option<SplitSelector>,
) -> Vec<&'a ConfigurationAnnotation> {
    let mut selected: Vec<_> = annotations
        .iter()
        .filter(|a| split.is_none_or(|s| s.contains(a.split)))
        .collect();
    selected.sort_by(|a, b| a.config_id.cmp(&b.config_id));
    selected
}

/// Scores a prediction set on the configurations of the selected split.
pub fn evaluate(
    annotations: &[ConfigurationAnnotation],
    predictions: &PredictionSet,
    densities: &DensityTable,
    simulation: Option<SimulationScores>,
    options: &EvalOptions<'_>,
) -> Result<ScoreReport> {
    let known: HashSet<&str> = annotations.iter().map(|a| a.config_id.as_str()).collect();
    let unknown: Vec<&str> = predictions
        .records
        .iter()
        .map(|r| r.config_id.as_str())
        .filter(|id| !known.contains(id))
        .collect();
    if !unknown.is_empty() {
        return Err(Error::InvalidInput(format!(
            "predictions for unannotated configs: {}",
            unknown.join(", ")
        )));
    }

    let selected = select_split(annotations, options.split);
    if selected.is_empty() {
        let split = options.split.map_or("all", |s| s.as_str());
        return Err(Error::Scoring(format!(
            "split `{split}` has no configurations"
        )));
    }

    let index = predictions.index();
    let records: Vec<PredictionRecord> = selected
        .iter()
        .map(|a| {
            index
                .get(a.config_id.as_str())
                .map(|r| (*r).clone())
                .unwrap_or_else(|| PredictionRecord::not_estimated(a.config_id.clone()))
        })
        .collect();
    let addressed = &predictions.tasks_addressed;

    let mut scores = ScoreVector::default();
    let mut per_config: Vec<PerConfigScore> = Vec::new();

    let level_truths: Vec<usize> = selected.iter().map(|a| a.filling_level.code()).collect();
    let type_truths: Vec<usize> = selected.iter().map(|a| a.filling_type.code()).collect();
    let level_preds: Vec<Option<usize>> = records
        .iter()
        .map(|r| r.filling_level.map(FillingLevel::code))
        .collect();
    let type_preds: Vec<Option<usize>> = records
        .iter()
        .map(|r| r.filling_type.map(FillingType::code))
        .collect();
    let (level_score, level_classes) =
        weighted_f1(&level_preds, &level_truths, FillingLevel::ALL.len())?;
    let (type_score, type_classes) =
        weighted_f1(&type_preds, &type_truths, FillingType::ALL.len())?;
    if addressed.contains(&Task::T1) {
        scores.set(1, Some(level_score));
    }
    if addressed.contains(&Task::T2) {
        scores.set(2, Some(type_score));
    }

    let regression: [(
        usize,
        Task,
        Measure,
        fn(&PredictionRecord) -> Option<f64>,
        fn(&ConfigurationAnnotation) -> f64,
    ); 5] = [
        (
            3,
            Task::T3,
            Measure::Capacity,
            |r| r.capacity,
            |a| a.capacity,
        ),
        (
            4,
            Task::T4,
            Measure::ContainerMass,
            |r| r.container_mass,
            |a| a.container_mass,
        ),
        (
            5,
            Task::T5,
            Measure::WidthTop,
            |r| r.width_top,
            |a| a.width_top,
        ),
        (
            6,
            Task::T5,
            Measure::WidthBottom,
            |r| r.width_bottom,
            |a| a.width_bottom,
        ),
        (7, Task::T5, Measure::Height, |r| r.height, |a| a.height),
    ];
    for (slot, task, measure, estimate, truth) in regression {
        if !addressed.contains(&task) {
            continue;
        }
        let pairs: Vec<MeasurePair<'_>> = selected
            .iter()
            .zip(&records)
            .map(|(a, r)| MeasurePair {
                config_id: &a.config_id,
                estimate: estimate(r),
                truth: truth(a),
            })
            .collect();
        let (score, details) = task_score(measure, &pairs)?;
        scores.set(slot, Some(score));
        per_config.extend(details);
    }

    // filling mass, optionally with unaddressed tasks filled in
    let effective: Vec<PredictionRecord> = match options.filler {
        Some(filler) => {
            let filled = crate::baselines::fill_missing_tasks(predictions, filler);
            let idx = filled.index();
            records
                .iter()
                .map(|r| {
                    idx.get(r.config_id.as_str())
                        .map(|f| (*f).clone())
                        .unwrap_or_else(|| r.clone())
                })
                .collect()
        }
        None => records.clone(),
    };
    let effective_tasks = PredictionSet::new("", effective.clone()).tasks_addressed;
    if [Task::T1, Task::T2, Task::T3]
        .iter()
        .all(|t| effective_tasks.contains(t))
    {
        let estimates = effective
            .iter()
            .map(|r| estimated_filling_mass(r, densities))
            .collect::<Result<Vec<_>>>()?;
        let pairs: Vec<MeasurePair<'_>> = selected
            .iter()
            .zip(&estimates)
            .map(|(a, &estimate)| MeasurePair {
                config_id: &a.config_id,
                estimate,
                truth: a.filling_mass,
            })
            .collect();
        let (score, details) = task_score(Measure::FillingMass, &pairs)?;
        scores.set(8, Some(score));
        per_config.extend(details);
    }

    let mut summary = None;
    if let Some(sim) = simulation {
        scores.set(9, Some(sim.safety));
        scores.set(10, Some(sim.delivery));
        summary = sim.summary;
    }

    if addressed.contains(&Task::T1) || addressed.contains(&Task::T2) {
        let levels: Vec<_> = records.iter().map(|r| r.filling_level).collect();
        let kinds: Vec<_> = records.iter().map(|r| r.filling_type).collect();
        let truths: Vec<_> = selected
            .iter()
            .map(|a| (a.filling_type, a.filling_level))
            .collect();
        scores.set(11, Some(joint_filling_score(&levels, &kinds, &truths)?));
    }

    let report_options = ReportOptions {
        s12_literal: options.s12_literal,
        fill_missing: options.filler.map(|f| {
            options
                .filler_name
                .clone()
                .unwrap_or_else(|| f.algorithm_name.clone())
        }),
        seed: options.seed,
        replay: false,
    };
    let split = options.split.map_or("all", |s| s.as_str());
    let mut report = ScoreReport::from_scores(
        predictions.algorithm_name.clone(),
        split,
        predictions.task_count(),
        scores,
        report_options,
    );
    report.configurations = selected.len();
    report.per_config = per_config;
    report.classes = Some(ClassBreakdown {
        filling_level: level_classes,
        filling_type: type_classes,
    });
    report.simulation = summary;
    Ok(report)
}
