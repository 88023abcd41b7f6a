//! Reference predictions: uniform random estimates (RAN) and training means (AVG).

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::{
    ConfigurationAnnotation, FillingLevel, FillingType, PredictionRecord, PredictionSet, Task,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum BaselineMode {
    Ran,
    Avg,
}

impl BaselineMode {
    pub fn as_str(self) -> &'static str {
        match self {
            BaselineMode::Ran => "ran",
            BaselineMode::Avg => "avg",
        }
    }
}

/// Inclusive range of one measure over the training annotations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Range {
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineSpec {
    pub mode: BaselineMode,
    pub seed: Option<u64>,
    pub capacity: Range,
    pub container_mass: Range,
    pub width_top: Range,
    pub width_bottom: Range,
    pub height: Range,
}

impl BaselineSpec {
    /// Ranges from the training set. Returns `None` for an empty set.
    pub fn from_training(
        mode: BaselineMode,
        seed: Option<u64>,
        train: &[ConfigurationAnnotation],
    ) -> Option<Self> {
        let range = |f: fn(&ConfigurationAnnotation) -> f64| -> Option<Range> {
            let mut it = train.iter().map(f);
            let first = it.next()?;
            Some(it.fold(
                Range {
                    min: first,
                    max: first,
                },
                |r, v| Range {
                    min: r.min.min(v),
                    max: r.max.max(v),
                },
            ))
        };
        Some(BaselineSpec {
            mode,
            seed,
            capacity: range(|a| a.capacity)?,
            container_mass: range(|a| a.container_mass)?,
            width_top: range(|a| a.width_top)?,
            width_bottom: range(|a| a.width_bottom)?,
            height: range(|a| a.height)?,
        })
    }
}

fn draw(rng: &mut ChaCha8Rng, r: Range) -> f64 {
    if r.min < r.max {
        rng.gen_range(r.min..=r.max)
    } else {
        r.min
    }
}

/// Uniform draws over the classes and over the training min-max range of each
/// measure. Each configuration draws from its own stream of the seeded
/// generator, so a record depends only on the seed and its position.
pub fn random_baseline(
    configs: &[String],
    train: &[ConfigurationAnnotation],
    seed: u64,
) -> PredictionSet {
    let name = format!("RAN-{seed}");
    let Some(spec) = BaselineSpec::from_training(BaselineMode::Ran, Some(seed), train) else {
        let records = configs
            .iter()
            .map(PredictionRecord::not_estimated)
            .collect();
        return PredictionSet::new(name, records);
    };
    let records = configs
        .iter()
        .enumerate()
        .map(|(i, id)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            PredictionRecord {
                config_id: id.clone(),
                filling_level: Some(FillingLevel::ALL[rng.gen_range(0..FillingLevel::ALL.len())]),
                filling_type: Some(FillingType::ALL[rng.gen_range(0..FillingType::ALL.len())]),
                capacity: Some(draw(&mut rng, spec.capacity)),
                container_mass: Some(draw(&mut rng, spec.container_mass)),
                width_top: Some(draw(&mut rng, spec.width_top)),
                width_bottom: Some(draw(&mut rng, spec.width_bottom)),
                height: Some(draw(&mut rng, spec.height)),
            }
        })
        .collect();
    PredictionSet::new(name, records)
}

/// Most frequent class; ties resolve to the lowest class index.
fn modal<T: Copy + Ord>(values: impl Iterator<Item = T>) -> Option<T> {
    let mut counts: BTreeMap<T, usize> = BTreeMap::new();
    for v in values {
        *counts.entry(v).or_default() += 1;
    }
    // max_by_key keeps the last maximum, so iterate from the highest key down
    counts
        .into_iter()
        .rev()
        .max_by_key(|&(_, c)| c)
        .map(|(v, _)| v)
}

/// Training means for measures and modal training classes, repeated for every configuration.
pub fn average_baseline(configs: &[String], train: &[ConfigurationAnnotation]) -> PredictionSet {
    let mean = |f: fn(&ConfigurationAnnotation) -> f64| -> Option<f64> {
        if train.is_empty() {
            None
        } else {
            Some(train.iter().map(f).sum::<f64>() / train.len() as f64)
        }
    };
    let template = PredictionRecord {
        config_id: String::new(),
        filling_level: modal(train.iter().map(|a| a.filling_level)),
        filling_type: modal(train.iter().map(|a| a.filling_type)),
        capacity: mean(|a| a.capacity),
        container_mass: mean(|a| a.container_mass),
        width_top: mean(|a| a.width_top),
        width_bottom: mean(|a| a.width_bottom),
        height: mean(|a| a.height),
    };
    let records = configs
        .iter()
        .map(|id| PredictionRecord {
            config_id: id.clone(),
            ..template.clone()
        })
        .collect();
    PredictionSet::new("AVG", records)
}

/// Replaces not-estimated fields of unaddressed tasks with the filler's
/// values. Addressed tasks and the addressed-task set are left unchanged.
pub fn fill_missing_tasks(preds: &PredictionSet, filler: &PredictionSet) -> PredictionSet {
    let filler_index = filler.index();
    let missing: Vec<Task> = Task::ALL
        .into_iter()
        .filter(|t| !preds.tasks_addressed.contains(t))
        .collect();
    let records = preds
        .records
        .iter()
        .map(|r| {
            let mut out = r.clone();
            if let Some(f) = filler_index.get(r.config_id.as_str()) {
                for &task in &missing {
                    out.take_task_from(task, f);
                }
            }
            out
        })
        .collect();
    PredictionSet {
        algorithm_name: preds.algorithm_name.clone(),
        records,
        tasks_addressed: preds.tasks_addressed.clone(),
    }
}
