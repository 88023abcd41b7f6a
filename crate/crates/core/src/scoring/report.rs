//! Score report and its JSON document form.
//!
//! Scores are held in [0, 1] and converted to percentages rounded to two
//! decimals only when a [`ReportDocument`] is produced.

use serde::{Deserialize, Serialize};

use super::metrics::ClassMetrics;
use super::tasks::{
    capacity_dims_score, capacity_dims_score_literal, overall_score, weights, PerConfigScore,
};
use crate::error::{Error, Result};
use crate::simulator::SimulationSummary;

/// s1..s12 in [0, 1]; `None` for scores of tasks not addressed.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ScoreVector(pub [Option<f64>; 12]);

impl ScoreVector {
    /// Score `s_l` for `l` in 1..=12.
    pub fn get(&self, l: usize) -> Option<f64> {
        self.0[l - 1]
    }

    pub fn set(&mut self, l: usize, value: Option<f64>) {
        self.0[l - 1] = value;
    }

    /// s1..s10 with absent scores as 0, the input of the overall score.
    pub fn direct_and_indirect(&self) -> [f64; 10] {
        std::array::from_fn(|i| self.0[i].unwrap_or(0.0))
    }

    /// Group score s12 from s3 and the dimension scores; `None` when none of
    /// its inputs are present.
    pub fn capacity_dims(&self, literal: bool) -> Option<f64> {
        let inputs = if literal { [3, 4, 5, 6] } else { [3, 5, 6, 7] };
        if inputs.iter().all(|&l| self.get(l).is_none()) {
            return None;
        }
        let v = |l| self.get(l).unwrap_or(0.0);
        Some(if literal {
            capacity_dims_score_literal(v(3), v(4), v(5), v(6))
        } else {
            capacity_dims_score(v(3), v(5), v(6), v(7))
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassBreakdown {
    pub filling_level: Vec<ClassMetrics>,
    pub filling_type: Vec<ClassMetrics>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreReport {
    pub algorithm: String,
    pub split: String,
    pub tasks_addressed: usize,
    pub configurations: usize,
    pub scores: ScoreVector,
    /// Overall score S in [0, 1].
    pub overall: f64,
    pub weights: [f64; 10],
    pub per_config: Vec<PerConfigScore>,
    pub classes: Option<ClassBreakdown>,
    pub simulation: Option<SimulationSummary>,
    pub options: ReportOptions,
}

/// Settings echoed into the report so a run is self-describing.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ReportOptions {
    pub s12_literal: bool,
    pub fill_missing: Option<String>,
    pub seed: Option<u64>,
    pub replay: bool,
}

impl ScoreReport {
    /// Report built from already computed s1..s11 (s12 and S are derived).
    pub fn from_scores(
        algorithm: impl Into<String>,
        split: impl Into<String>,
        tasks_addressed: usize,
        mut scores: ScoreVector,
        options: ReportOptions,
    ) -> Self {
        scores.set(12, scores.capacity_dims(options.s12_literal));
        let overall = overall_score(&scores.direct_and_indirect(), tasks_addressed);
        ScoreReport {
            algorithm: algorithm.into(),
            split: split.into(),
            tasks_addressed,
            configurations: 0,
            scores,
            overall,
            weights: weights(tasks_addressed),
            per_config: Vec::new(),
            classes: None,
            simulation: None,
            options,
        }
    }

    /// Replays a pre-computed score vector (percentages) through the
    /// aggregation: s12 and S are recomputed, s11 is taken as given.
    pub fn from_replay(input: &ReplayInput, s12_literal: bool) -> Result<Self> {
        if input.n_tasks > 5 {
            return Err(Error::InvalidInput(format!(
                "n_tasks must be in 0..=5, got {}",
                input.n_tasks
            )));
        }
        let percent = input.scores.to_array();
        let mut scores = ScoreVector::default();
        for (l, value) in percent.iter().enumerate().take(11) {
            if let Some(v) = value {
                if !(0.0..=100.0).contains(v) {
                    return Err(Error::InvalidInput(format!(
                        "s{} = {v} outside [0, 100]",
                        l + 1
                    )));
                }
                scores.0[l] = Some(v / 100.0);
            }
        }
        let options = ReportOptions {
            s12_literal,
            replay: true,
            ..ReportOptions::default()
        };
        Ok(Self::from_scores(
            input.algorithm.clone(),
            input.split.clone().unwrap_or_else(|| "replay".into()),
            input.n_tasks,
            scores,
            options,
        ))
    }

    pub fn to_document(&self) -> ReportDocument {
        let percent = |v: f64| round2(v * 100.0);
        let mut table = [None; 12];
        for (slot, v) in table.iter_mut().zip(self.scores.0) {
            *slot = v.map(percent);
        }
        ReportDocument {
            algorithm: self.algorithm.clone(),
            split: self.split.clone(),
            n_tasks: self.tasks_addressed,
            configurations: self.configurations,
            scores: ScoreTable::from_array(table, Some(percent(self.overall))),
            weights: WeightTable::from(self.weights),
            options: self.options.clone(),
            classes: self.classes.clone(),
            simulation: self.simulation.clone(),
            per_config: self.per_config.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_document())
            .expect("report serialization cannot fail");
        s.push('\n');
        s
    }
}

fn round2(v: f64) -> f64 {
    (v * 100.0).round() / 100.0
}

/// JSON form of a [`ScoreReport`]; scores in percent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub algorithm: String,
    pub split: String,
    pub n_tasks: usize,
    #[serde(default)]
    pub configurations: usize,
    pub scores: ScoreTable,
    pub weights: WeightTable,
    #[serde(default)]
    pub options: ReportOptions,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classes: Option<ClassBreakdown>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simulation: Option<SimulationSummary>,
    #[serde(default)]
    pub per_config: Vec<PerConfigScore>,
}

/// Score vector accepted by the replay mode, percentages.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplayInput {
    pub algorithm: String,
    pub n_tasks: usize,
    #[serde(default)]
    pub split: Option<String>,
    pub scores: ScoreTable,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ScoreTable {
    #[serde(default)]
    pub s1: Option<f64>,
    #[serde(default)]
    pub s2: Option<f64>,
    #[serde(default)]
    pub s3: Option<f64>,
    #[serde(default)]
    pub s4: Option<f64>,
    #[serde(default)]
    pub s5: Option<f64>,
    #[serde(default)]
    pub s6: Option<f64>,
    #[serde(default)]
    pub s7: Option<f64>,
    #[serde(default)]
    pub s8: Option<f64>,
    #[serde(default)]
    pub s9: Option<f64>,
    #[serde(default)]
    pub s10: Option<f64>,
    #[serde(default)]
    pub s11: Option<f64>,
    #[serde(default)]
    pub s12: Option<f64>,
    #[serde(rename = "S", default)]
    pub overall: Option<f64>,
}

impl ScoreTable {
    pub fn to_array(&self) -> [Option<f64>; 12] {
        [
            self.s1, self.s2, self.s3, self.s4, self.s5, self.s6, self.s7, self.s8, self.s9,
            self.s10, self.s11, self.s12,
        ]
    }

    pub fn from_array(v: [Option<f64>; 12], overall: Option<f64>) -> Self {
        let [s1, s2, s3, s4, s5, s6, s7, s8, s9, s10, s11, s12] = v;
        ScoreTable {
            s1,
            s2,
            s3,
            s4,
            s5,
            s6,
            s7,
            s8,
            s9,
            s10,
            s11,
            s12,
            overall,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct WeightTable {
    pub pi1: f64,
    pub pi2: f64,
    pub pi3: f64,
    pub pi4: f64,
    pub pi5: f64,
    pub pi6: f64,
    pub pi7: f64,
    pub pi8: f64,
    pub pi9: f64,
    pub pi10: f64,
}

impl From<[f64; 10]> for WeightTable {
    fn from(w: [f64; 10]) -> Self {
        let [pi1, pi2, pi3, pi4, pi5, pi6, pi7, pi8, pi9, pi10] = w;
        WeightTable {
            pi1,
            pi2,
            pi3,
            pi4,
            pi5,
            pi6,
            pi7,
            pi8,
            pi9,
            pi10,
        }
    }
}
