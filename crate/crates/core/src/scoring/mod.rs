//! Task scores s1..s12 and the overall weighted score.

mod evaluate;
mod metrics;
mod report;
mod tasks;

pub use evaluate::{
    estimated_filling_mass, estimated_object_mass, evaluate, select_split, EvalOptions,
    SimulationScores,
};
pub use metrics::{
    filling_mass, filling_mass_error, relative_abs_error, sigma1, weighted_f1, ClassMetrics,
};
pub use report::{
    ClassBreakdown, ReplayInput, ReportDocument, ReportOptions, ScoreReport, ScoreTable,
    ScoreVector, WeightTable,
};
pub use tasks::{
    capacity_dims_score, capacity_dims_score_literal, joint_class, joint_filling_score,
    overall_score, task_score, weights, Measure, MeasurePair, PerConfigScore, JOINT_CLASSES,
};
