//! Evaluation toolkit for audio-visual container property estimation.
//!
//! Scores algorithm submissions (filling level and type, container capacity,
//! mass and dimensions) against annotations, and replays annotated handovers
//! through a deterministic quasi-static simulation to obtain object safety and
//! delivery accuracy.
//!
//! - [`dataset`]: annotation, prediction and pose-track files.
//! - [`scoring`]: per-task scores, group scores and the overall score.
//! - [`simulator`]: handover replay, grasp forces, calibration.
//! - [`baselines`]: random and training-average reference predictions.
//! - [`cli`]: the `corsmal` command-line tool.
//!
//! The `examples/` directory has one runnable program per capability.

pub mod baselines;
pub mod cli;
pub mod dataset;
pub mod error;
pub mod scoring;
pub mod simulator;

pub use error::{Error, Result};
