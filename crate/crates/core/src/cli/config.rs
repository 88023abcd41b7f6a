//! Run configuration: command-line flags layered over an optional TOML file.
//!
//! Precedence is flag, then config file, then built-in default. Relative
//! paths in the config file resolve against the file's directory.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::baselines::BaselineMode;
use crate::dataset::SplitSelector;
use crate::error::{Error, Result};
use crate::simulator::SimParams;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub annotations: Option<PathBuf>,
    pub predictions: Option<OneOrMany>,
    pub split: Option<String>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub jobs: Option<usize>,
    pub fill_missing: Option<BaselineMode>,
    pub s12_literal: Option<bool>,
    pub no_sim: Option<bool>,
    pub trace: Option<PathBuf>,
    pub mass_scale: Option<f64>,
    pub replay: Option<PathBuf>,
    /// Simulation parameter overrides, same keys as `--param`.
    #[serde(default)]
    pub sim: BTreeMap<String, toml::Value>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany {
    One(PathBuf),
    Many(Vec<PathBuf>),
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg: FileConfig =
            toml::from_str(&text).map_err(|e| Error::parse(path, None, None, e.to_string()))?;
        let dir = path.parent().unwrap_or(Path::new("."));
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = dir.join(&*p);
            }
        };
        if let Some(p) = cfg.annotations.as_mut() {
            fix(p);
        }
        if let Some(p) = cfg.out.as_mut() {
            fix(p);
        }
        if let Some(p) = cfg.trace.as_mut() {
            fix(p);
        }
        if let Some(p) = cfg.replay.as_mut() {
            fix(p);
        }
        match cfg.predictions.as_mut() {
            Some(OneOrMany::One(p)) => fix(p),
            Some(OneOrMany::Many(ps)) => ps.iter_mut().for_each(fix),
            None => {}
        }
        Ok(cfg)
    }

    fn predictions(&self) -> Vec<PathBuf> {
        match &self.predictions {
            Some(OneOrMany::One(p)) => vec![p.clone()],
            Some(OneOrMany::Many(ps)) => ps.clone(),
            None => Vec::new(),
        }
    }
}

/// Flags shared by the commands, as given on the command line.
#[derive(Debug, Clone, Default)]
pub struct FlagValues {
    pub annotations: Option<PathBuf>,
    pub predictions: Vec<PathBuf>,
    pub split: Option<SplitSelector>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub jobs: Option<usize>,
    pub config: Option<PathBuf>,
    pub fill_missing: Option<BaselineMode>,
    pub s12_literal: bool,
    pub no_sim: bool,
    pub trace: Option<PathBuf>,
    pub mass_scale: Option<f64>,
    pub replay: Option<PathBuf>,
    pub params: Vec<String>,
}

/// Fully resolved settings of one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub annotations: Option<PathBuf>,
    pub predictions: Vec<PathBuf>,
    pub split: SplitSelector,
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub jobs: Option<usize>,
    pub fill_missing: Option<BaselineMode>,
    pub s12_literal: bool,
    pub simulate: bool,
    pub trace: Option<PathBuf>,
    pub mass_scale: f64,
    pub replay: Option<PathBuf>,
    pub sim: SimParams,
}

pub const DEFAULT_SEED: u64 = 0;

impl RunConfig {
    pub fn resolve(flags: &FlagValues) -> Result<Self> {
        let file = match &flags.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        let split = match (flags.split, &file.split) {
            (Some(s), _) => s,
            (None, Some(raw)) => SplitSelector::parse(raw).ok_or_else(|| {
                Error::InvalidInput(format!("unknown split `{raw}` in config file"))
            })?,
            (None, None) => SplitSelector::Combined,
        };

        let mut sim = SimParams::default();
        for (key, value) in &file.sim {
            let text = match value {
                toml::Value::String(s) => s.clone(),
                toml::Value::Array(items) => items
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(","),
                other => other.to_string(),
            };
            sim.set(key, &text)?;
        }
        for kv in &flags.params {
            let (key, value) = kv
                .split_once('=')
                .ok_or_else(|| Error::InvalidInput(format!("expected key=value, got `{kv}`")))?;
            sim.set(key.trim(), value)?;
        }
        sim.validate()?;

        let predictions = if flags.predictions.is_empty() {
            file.predictions()
        } else {
            flags.predictions.clone()
        };
        let jobs = flags.jobs.or(file.jobs);
        if jobs == Some(0) {
            return Err(Error::InvalidInput("--jobs must be at least 1".into()));
        }
        let mass_scale = flags.mass_scale.or(file.mass_scale).unwrap_or(1.0);
        if !(mass_scale >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "mass scale must be non-negative, got {mass_scale}"
            )));
        }

        Ok(RunConfig {
            annotations: flags.annotations.clone().or(file.annotations),
            predictions,
            split,
            out: flags.out.clone().or(file.out),
            seed: flags.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
            jobs,
            fill_missing: flags.fill_missing.or(file.fill_missing),
            s12_literal: flags.s12_literal || file.s12_literal.unwrap_or(false),
            simulate: !(flags.no_sim || file.no_sim.unwrap_or(false)),
            trace: flags.trace.clone().or(file.trace),
            mass_scale,
            replay: flags.replay.clone().or(file.replay),
            sim,
        })
    }

    pub fn annotations_path(&self) -> Result<&Path> {
        let path = self
            .annotations
            .as_deref()
            .ok_or_else(|| Error::InvalidInput("--annotations is required".into()))?;
        ensure_exists(path)?;
        Ok(path)
    }
}

pub fn ensure_exists(path: &Path) -> Result<()> {
    if path.exists() {
        Ok(())
    } else {
        Err(Error::io(
            path,
            std::io::Error::new(std::io::ErrorKind::NotFound, "file not found"),
        ))
    }
}
