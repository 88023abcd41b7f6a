use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use super::config::{ensure_exists, RunConfig};
use super::leaderboard;
use crate::baselines::{average_baseline, fill_missing_tasks, random_baseline, BaselineMode};
use crate::dataset::{
    build_density_table, load_annotations, load_predictions, write_predictions,
    ConfigurationAnnotation, DensityTable, PredictionSet, Split,
};
use crate::error::{Error, Result};
use crate::scoring::{
    estimated_object_mass, evaluate, select_split, EvalOptions, ReplayInput, ScoreReport,
};
use crate::simulator::{load_tracks, simulate, write_trace, SimOptions, SimulationRun};

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> Error + '_ {
    move |e| Error::io(path, e)
}

fn stdout_err(e: std::io::Error) -> Error {
    Error::io(Path::new("<stdout>"), e)
}

fn base_dir(path: &Path) -> PathBuf {
    path.parent()
        .filter(|p| !p.as_os_str().is_empty())
        .map_or_else(|| PathBuf::from("."), Path::to_path_buf)
}

struct Dataset {
    annotations: Vec<ConfigurationAnnotation>,
    base_dir: PathBuf,
}

impl Dataset {
    fn load(cfg: &RunConfig) -> Result<Self> {
        let path = cfg.annotations_path()?;
        Ok(Dataset {
            annotations: load_annotations(path)?,
            base_dir: base_dir(path),
        })
    }

    fn ids(&self) -> Vec<String> {
        self.annotations
            .iter()
            .map(|a| a.config_id.clone())
            .collect()
    }

    fn train(&self) -> Vec<ConfigurationAnnotation> {
        self.annotations
            .iter()
            .filter(|a| a.split == Split::Train)
            .cloned()
            .collect()
    }

    fn densities(&self) -> Result<DensityTable> {
        build_density_table(&self.train())
    }

    fn baseline(&self, mode: BaselineMode, seed: u64) -> PredictionSet {
        let ids = self.ids();
        let train = self.train();
        match mode {
            BaselineMode::Ran => random_baseline(&ids, &train, seed),
            BaselineMode::Avg => average_baseline(&ids, &train),
        }
    }
}

fn object_masses(
    selected: &[&ConfigurationAnnotation],
    predictions: &PredictionSet,
    densities: &DensityTable,
) -> Result<BTreeMap<String, Option<f64>>> {
    let index = predictions.index();
    selected
        .iter()
        .map(|a| {
            let mass = match index.get(a.config_id.as_str()) {
                Some(r) => estimated_object_mass(r, densities)?,
                None => None,
            };
            Ok((a.config_id.clone(), mass))
        })
        .collect()
}

fn print_report(report: &ScoreReport, out: &mut dyn Write) -> Result<()> {
    let doc = report.to_document();
    writeln!(
        out,
        "algorithm: {}  split: {}  tasks: {}  configurations: {}",
        doc.algorithm, doc.split, doc.n_tasks, doc.configurations
    )
    .map_err(stdout_err)?;
    let values = doc.scores.to_array();
    for (l, v) in values.iter().enumerate() {
        let cell = v.map_or_else(|| leaderboard::ABSENT.to_owned(), |x| format!("{x:.2}"));
        writeln!(out, "  s{:<3} {cell:>7}", l + 1).map_err(stdout_err)?;
    }
    let overall = doc
        .scores
        .overall
        .map_or_else(|| leaderboard::ABSENT.to_owned(), |x| format!("{x:.2}"));
    writeln!(out, "  S    {overall:>7}").map_err(stdout_err)?;
    Ok(())
}

fn write_report(report: &ScoreReport, path: &Path) -> Result<()> {
    std::fs::write(path, report.to_json()).map_err(io_err(path))
}

/// `evaluate`: score every prediction file, or replay a score vector.
pub fn cmd_evaluate(cfg: &RunConfig, replay: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    if let Some(path) = replay {
        let text = std::fs::read_to_string(path).map_err(io_err(path))?;
        let input: ReplayInput = serde_json::from_str(&text)
            .map_err(|e| Error::parse(path, None, None, e.to_string()))?;
        let report = ScoreReport::from_replay(&input, cfg.s12_literal)?;
        if let Some(dest) = &cfg.out {
            write_report(&report, dest)?;
        }
        return print_report(&report, out);
    }

    if cfg.predictions.is_empty() {
        return Err(Error::InvalidInput("--predictions is required".into()));
    }
    for p in &cfg.predictions {
        ensure_exists(p)?;
    }
    let data = Dataset::load(cfg)?;
    let densities = data.densities()?;
    let ids = data.ids();
    let selected = select_split(&data.annotations, Some(cfg.split));
    let tracks = if cfg.simulate {
        Some(load_tracks(&selected, &data.base_dir)?)
    } else {
        None
    };
    let filler = cfg.fill_missing.map(|mode| data.baseline(mode, cfg.seed));

    let many = cfg.predictions.len() > 1;
    if many {
        if let Some(dir) = &cfg.out {
            std::fs::create_dir_all(dir).map_err(io_err(dir))?;
        }
    }
    for path in &cfg.predictions {
        let predictions = load_predictions(path, &ids)?;
        let simulation = match &tracks {
            Some(tracks) => {
                let effective = match &filler {
                    Some(f) => fill_missing_tasks(&predictions, f),
                    None => predictions.clone(),
                };
                let masses = object_masses(&selected, &effective, &densities)?;
                let run = simulate(
                    &selected,
                    tracks,
                    &masses,
                    &cfg.sim,
                    &SimOptions {
                        jobs: cfg.jobs,
                        trace: false,
                    },
                )?;
                Some(run.scores())
            }
            None => None,
        };
        let options = EvalOptions {
            split: Some(cfg.split),
            s12_literal: cfg.s12_literal,
            filler: filler.as_ref(),
            filler_name: cfg.fill_missing.map(|m| m.as_str().to_owned()),
            seed: cfg.fill_missing.map(|_| cfg.seed),
        };
        let report = evaluate(
            &data.annotations,
            &predictions,
            &densities,
            simulation,
            &options,
        )?;
        if let Some(dest) = &cfg.out {
            let file = if many {
                dest.join(format!("{}.json", predictions.algorithm_name))
            } else {
                dest.clone()
            };
            write_report(&report, &file)?;
        }
        print_report(&report, out)?;
    }
    Ok(())
}

fn print_outcomes(run: &SimulationRun, out: &mut dyn Write) -> Result<()> {
    writeln!(
        out,
        "{:<12} {:>7} {:>7} {:>8} {:>8} {:>7} {:>7} {:>6} {:>7} {:>6} {:>7} {:>9}",
        "config",
        "reached",
        "grasped",
        "F_appl",
        "F_req",
        "psi",
        "dropped",
        "broken",
        "alpha",
        "beta",
        "delta",
        "discarded"
    )
    .map_err(stdout_err)?;
    for o in &run.outcomes {
        writeln!(
            out,
            "{:<12} {:>7} {:>7} {:>8.3} {:>8.3} {:>7.2} {:>7} {:>6} {:>7.2} {:>6.3} {:>7.2} {:>9}",
            o.config_id,
            o.reached,
            o.grasped,
            o.applied_force,
            o.required_force,
            o.safety * 100.0,
            o.dropped,
            o.broken,
            o.alpha,
            o.beta,
            o.delivery * 100.0,
            o.discarded
        )
        .map_err(stdout_err)?;
    }
    writeln!(
        out,
        "s9 = {:.2}  s10 = {:.2}  (residuals {:.2}, {:.2}; {} discarded)",
        run.safety,
        run.delivery,
        run.calibration.residual_safety,
        run.calibration.residual_delivery,
        run.calibration.discarded.len()
    )
    .map_err(stdout_err)?;
    Ok(())
}

/// `simulate`: calibrate, then replay with predicted (or scaled true) masses.
pub fn cmd_simulate(cfg: &RunConfig, out: &mut dyn Write) -> Result<()> {
    let data = Dataset::load(cfg)?;
    let selected = select_split(&data.annotations, Some(cfg.split));
    if selected.is_empty() {
        return Err(Error::Scoring(format!(
            "split `{}` has no configurations",
            cfg.split
        )));
    }
    let tracks = load_tracks(&selected, &data.base_dir)?;
    let masses = match cfg.predictions.first() {
        Some(path) => {
            ensure_exists(path)?;
            let predictions = load_predictions(path, &data.ids())?;
            let densities = data.densities()?;
            let effective = match cfg.fill_missing {
                Some(mode) => fill_missing_tasks(&predictions, &data.baseline(mode, cfg.seed)),
                None => predictions,
            };
            object_masses(&selected, &effective, &densities)?
        }
        None => selected
            .iter()
            .map(|a| (a.config_id.clone(), Some(a.object_mass() * cfg.mass_scale)))
            .collect(),
    };
    let run = simulate(
        &selected,
        &tracks,
        &masses,
        &cfg.sim,
        &SimOptions {
            jobs: cfg.jobs,
            trace: cfg.trace.is_some(),
        },
    )?;
    if let Some(path) = &cfg.trace {
        write_trace(path, &run.trace)?;
    }
    if let Some(path) = &cfg.out {
        let mut json = serde_json::to_string_pretty(&run.summary()).expect("summary serializes");
        json.push('\n');
        std::fs::write(path, json).map_err(io_err(path))?;
    }
    print_outcomes(&run, out)
}

/// `baseline`: write RAN or AVG predictions for the selected split.
pub fn cmd_baseline(cfg: &RunConfig, mode: BaselineMode, out: &mut dyn Write) -> Result<()> {
    let data = Dataset::load(cfg)?;
    let dest = cfg
        .out
        .as_deref()
        .ok_or_else(|| Error::InvalidInput("--out is required for baseline".into()))?;
    let ids: Vec<String> = select_split(&data.annotations, Some(cfg.split))
        .iter()
        .map(|a| a.config_id.clone())
        .collect();
    let train = data.train();
    if train.is_empty() {
        return Err(Error::InvalidInput(
            "baselines need training annotations".into(),
        ));
    }
    let set = match mode {
        BaselineMode::Ran => random_baseline(&ids, &train, cfg.seed),
        BaselineMode::Avg => average_baseline(&ids, &train),
    };
    write_predictions(dest, &set)?;
    writeln!(
        out,
        "wrote {} {} predictions to {}",
        set.records.len(),
        mode.as_str(),
        dest.display()
    )
    .map_err(stdout_err)
}

/// `leaderboard`: rank reports by S; malformed files are skipped.
pub fn cmd_leaderboard(
    reports: &[PathBuf],
    dest: Option<&Path>,
    out: &mut dyn Write,
    warnings: &mut dyn Write,
) -> Result<()> {
    let mut docs = leaderboard::load_reports(reports, warnings)?;
    leaderboard::rank(&mut docs);
    let table = leaderboard::render(&docs);
    if let Some(path) = dest {
        std::fs::write(path, &table).map_err(io_err(path))?;
    }
    out.write_all(table.as_bytes()).map_err(stdout_err)
}

/// `validate`: parse every input and report what was found.
pub fn cmd_validate(cfg: &RunConfig, out: &mut dyn Write) -> Result<()> {
    let data = Dataset::load(cfg)?;
    let count = |s: Split| data.annotations.iter().filter(|a| a.split == s).count();
    writeln!(
        out,
        "annotations: {} configurations (train {}, public-test {}, private-test {})",
        data.annotations.len(),
        count(Split::Train),
        count(Split::PublicTest),
        count(Split::PrivateTest)
    )
    .map_err(stdout_err)?;

    let all: Vec<&ConfigurationAnnotation> = data.annotations.iter().collect();
    let tracks = load_tracks(&all, &data.base_dir)?;
    writeln!(out, "pose tracks: {} ok", tracks.len()).map_err(stdout_err)?;

    match data.densities() {
        Ok(table) => {
            let kinds: Vec<String> = table
                .per_type
                .iter()
                .map(|(k, v)| format!("{k}={v:.4}"))
                .collect();
            writeln!(out, "densities: {}", kinds.join(" ")).map_err(stdout_err)?;
        }
        Err(e) => writeln!(out, "densities: unavailable ({e})").map_err(stdout_err)?,
    }

    let ids = data.ids();
    for path in &cfg.predictions {
        ensure_exists(path)?;
        let set = load_predictions(path, &ids)?;
        let tasks: Vec<String> = set.tasks_addressed.iter().map(|t| t.to_string()).collect();
        writeln!(
            out,
            "predictions {}: {} records, tasks [{}]",
            path.display(),
            set.records.len(),
            tasks.join(", ")
        )
        .map_err(stdout_err)?;
    }
    Ok(())
}
