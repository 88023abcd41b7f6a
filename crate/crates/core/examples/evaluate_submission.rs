//! Scores a prediction file against the fixture annotations, including the
//! handover simulation, and prints the per-class breakdown.
//!
//! ```bash
//! cargo run --example evaluate_submission [predictions.csv]
//! ```

use std::collections::BTreeMap;
use std::path::PathBuf;

use corsmal_eval::dataset::{
    build_density_table, load_annotations, load_predictions, Split, SplitSelector,
};
use corsmal_eval::scoring::{estimated_object_mass, evaluate, select_split, EvalOptions};
use corsmal_eval::simulator::{load_tracks, simulate, SimOptions, SimParams};

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn run(predictions: Option<PathBuf>) -> corsmal_eval::Result<()> {
    let root = fixtures();
    let annotations = load_annotations(root.join("annotations.csv"))?;
    let train: Vec<_> = annotations
        .iter()
        .filter(|a| a.split == Split::Train)
        .cloned()
        .collect();
    let densities = build_density_table(&train)?;

    let ids: Vec<String> = annotations.iter().map(|a| a.config_id.clone()).collect();
    let path = predictions.unwrap_or_else(|| root.join("predictions/noisy.csv"));
    let preds = load_predictions(&path, &ids)?;

    let selected = select_split(&annotations, Some(SplitSelector::Combined));
    let tracks = load_tracks(&selected, &root)?;
    let mut masses = BTreeMap::new();
    for ann in &selected {
        let mass = match preds.get(&ann.config_id) {
            Some(r) => estimated_object_mass(r, &densities)?,
            None => None,
        };
        masses.insert(ann.config_id.clone(), mass);
    }
    let sim = simulate(
        &selected,
        &tracks,
        &masses,
        &SimParams::default(),
        &SimOptions::default(),
    )?;

    let options = EvalOptions {
        split: Some(SplitSelector::Combined),
        ..EvalOptions::default()
    };
    let report = evaluate(
        &annotations,
        &preds,
        &densities,
        Some(sim.scores()),
        &options,
    )?;
    println!(
        "{} on {} configurations, {} tasks",
        report.algorithm, report.configurations, report.tasks_addressed
    );
    for l in 1..=12 {
        match report.scores.get(l) {
            Some(s) => println!("  s{l:<3}{:>8.2}", s * 100.0),
            None => println!("  s{l:<3}{:>8}", "--"),
        }
    }
    println!("  S   {:>8.2}", report.overall * 100.0);

    if let Some(classes) = &report.classes {
        for (name, metrics) in [
            ("filling level", &classes.filling_level),
            ("filling type", &classes.filling_type),
        ] {
            println!("{name}:");
            for m in metrics {
                println!(
                    "  class {}  P {:.3}  R {:.3}  F1 {:.3}  n {}",
                    m.class, m.precision, m.recall, m.f1, m.support
                );
            }
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run(std::env::args().nth(1).map(PathBuf::from)) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
