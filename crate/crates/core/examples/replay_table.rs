//! Aggregates published score columns with the overall-score weighting and
//! compares against the published totals.
//!
//! ```bash
//! cargo run --example replay_table
//! ```

use std::path::PathBuf;

use corsmal_eval::scoring::{ReplayInput, ScoreReport};
use serde::Deserialize;

#[derive(Deserialize)]
struct Published {
    #[serde(rename = "S")]
    overall: f64,
}

#[derive(Deserialize)]
struct Column {
    #[serde(flatten)]
    input: ReplayInput,
    expected: Published,
}

pub fn run() -> corsmal_eval::Result<()> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/published");
    let mut names: Vec<PathBuf> = std::fs::read_dir(&dir)
        .map_err(|e| corsmal_eval::Error::InvalidInput(e.to_string()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .collect();
    names.sort();

    println!(
        "{:<10} {:>2} {:>9} {:>9} {:>9}",
        "column", "n", "S", "published", "unrounded"
    );
    for path in names {
        let text = std::fs::read_to_string(&path).expect("readable column");
        let col: Column = serde_json::from_str(&text).expect("column JSON");
        let report = ScoreReport::from_replay(&col.input, false)?;
        let doc = report.to_document();
        println!(
            "{:<10} {:>2} {:>9.2} {:>9.2} {:>9.4}",
            doc.algorithm,
            doc.n_tasks,
            doc.scores.overall.unwrap_or(f64::NAN),
            col.expected.overall,
            report.overall * 100.0
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
