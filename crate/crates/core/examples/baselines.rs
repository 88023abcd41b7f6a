//! Builds the random and training-average baselines and scores them without
//! the simulator.
//!
//! ```bash
//! cargo run --example baselines [seed]
//! ```

use std::path::PathBuf;

use corsmal_eval::baselines::{average_baseline, random_baseline};
use corsmal_eval::dataset::{build_density_table, load_annotations, Split, SplitSelector};
use corsmal_eval::scoring::{evaluate, EvalOptions};

pub fn run(seed: u64) -> corsmal_eval::Result<()> {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let annotations = load_annotations(root.join("annotations.csv"))?;
    let train: Vec<_> = annotations
        .iter()
        .filter(|a| a.split == Split::Train)
        .cloned()
        .collect();
    let densities = build_density_table(&train)?;
    let ids: Vec<String> = annotations
        .iter()
        .filter(|a| a.split != Split::Train)
        .map(|a| a.config_id.clone())
        .collect();

    for set in [
        random_baseline(&ids, &train, seed),
        average_baseline(&ids, &train),
    ] {
        let first = &set.records[0];
        println!(
            "{}: first record level {:?} type {:?} capacity {:.1?} mass {:.1?}",
            set.algorithm_name,
            first.filling_level,
            first.filling_type,
            first.capacity,
            first.container_mass
        );
        let options = EvalOptions {
            split: Some(SplitSelector::Combined),
            ..EvalOptions::default()
        };
        let report = evaluate(&annotations, &set, &densities, None, &options)?;
        let row: Vec<String> = (1..=12)
            .map(|l| {
                report
                    .scores
                    .get(l)
                    .map_or("--".to_owned(), |s| format!("{:.1}", s * 100.0))
            })
            .collect();
        println!("  {}  S {:.2}", row.join(" "), report.overall * 100.0);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    let seed = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(0);
    if let Err(e) = run(seed) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
