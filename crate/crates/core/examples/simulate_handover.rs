//! Replays one handover with the true object mass scaled up and down, showing
//! how the grasp ratio maps to slipping, dropping and breaking.
//!
//! ```bash
//! cargo run --example simulate_handover [config_id]
//! ```

use std::path::PathBuf;

use corsmal_eval::dataset::{load_annotations, load_pose_track};
use corsmal_eval::simulator::{run_handover, SimParams};

pub fn run(config: &str) -> corsmal_eval::Result<()> {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let annotations = load_annotations(root.join("annotations.csv"))?;
    let ann = annotations
        .iter()
        .find(|a| a.config_id == config)
        .ok_or_else(|| corsmal_eval::Error::InvalidInput(format!("no config `{config}`")))?;
    let track = load_pose_track(ann.resolve_pose_path(&root))?;
    let params = SimParams::default();

    println!(
        "{}: {} with {} ({} g total), target {:?}",
        ann.config_id,
        ann.category.as_str(),
        ann.filling_type,
        ann.object_mass(),
        ann.target
    );
    println!(
        "{:>6} {:>8} {:>7} {:>7} {:>7} {:>7}",
        "scale", "psi", "drop", "break", "alpha", "delta"
    );
    for scale in [0.25, 0.4, 0.5, 0.75, 1.0, 1.5, 3.0, 3.5] {
        let o = run_handover(ann, &track, Some(ann.object_mass() * scale), &params)?;
        println!(
            "{scale:>6.2} {:>8.4} {:>7} {:>7} {:>7.2} {:>7.3}",
            o.safety, o.dropped, o.broken, o.alpha, o.delivery
        );
    }
    let blind = run_handover(ann, &track, None, &params)?;
    println!(
        "no mass estimate: grasped {}, safety {}",
        blind.grasped, blind.safety
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    let config = std::env::args().nth(1).unwrap_or_else(|| "C5-4".to_owned());
    if let Err(e) = run(&config) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
