//! Samples a pose track between keyframes.
//!
//! ```bash
//! cargo run --example pose_interpolation [track.csv]
//! ```

use std::path::PathBuf;

use corsmal_eval::dataset::load_pose_track;

pub fn run(path: Option<PathBuf>) -> corsmal_eval::Result<()> {
    let path = path
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/poses/a.csv"));
    let track = load_pose_track(&path)?;
    let (first, last) = track.frame_range();
    println!(
        "{} keyframes over frames {first}..={last}",
        track.keyframes().len()
    );
    for frame in (first..=last + 10).step_by(5) {
        let pose = track.pose_at(frame)?;
        let t = pose.translation;
        let (roll, pitch, yaw) = pose.rotation.euler_angles();
        println!(
            "{frame:>4}  ({:7.2}, {:7.2}, {:7.2}) mm  rpy ({:.3}, {:.3}, {:.3})",
            t.x, t.y, t.z, roll, pitch, yaw
        );
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
