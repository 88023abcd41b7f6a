//! Writes score reports for the fixture submissions and the replayed columns,
//! then ranks them.
//!
//! ```bash
//! cargo run --example leaderboard
//! ```

use std::path::PathBuf;

use corsmal_eval::cli::main_with_args;

pub fn run() -> corsmal_eval::Result<()> {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let out = std::env::temp_dir().join(format!("corsmal-leaderboard-{}", std::process::id()));
    std::fs::create_dir_all(&out).map_err(|e| corsmal_eval::Error::InvalidInput(e.to_string()))?;
    let root_s = |p: &str| root.join(p).to_string_lossy().into_owned();

    let mut sink = Vec::new();
    let mut err = Vec::new();
    let code = main_with_args(
        [
            "corsmal",
            "evaluate",
            "--annotations",
            &root_s("annotations.csv"),
            "--predictions",
            &root_s("predictions/noisy.csv"),
            "--predictions",
            &root_s("predictions/levels_types.csv"),
            "--fill-missing",
            "avg",
            "--out",
            &out.to_string_lossy(),
        ],
        &mut sink,
        &mut err,
    );
    if code != 0 {
        return Err(corsmal_eval::Error::InvalidInput(
            String::from_utf8_lossy(&err).into_owned(),
        ));
    }
    for name in ["A3", "A2", "prior-b"] {
        let dest = out.join(format!("{name}.json"));
        main_with_args(
            [
                "corsmal",
                "evaluate",
                "--replay",
                &root_s(&format!("published/{name}.json")),
                "--out",
                &dest.to_string_lossy(),
            ],
            &mut sink,
            &mut err,
        );
    }

    let mut args = vec!["corsmal".to_owned(), "leaderboard".to_owned()];
    let mut reports: Vec<PathBuf> = std::fs::read_dir(&out)
        .map_err(|e| corsmal_eval::Error::InvalidInput(e.to_string()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .collect();
    reports.sort();
    args.extend(reports.iter().map(|p| p.to_string_lossy().into_owned()));
    let mut table = Vec::new();
    main_with_args(args, &mut table, &mut err);
    print!("{}", String::from_utf8_lossy(&table));
    let _ = std::fs::remove_dir_all(&out);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
