use std::cmp::Ordering;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::scoring::ReportDocument;

pub const ABSENT: &str = "--";

/// Reads the given reports, skipping malformed ones with a warning.
pub fn load_reports(paths: &[PathBuf], warnings: &mut dyn Write) -> Result<Vec<ReportDocument>> {
    if paths.is_empty() {
        return Err(Error::InvalidInput(
            "leaderboard needs at least one report".into(),
        ));
    }
    let mut docs = Vec::new();
    for path in paths {
        let parsed = std::fs::read_to_string(path)
            .map_err(|e| e.to_string())
            .and_then(|text| {
                serde_json::from_str::<ReportDocument>(&text).map_err(|e| e.to_string())
            });
        match parsed {
            Ok(doc) => docs.push(doc),
            Err(msg) => {
                let _ = writeln!(warnings, "warning: skipping {}: {msg}", path.display());
            }
        }
    }
    if docs.is_empty() {
        return Err(Error::parse(
            &paths[0],
            None,
            None,
            "no readable reports for the leaderboard",
        ));
    }
    Ok(docs)
}

/// Orders by overall score, highest first; ties by algorithm name.
pub fn rank(docs: &mut [ReportDocument]) {
    docs.sort_by(|a, b| {
        let sa = a.scores.overall.unwrap_or(f64::NEG_INFINITY);
        let sb = b.scores.overall.unwrap_or(f64::NEG_INFINITY);
        sb.partial_cmp(&sa)
            .unwrap_or(Ordering::Equal)
            .then_with(|| a.algorithm.cmp(&b.algorithm))
    });
}

fn cell(v: Option<f64>) -> String {
    v.map_or_else(|| ABSENT.to_owned(), |x| format!("{x:.2}"))
}

/// Plain-text table, one row per report, in the order given.
pub fn render(docs: &[ReportDocument]) -> String {
    let mut header = vec!["#".to_owned(), "algorithm".to_owned(), "n".to_owned()];
    header.extend((1..=12).map(|l| format!("s{l}")));
    header.push("S".to_owned());

    let rows: Vec<Vec<String>> = docs
        .iter()
        .enumerate()
        .map(|(i, d)| {
            let mut row = vec![
                (i + 1).to_string(),
                d.algorithm.clone(),
                d.n_tasks.to_string(),
            ];
            row.extend(d.scores.to_array().into_iter().map(cell));
            row.push(cell(d.scores.overall));
            row
        })
        .collect();

    let widths: Vec<usize> = (0..header.len())
        .map(|c| {
            rows.iter()
                .map(|r| r[c].len())
                .chain(std::iter::once(header[c].len()))
                .max()
                .unwrap_or(0)
        })
        .collect();

    let mut out = String::new();
    let line = |out: &mut String, cells: &[String]| {
        let parts: Vec<String> = cells
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(c, (s, w))| {
                if c == 1 {
                    format!("{s:<w$}")
                } else {
                    format!("{s:>w$}")
                }
            })
            .collect();
        let _ = writeln!(out, "{}", parts.join("  ").trim_end());
    };
    line(&mut out, &header);
    for row in &rows {
        line(&mut out, row);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scoring::{ReplayInput, ScoreReport, ScoreTable};

    fn doc(name: &str, s: f64, s3: Option<f64>) -> ReportDocument {
        let mut scores = [Some(s); 12];
        scores[2] = s3;
        let input = ReplayInput {
            algorithm: name.into(),
            n_tasks: 5,
            split: None,
            scores: ScoreTable::from_array(scores, None),
        };
        ScoreReport::from_replay(&input, false)
            .unwrap()
            .to_document()
    }

    #[test]
    fn sorted_by_overall_then_name() {
        let mut docs = vec![
            doc("b", 50.0, Some(50.0)),
            doc("c", 80.0, Some(80.0)),
            doc("a", 50.0, Some(50.0)),
        ];
        rank(&mut docs);
        let names: Vec<_> = docs.iter().map(|d| d.algorithm.as_str()).collect();
        assert_eq!(names, ["c", "a", "b"]);
    }

    #[test]
    fn absent_scores_render_as_hyphens() {
        let table = render(&[doc("x", 50.0, None)]);
        let row = table.lines().nth(1).unwrap();
        let cells: Vec<_> = row.split_whitespace().collect();
        // "#", algorithm, n, then s1, s2, s3
        assert_eq!(cells[5], ABSENT);
        assert_eq!(cells[3], "50.00");
    }

    #[test]
    fn all_malformed_is_error() {
        let dir = tempfile::tempdir().unwrap();
        let bad = dir.path().join("bad.json");
        std::fs::write(&bad, "{not json").unwrap();
        let mut warnings = Vec::new();
        assert!(load_reports(&[bad], &mut warnings).is_err());
        assert!(String::from_utf8(warnings).unwrap().contains("skipping"));
    }
}
