//! Per-configuration error measures and the weighted F1 score.

use serde::{Deserialize, Serialize};

use crate::dataset::{DensityTable, FillingLevel, FillingType};
use crate::error::{Error, Result};

/// Precision, recall and F1 of one class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub class: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// Number of configurations whose true class is `class`.
    pub support: usize,
}

/// Weighted average F1 over `num_classes` classes, weighted by class support.
///
/// A `None` prediction, or a label outside `0..num_classes`, is a miss for the
/// true class and a false positive for no class. F1 is 0 when precision and
/// recall are both 0, and classes absent from `truths` carry zero weight.
pub fn weighted_f1(
    preds: &[Option<usize>],
    truths: &[usize],
    num_classes: usize,
) -> Result<(f64, Vec<ClassMetrics>)> {
    if truths.is_empty() {
        return Err(Error::Scoring("weighted F1 of an empty set".into()));
    }
    if preds.len() != truths.len() {
        return Err(Error::Scoring(format!(
            "{} predictions for {} annotations",
            preds.len(),
            truths.len()
        )));
    }
    if let Some(&bad) = truths.iter().find(|&&t| t >= num_classes) {
        return Err(Error::Scoring(format!(
            "true class {bad} outside 0..{num_classes}"
        )));
    }

    let mut tp = vec![0usize; num_classes];
    let mut predicted = vec![0usize; num_classes];
    let mut support = vec![0usize; num_classes];
    for (&pred, &truth) in preds.iter().zip(truths) {
        support[truth] += 1;
        if let Some(p) = pred.filter(|&p| p < num_classes) {
            predicted[p] += 1;
            if p == truth {
                tp[truth] += 1;
            }
        }
    }

    let ratio = |num: usize, den: usize| {
        if den == 0 {
            0.0
        } else {
            num as f64 / den as f64
        }
    };
    let per_class: Vec<ClassMetrics> = (0..num_classes)
        .map(|k| {
            let precision = ratio(tp[k], predicted[k]);
            let recall = ratio(tp[k], support[k]);
            let f1 = if precision + recall > 0.0 {
                2.0 * precision * recall / (precision + recall)
            } else {
                0.0
            };
            ClassMetrics {
                class: k,
                precision,
                recall,
                f1,
                support: support[k],
            }
        })
        .collect();

    let total = truths.len() as f64;
    let score = per_class
        .iter()
        .map(|m| m.support as f64 * m.f1)
        .sum::<f64>()
        / total;
    Ok((score, per_class))
}

/// |a - b| / b.
pub fn relative_abs_error(estimate: f64, truth: f64) -> Result<f64> {
    if truth <= 0.0 {
        return Err(Error::Scoring(format!(
            "relative error against non-positive reference {truth}"
        )));
    }
    Ok((estimate - truth).abs() / truth)
}

/// 1 - |a - b| / b when the gap is smaller than b, else 0.
pub fn sigma1(estimate: f64, truth: f64) -> Result<f64> {
    if truth <= 0.0 {
        return Err(Error::Scoring(format!(
            "normalisation against non-positive reference {truth}"
        )));
    }
    let gap = (estimate - truth).abs();
    Ok(if gap < truth { 1.0 - gap / truth } else { 0.0 })
}

/// Filling mass from level, capacity and the density of the filling type, g.
///
/// Zero for an empty level or no filling; the capacity is then not needed.
pub fn filling_mass(
    level: FillingLevel,
    capacity: Option<f64>,
    kind: FillingType,
    densities: &DensityTable,
) -> Result<f64> {
    if level == FillingLevel::Empty || kind == FillingType::None {
        return Ok(0.0);
    }
    let capacity = capacity
        .filter(|&c| c > 0.0)
        .ok_or_else(|| Error::Scoring("filling mass needs a positive capacity".into()))?;
    let density = densities
        .for_type(kind)
        .ok_or_else(|| Error::Scoring(format!("no density for {kind}")))?;
    Ok(level.fraction() * capacity * density)
}

/// Filling mass error: 0 if both are zero, the estimate itself when only the
/// annotation is zero, relative error otherwise.
pub fn filling_mass_error(estimate: f64, truth: f64) -> f64 {
    if truth == 0.0 {
        estimate
    } else {
        (estimate - truth).abs() / truth
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn perfect_predictions_score_one() {
        let truths = [0, 1, 2, 2, 1, 0, 3];
        let preds: Vec<_> = truths.iter().map(|&t| Some(t)).collect();
        assert_eq!(weighted_f1(&preds, &truths, 4).unwrap().0, 1.0);
    }

    #[test]
    fn six_sample_confusion_case() {
        // F = (1, 2/3, 4/5), each with support 2
        let truths = [0, 0, 1, 1, 2, 2];
        let preds = [0, 0, 1, 2, 2, 2].map(Some);
        let (score, per_class) = weighted_f1(&preds, &truths, 3).unwrap();
        assert_relative_eq!(score, 37.0 / 45.0, epsilon = 1e-15);
        assert!((score - 0.8222).abs() < 5e-5);
        assert_relative_eq!(per_class[1].recall, 0.5);
        assert_relative_eq!(per_class[2].precision, 2.0 / 3.0);
    }

    #[test]
    fn all_wrong_scores_zero() {
        let truths = [0, 1, 2];
        let preds = [1, 2, 0].map(Some);
        assert_eq!(weighted_f1(&preds, &truths, 3).unwrap().0, 0.0);
    }

    #[test]
    fn not_estimated_is_a_miss_without_false_positive() {
        let truths = [0, 0, 1, 1];
        let preds = [Some(0), None, Some(1), Some(1)];
        let (score, per_class) = weighted_f1(&preds, &truths, 2).unwrap();
        // class 0: P=1, R=1/2; class 1: P=1, R=1
        assert_eq!(per_class[0].precision, 1.0);
        assert_eq!(per_class[0].recall, 0.5);
        assert_relative_eq!(score, (2.0 * (2.0 / 3.0) + 2.0) / 4.0);
    }

    #[test]
    fn empty_input_is_error() {
        assert!(weighted_f1(&[], &[], 3).is_err());
    }

    #[test]
    fn relative_error_cases() {
        assert_eq!(relative_abs_error(500.0, 500.0).unwrap(), 0.0);
        assert_eq!(relative_abs_error(750.0, 500.0).unwrap(), 0.5);
        assert_relative_eq!(
            relative_abs_error(0.0001, 1000.0).unwrap(),
            0.9999999,
            epsilon = 1e-15
        );
        assert!(relative_abs_error(1.0, 0.0).is_err());
    }

    #[test]
    fn sigma1_cases() {
        assert_eq!(sigma1(100.0, 100.0).unwrap(), 1.0);
        assert_relative_eq!(sigma1(120.0, 100.0).unwrap(), 0.8);
        assert_eq!(sigma1(200.0, 100.0).unwrap(), 0.0);
        assert_eq!(sigma1(350.0, 100.0).unwrap(), 0.0);
    }

    #[test]
    fn filling_mass_cases() {
        let table = DensityTable::from_type_densities([
            (FillingType::Pasta, 0.5),
            (FillingType::Rice, 0.85),
        ]);
        let water =
            filling_mass(FillingLevel::Half, Some(1000.0), FillingType::Water, &table).unwrap();
        assert_eq!(water, 500.0);
        let empty = filling_mass(FillingLevel::Empty, None, FillingType::Rice, &table).unwrap();
        assert_eq!(empty, 0.0);
        let rice =
            filling_mass(FillingLevel::Full, Some(500.0), FillingType::Rice, &table).unwrap();
        assert_relative_eq!(rice, 382.5, epsilon = 1e-12);
    }

    #[test]
    fn filling_mass_missing_density() {
        let mut table = DensityTable::from_type_densities([(FillingType::Pasta, 0.5)]);
        table.per_type.remove(&FillingType::Rice);
        assert!(filling_mass(FillingLevel::Half, Some(100.0), FillingType::Rice, &table).is_err());
    }

    #[test]
    fn filling_mass_error_branches() {
        assert_eq!(filling_mass_error(0.0, 0.0), 0.0);
        assert_eq!(filling_mass_error(50.0, 0.0), 50.0);
        assert_relative_eq!(filling_mass_error(450.0, 500.0), 0.1);
    }
}
