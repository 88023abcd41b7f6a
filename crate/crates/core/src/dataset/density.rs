use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{ConfigurationAnnotation, FillingType};
use crate::error::{Error, Result};

const WATER_DENSITY: f64 = 1.0;

/// Filling densities in g/mL, per container and per filling type.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityTable {
    /// container id -> filling type -> density
    pub per_container: BTreeMap<String, BTreeMap<FillingType, f64>>,
    /// Mean over containers; used for containers not seen in training.
    pub per_type: BTreeMap<FillingType, f64>,
}

impl DensityTable {
    /// Table holding only the given per-type densities, plus water.
    pub fn from_type_densities(densities: impl IntoIterator<Item = (FillingType, f64)>) -> Self {
        let mut per_type: BTreeMap<_, _> = densities.into_iter().collect();
        per_type.insert(FillingType::Water, WATER_DENSITY);
        DensityTable {
            per_container: BTreeMap::new(),
            per_type,
        }
    }

    /// Type-level density, the value used for a classified filling type.
    pub fn for_type(&self, kind: FillingType) -> Option<f64> {
        if kind == FillingType::Water {
            return Some(WATER_DENSITY);
        }
        self.per_type.get(&kind).copied()
    }

    /// Container-specific density, falling back to the type-level value.
    pub fn for_container(&self, container_id: &str, kind: FillingType) -> Option<f64> {
        if kind == FillingType::Water {
            return Some(WATER_DENSITY);
        }
        self.per_container
            .get(container_id)
            .and_then(|m| m.get(&kind).copied())
            .or_else(|| self.for_type(kind))
    }
}

/// Derives pasta and rice densities from training annotations as
/// mass / (level x capacity), averaged per container then across containers.
/// Water is fixed at 1 g/mL.
pub fn build_density_table(train: &[ConfigurationAnnotation]) -> Result<DensityTable> {
    // container -> type -> samples; samples are summed in sorted order so the
    // result does not depend on row order
    let mut samples: BTreeMap<&str, BTreeMap<FillingType, Vec<f64>>> = BTreeMap::new();
    for ann in train {
        if matches!(ann.filling_type, FillingType::None | FillingType::Water) {
            continue;
        }
        let volume = ann.filling_level.fraction() * ann.capacity;
        if volume <= 0.0 || ann.filling_mass <= 0.0 {
            continue;
        }
        samples
            .entry(ann.container_id.as_str())
            .or_default()
            .entry(ann.filling_type)
            .or_default()
            .push(ann.filling_mass / volume);
    }

    let mut per_container: BTreeMap<String, BTreeMap<FillingType, f64>> = BTreeMap::new();
    let mut type_sums: BTreeMap<FillingType, (f64, usize)> = BTreeMap::new();
    for (container, by_type) in &mut samples {
        let densities = per_container.entry((*container).to_owned()).or_default();
        for (&kind, values) in by_type.iter_mut() {
            values.sort_by(f64::total_cmp);
            let rho = values.iter().sum::<f64>() / values.len() as f64;
            densities.insert(kind, rho);
            let acc = type_sums.entry(kind).or_insert((0.0, 0));
            acc.0 += rho;
            acc.1 += 1;
        }
        densities.insert(FillingType::Water, WATER_DENSITY);
    }

    let mut per_type = BTreeMap::new();
    for kind in [FillingType::Pasta, FillingType::Rice] {
        let (sum, count) = type_sums.get(&kind).copied().ok_or_else(|| {
            Error::InvalidInput(format!("no training sample with {kind} filling"))
        })?;
        per_type.insert(kind, sum / count as f64);
    }
    per_type.insert(FillingType::Water, WATER_DENSITY);

    Ok(DensityTable {
        per_container,
        per_type,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{ContainerCategory, FillingLevel, Split};
    use std::path::PathBuf;

    fn ann(
        container: &str,
        kind: FillingType,
        level: FillingLevel,
        capacity: f64,
        mass: f64,
    ) -> ConfigurationAnnotation {
        ConfigurationAnnotation {
            config_id: format!("{container}-{kind}-{}-{mass}", level.code()),
            container_id: container.into(),
            category: ContainerCategory::Cup,
            capacity,
            container_mass: 10.0,
            width_top: 80.0,
            width_bottom: 60.0,
            height: 100.0,
            filling_type: kind,
            filling_level: level,
            filling_mass: mass,
            handover_frame: 0,
            frame_rate: 30.0,
            pose_track: PathBuf::from("p.csv"),
            target: [0.0; 3],
            split: Split::Train,
        }
    }

    fn base() -> Vec<ConfigurationAnnotation> {
        vec![
            ann("a", FillingType::Pasta, FillingLevel::Half, 1000.0, 300.0),
            ann("a", FillingType::Rice, FillingLevel::Half, 1000.0, 400.0),
        ]
    }

    #[test]
    fn direct_formula() {
        let table = build_density_table(&base()).unwrap();
        assert_eq!(table.per_container["a"][&FillingType::Pasta], 0.6);
        assert_eq!(table.for_type(FillingType::Pasta), Some(0.6));
    }

    #[test]
    fn water_is_fixed() {
        let mut train = base();
        // annotated water mass is slightly off; density stays 1
        train.push(ann(
            "a",
            FillingType::Water,
            FillingLevel::Full,
            1000.0,
            905.0,
        ));
        let table = build_density_table(&train).unwrap();
        assert_eq!(table.for_type(FillingType::Water), Some(1.0));
        assert_eq!(table.for_container("a", FillingType::Water), Some(1.0));
        assert_eq!(table.per_type[&FillingType::Water], 1.0);
    }

    #[test]
    fn container_mean() {
        let mut train = base();
        train.push(ann(
            "b",
            FillingType::Pasta,
            FillingLevel::Half,
            1000.0,
            300.0,
        ));
        train.push(ann(
            "b",
            FillingType::Pasta,
            FillingLevel::Half,
            1000.0,
            400.0,
        ));
        let table = build_density_table(&train).unwrap();
        assert!((table.per_container["b"][&FillingType::Pasta] - 0.7).abs() < 1e-15);
        // fallback is the mean over containers a (0.6) and b (0.7)
        assert!((table.for_type(FillingType::Pasta).unwrap() - 0.65).abs() < 1e-15);
        assert_eq!(table.for_container("unseen", FillingType::Rice), Some(0.8));
    }

    #[test]
    fn missing_type_is_error() {
        let train = vec![ann(
            "a",
            FillingType::Pasta,
            FillingLevel::Half,
            1000.0,
            300.0,
        )];
        let err = build_density_table(&train).unwrap_err().to_string();
        assert!(err.contains("rice"), "{err}");
    }

    #[test]
    fn order_invariant() {
        let mut train = base();
        train.push(ann(
            "b",
            FillingType::Rice,
            FillingLevel::Full,
            500.0,
            380.0,
        ));
        train.push(ann(
            "c",
            FillingType::Pasta,
            FillingLevel::Full,
            700.0,
            290.0,
        ));
        let forward = build_density_table(&train).unwrap();
        train.reverse();
        assert_eq!(forward, build_density_table(&train).unwrap());
    }
}
