use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::fs::File;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::table::{CsvTable, Row};
use super::{FillingLevel, FillingType};
use crate::error::{Error, Result};

pub const PREDICTION_HEADER: [&str; 8] = [
    "config_id",
    "fill_level",
    "fill_type",
    "capacity_ml",
    "mass_g",
    "wt_mm",
    "wb_mm",
    "h_mm",
];

/// File encoding of "not estimated".
const NOT_ESTIMATED: f64 = -1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Task {
    /// Filling level classification.
    T1,
    /// Filling type classification.
    T2,
    /// Container capacity.
    T3,
    /// Container mass.
    T4,
    /// Container dimensions.
    T5,
}

impl Task {
    pub const ALL: [Task; 5] = [Task::T1, Task::T2, Task::T3, Task::T4, Task::T5];
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

pub type TaskSet = BTreeSet<Task>;

/// One algorithm's estimates for a configuration; `None` means not estimated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionRecord {
    pub config_id: String,
    pub filling_level: Option<FillingLevel>,
    pub filling_type: Option<FillingType>,
    pub capacity: Option<f64>,
    pub container_mass: Option<f64>,
    pub width_top: Option<f64>,
    pub width_bottom: Option<f64>,
    pub height: Option<f64>,
}

impl PredictionRecord {
    pub fn not_estimated(config_id: impl Into<String>) -> Self {
        PredictionRecord {
            config_id: config_id.into(),
            filling_level: None,
            filling_type: None,
            capacity: None,
            container_mass: None,
            width_top: None,
            width_bottom: None,
            height: None,
        }
    }

    pub fn estimates(&self, task: Task) -> bool {
        match task {
            Task::T1 => self.filling_level.is_some(),
            Task::T2 => self.filling_type.is_some(),
            Task::T3 => self.capacity.is_some(),
            Task::T4 => self.container_mass.is_some(),
            Task::T5 => {
                self.width_top.is_some() || self.width_bottom.is_some() || self.height.is_some()
            }
        }
    }

    /// Copies every field belonging to `task` from `other`.
    pub(crate) fn take_task_from(&mut self, task: Task, other: &PredictionRecord) {
        match task {
            Task::T1 => self.filling_level = self.filling_level.or(other.filling_level),
            Task::T2 => self.filling_type = self.filling_type.or(other.filling_type),
            Task::T3 => self.capacity = self.capacity.or(other.capacity),
            Task::T4 => self.container_mass = self.container_mass.or(other.container_mass),
            Task::T5 => {
                self.width_top = self.width_top.or(other.width_top);
                self.width_bottom = self.width_bottom.or(other.width_bottom);
                self.height = self.height.or(other.height);
            }
        }
    }

    fn from_row(row: &Row<'_>) -> Result<Self> {
        let level =
            match row.i64("fill_level")? {
                -1 => None,
                code => Some(FillingLevel::from_code(code).ok_or_else(|| {
                    row.error("fill_level", format!("unknown filling level {code}"))
                })?),
            };
        let kind =
            match row.i64("fill_type")? {
                -1 => None,
                code => Some(FillingType::from_code(code).ok_or_else(|| {
                    row.error("fill_type", format!("unknown filling type {code}"))
                })?),
            };
        let measure = |field: &str| -> Result<Option<f64>> {
            let v = row.f64(field)?;
            if v == NOT_ESTIMATED {
                Ok(None)
            } else if v > 0.0 {
                Ok(Some(v))
            } else {
                Err(row.error(
                    field,
                    format!("estimate must be strictly positive or -1, got {v}"),
                ))
            }
        };
        Ok(PredictionRecord {
            config_id: row.str("config_id")?.to_owned(),
            filling_level: level,
            filling_type: kind,
            capacity: measure("capacity_ml")?,
            container_mass: measure("mass_g")?,
            width_top: measure("wt_mm")?,
            width_bottom: measure("wb_mm")?,
            height: measure("h_mm")?,
        })
    }

    fn to_record(&self) -> Vec<String> {
        let num = |v: Option<f64>| v.unwrap_or(NOT_ESTIMATED).to_string();
        vec![
            self.config_id.clone(),
            self.filling_level
                .map_or("-1".to_owned(), |l| l.code().to_string()),
            self.filling_type
                .map_or("-1".to_owned(), |t| t.code().to_string()),
            num(self.capacity),
            num(self.container_mass),
            num(self.width_top),
            num(self.width_bottom),
            num(self.height),
        ]
    }
}

/// All estimates of one algorithm, one record per expected configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionSet {
    pub algorithm_name: String,
    pub records: Vec<PredictionRecord>,
    /// Tasks the algorithm addresses. Computed from the records on
    /// construction and kept as-is when missing tasks are filled in.
    pub tasks_addressed: TaskSet,
}

impl PredictionSet {
    pub fn new(algorithm_name: impl Into<String>, records: Vec<PredictionRecord>) -> Self {
        let tasks_addressed = Task::ALL
            .into_iter()
            .filter(|&t| records.iter().any(|r| r.estimates(t)))
            .collect();
        PredictionSet {
            algorithm_name: algorithm_name.into(),
            records,
            tasks_addressed,
        }
    }

    pub fn get(&self, config_id: &str) -> Option<&PredictionRecord> {
        self.records.iter().find(|r| r.config_id == config_id)
    }

    pub fn task_count(&self) -> usize {
        self.tasks_addressed.len()
    }

    pub fn index(&self) -> HashMap<&str, &PredictionRecord> {
        self.records
            .iter()
            .map(|r| (r.config_id.as_str(), r))
            .collect()
    }
}

/// Parses a prediction CSV. Configurations missing from the file get an
/// all-not-estimated record; the output follows `expected_configs` order.
pub fn load_predictions(
    path: impl AsRef<Path>,
    expected_configs: &[String],
) -> Result<PredictionSet> {
    let path = path.as_ref();
    let table = CsvTable::open(path, &PREDICTION_HEADER)?;
    let mut parsed: HashMap<String, PredictionRecord> = HashMap::new();
    for row in table.rows() {
        let record = PredictionRecord::from_row(&row)?;
        if parsed.contains_key(&record.config_id) {
            return Err(row.error(
                "config_id",
                format!("duplicate config id `{}`", record.config_id),
            ));
        }
        parsed.insert(record.config_id.clone(), record);
    }

    let mut unknown: Vec<&str> = parsed
        .keys()
        .filter(|id| !expected_configs.contains(id))
        .map(String::as_str)
        .collect();
    if !unknown.is_empty() {
        unknown.sort_unstable();
        return Err(Error::parse(
            table.path(),
            None,
            Some("config_id"),
            format!("unknown config ids: {}", unknown.join(", ")),
        ));
    }

    let records = expected_configs
        .iter()
        .map(|id| {
            parsed
                .remove(id)
                .unwrap_or_else(|| PredictionRecord::not_estimated(id.clone()))
        })
        .collect();
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    Ok(PredictionSet::new(name, records))
}

pub fn write_predictions(path: impl AsRef<Path>, set: &PredictionSet) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut writer = csv::Writer::from_writer(file);
    writer
        .write_record(PREDICTION_HEADER)
        .map_err(|e| Error::csv(path, e))?;
    for record in &set.records {
        writer
            .write_record(record.to_record())
            .map_err(|e| Error::csv(path, e))?;
    }
    writer.flush().map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn file(rows: &[&str]) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "{}", PREDICTION_HEADER.join(",")).unwrap();
        for r in rows {
            writeln!(f, "{r}").unwrap();
        }
        f
    }

    fn ids(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("c{i}")).collect()
    }

    #[test]
    fn all_sentinels_address_nothing() {
        let f = file(&["c0,-1,-1,-1,-1,-1,-1,-1", "c1,-1,-1,-1,-1,-1,-1,-1"]);
        let set = load_predictions(f.path(), &ids(2)).unwrap();
        assert!(set.tasks_addressed.is_empty());
        assert_eq!(set.records.len(), 2);
    }

    #[test]
    fn mass_only_addresses_t4() {
        let f = file(&["c0,-1,-1,-1,25.5,-1,-1,-1"]);
        let set = load_predictions(f.path(), &ids(3)).unwrap();
        assert_eq!(set.tasks_addressed, TaskSet::from([Task::T4]));
        assert_eq!(set.records[0].container_mass, Some(25.5));
        // absent rows become not-estimated
        assert_eq!(set.records[2], PredictionRecord::not_estimated("c2"));
    }

    #[test]
    fn duplicate_rows_rejected() {
        let f = file(&["c0,1,1,-1,-1,-1,-1,-1", "c0,1,1,-1,-1,-1,-1,-1"]);
        let err = load_predictions(f.path(), &ids(1)).unwrap_err();
        assert!(err.to_string().contains("duplicate"), "{err}");
    }

    #[test]
    fn unknown_ids_listed() {
        let f = file(&["zz,1,1,-1,-1,-1,-1,-1", "aa,1,1,-1,-1,-1,-1,-1"]);
        let err = load_predictions(f.path(), &ids(1)).unwrap_err().to_string();
        assert!(err.contains("aa, zz"), "{err}");
    }

    #[test]
    fn zero_estimate_rejected() {
        let f = file(&["c0,1,1,0,-1,-1,-1,-1"]);
        let err = load_predictions(f.path(), &ids(1)).unwrap_err().to_string();
        assert!(err.contains("capacity_ml"), "{err}");
    }

    #[test]
    fn bad_class_code_rejected() {
        let f = file(&["c0,3,1,-1,-1,-1,-1,-1"]);
        assert!(load_predictions(f.path(), &ids(1)).is_err());
    }

    #[test]
    fn any_dimension_addresses_t5() {
        let f = file(&["c0,-1,-1,-1,-1,-1,-1,120"]);
        let set = load_predictions(f.path(), &ids(1)).unwrap();
        assert_eq!(set.tasks_addressed, TaskSet::from([Task::T5]));
    }
}
