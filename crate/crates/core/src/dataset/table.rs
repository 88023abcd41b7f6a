//! Header-checked CSV access shared by the three file loaders.

use std::collections::HashMap;
use std::fs::File;
use std::path::{Path, PathBuf};

use csv::StringRecord;

use crate::error::{Error, Result};

pub(crate) struct CsvTable {
    path: PathBuf,
    columns: HashMap<String, usize>,
    rows: Vec<StringRecord>,
}

pub(crate) struct Row<'a> {
    table: &'a CsvTable,
    record: &'a StringRecord,
    /// 1-based data row.
    pub index: usize,
}

impl CsvTable {
    /// Reads the whole file and checks that every `required` column is present.
    pub fn open(path: &Path, required: &[&str]) -> Result<Self> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(file);
        let headers = reader.headers().map_err(|e| Error::csv(path, e))?.clone();
        let columns: HashMap<String, usize> = headers
            .iter()
            .enumerate()
            .map(|(i, name)| (name.to_owned(), i))
            .collect();
        for name in required {
            if !columns.contains_key(*name) {
                return Err(Error::parse(path, None, Some(name), "missing column"));
            }
        }
        let rows = reader
            .records()
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::csv(path, e))?;
        Ok(CsvTable {
            path: path.to_path_buf(),
            columns,
            rows,
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn rows(&self) -> impl Iterator<Item = Row<'_>> {
        self.rows.iter().enumerate().map(move |(i, record)| Row {
            table: self,
            record,
            index: i + 1,
        })
    }
}

impl Row<'_> {
    pub fn error(&self, field: &str, message: impl Into<String>) -> Error {
        Error::parse(&self.table.path, Some(self.index), Some(field), message)
    }

    pub fn str(&self, field: &str) -> Result<&str> {
        let idx = self.table.columns[field];
        self.record
            .get(idx)
            .ok_or_else(|| self.error(field, "missing value"))
    }

    pub fn f64(&self, field: &str) -> Result<f64> {
        let raw = self.str(field)?;
        let value: f64 = raw
            .parse()
            .map_err(|_| self.error(field, format!("non-numeric value `{raw}`")))?;
        if !value.is_finite() {
            return Err(self.error(field, format!("non-finite value `{raw}`")));
        }
        Ok(value)
    }

    pub fn u64(&self, field: &str) -> Result<u64> {
        let raw = self.str(field)?;
        raw.parse().map_err(|_| {
            self.error(
                field,
                format!("expected a non-negative integer, got `{raw}`"),
            )
        })
    }

    pub fn i64(&self, field: &str) -> Result<i64> {
        let raw = self.str(field)?;
        raw.parse()
            .map_err(|_| self.error(field, format!("expected an integer, got `{raw}`")))
    }
}
