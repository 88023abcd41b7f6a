use std::fmt;
use std::path::{Path, PathBuf};

/// Location of a malformed value inside an input file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Location {
    pub path: PathBuf,
    /// 1-based data row (the header is not counted).
    pub row: Option<usize>,
    pub field: Option<String>,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.path.display())?;
        if let Some(row) = self.row {
            write!(f, ", row {row}")?;
        }
        if let Some(field) = &self.field {
            write!(f, ", field `{field}`")?;
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{location}: {message}")]
    Parse { location: Location, message: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("scoring failed: {0}")]
    Scoring(String),

    #[error("simulation failed: {0}")]
    Simulation(String),
}

impl Error {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        Error::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub(crate) fn parse(
        path: &Path,
        row: Option<usize>,
        field: Option<&str>,
        message: impl Into<String>,
    ) -> Self {
        Error::Parse {
            location: Location {
                path: path.to_path_buf(),
                row,
                field: field.map(str::to_owned),
            },
            message: message.into(),
        }
    }

    pub(crate) fn csv(path: &Path, err: csv::Error) -> Self {
        let row = err
            .position()
            .map(|p| (p.line() as usize).saturating_sub(1));
        match err.into_kind() {
            csv::ErrorKind::Io(source) => Error::io(path, source),
            other => Error::parse(path, row, None, format!("{other:?}")),
        }
    }

    /// Process exit code: 2 for I/O and parse failures, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } | Error::Parse { .. } => 2,
            Error::InvalidInput(_) | Error::Scoring(_) | Error::Simulation(_) => 1,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
