use std::fmt;

use pum::PumError;

pub const EXIT_USAGE: u8 = 2;
pub const EXIT_IO: u8 = 3;
pub const EXIT_CONFIG: u8 = 4;
pub const EXIT_DATA: u8 = 5;
pub const EXIT_RUNTIME: u8 = 6;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub msg: String,
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        Self { code: EXIT_CONFIG, msg: msg.into() }
    }

    pub fn data(msg: impl Into<String>) -> Self {
        Self { code: EXIT_DATA, msg: msg.into() }
    }

    pub fn io(path: &std::path::Path, e: std::io::Error) -> Self {
        Self { code: EXIT_IO, msg: format!("{}: {e}", path.display()) }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.msg)
    }
}

impl From<PumError> for CliError {
    fn from(e: PumError) -> Self {
        let code = match &e {
            PumError::Io(_) => EXIT_IO,
            PumError::Csv(c) if matches!(c.kind(), csv::ErrorKind::Io(_)) => EXIT_IO,
            PumError::Json(j) if j.is_io() => EXIT_IO,
            PumError::InvalidControl(_) | PumError::InvalidParameter(_) | PumError::InvalidInterval { .. } => {
                EXIT_CONFIG
            }
            PumError::InvalidData(_)
            | PumError::Parse { .. }
            | PumError::UnmappedCode { .. }
            | PumError::DimensionMismatch(_)
            | PumError::UnknownLegislator(_)
            | PumError::AmbiguousLegislator { .. }
            | PumError::NotEnoughDraws(_)
            | PumError::Csv(_)
            | PumError::Json(_) => EXIT_DATA,
        };
        Self { code, msg: e.to_string().replace('\n', " ") }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self { code: EXIT_IO, msg: e.to_string() }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        PumError::from(e).into()
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        PumError::from(e).into()
    }
}

pub type CliResult<T> = Result<T, CliError>;
