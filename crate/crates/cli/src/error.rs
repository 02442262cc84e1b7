//! Error categories mapped to stable exit codes: 2 for configuration
//! problems, 3 for parse failures, 4 for I/O. Usage errors raised by the
//! argument parser also exit with 2.

use std::fmt;

use keydyn::ingest::IngestError;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Parse(String),
    Io(String),
}

pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_PARSE: u8 = 3;
pub const EXIT_IO: u8 = 4;

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Parse(_) => EXIT_PARSE,
            CliError::Io(_) => EXIT_IO,
        }
    }

    pub fn io(context: impl fmt::Display, err: impl fmt::Display) -> Self {
        CliError::Io(format!("{context}: {err}"))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "{msg}"),
            CliError::Parse(msg) => write!(f, "{msg}"),
            CliError::Io(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<IngestError> for CliError {
    fn from(e: IngestError) -> Self {
        match e {
            IngestError::Io(err) => CliError::Io(err.to_string()),
            IngestError::Malformed { .. }
            | IngestError::OutOfOrder { .. }
            | IngestError::DuplicateDate(_)
            | IngestError::NoObservedRecords
            | IngestError::Series(_) => CliError::Parse(e.to_string()),
            IngestError::EmptyRange
            | IngestError::RecordOutsideRange(_)
            | IngestError::NoInput
            | IngestError::MixedStreams => CliError::Config(e.to_string()),
        }
    }
}
