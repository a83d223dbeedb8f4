use std::fmt;

/// Everything that can stop a command, mapped onto the process exit code.
#[derive(Debug)]
pub enum CliError {
    Core(treasury_core::Error),
    /// Missing or conflicting flags.
    Usage(String),
    /// Unreadable files, malformed CSV/JSON, failed writes.
    Io(String),
}

impl CliError {
    /// 2 for domain errors, 1 for everything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(treasury_core::Error::Domain(_)) => 2,
            _ => 1,
        }
    }

    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn io(msg: impl Into<String>) -> Self {
        CliError::Io(msg.into())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Io(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<treasury_core::Error> for CliError {
    fn from(e: treasury_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(format!("csv: {e}"))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(format!("json: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;
