use std::fmt;

/// CLI failure, classified by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or configuration, exit code 2.
    Config(String),
    /// Missing, unreadable or malformed data, exit code 3.
    Data(String),
    /// The data make a statistic undefined, exit code 4.
    Degenerate(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Data(_) => 3,
            CliError::Degenerate(_) => 4,
        }
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    pub(crate) fn data(msg: impl Into<String>) -> Self {
        CliError::Data(msg.into())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Data(m) => write!(f, "data error: {m}"),
            CliError::Degenerate(m) => write!(f, "numerical degeneracy: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<exceedance::Error> for CliError {
    fn from(e: exceedance::Error) -> Self {
        use exceedance::Error as E;
        match e {
            E::Domain(_) => CliError::Config(e.to_string()),
            E::DegenerateData(_) => CliError::Degenerate(e.to_string()),
            E::InsufficientData(_) | E::Parse { .. } | E::Io { .. } | E::Csv { .. } | E::Metadata { .. } => {
                CliError::Data(e.to_string())
            }
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
