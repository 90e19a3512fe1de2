use std::fmt;

/// Usage errors exit with 1, data errors with 2.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(anyhow::Error),
}

impl CliError {
    pub fn data(e: impl Into<anyhow::Error>) -> Self {
        CliError::Data(e.into())
    }

    pub fn missing(key: &str) -> Self {
        CliError::Usage(format!("missing --{key} (flag or config key `{key}`)"))
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Data(e) => write!(f, "{e:#}"),
        }
    }
}

impl From<scriptnorm::Error> for CliError {
    fn from(e: scriptnorm::Error) -> Self {
        match e {
            scriptnorm::Error::Config(_) | scriptnorm::Error::Unknown { .. } => CliError::Usage(e.to_string()),
            other => CliError::Data(other.into()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Data(e.into())
    }
}

pub type CliResult<T = ()> = Result<T, CliError>;
