use std::path::PathBuf;

use footrule_dir::Error;
use thiserror::Error as ThisError;

pub const EXIT_USAGE: u8 = 2;
pub const EXIT_NUMERIC: u8 = 3;
pub const EXIT_DATA: u8 = 4;
pub const EXIT_POLICY: u8 = 5;

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),

    #[error("{0}")]
    Usage(String),

    #[error("{0}")]
    Numeric(String),

    #[error("{0}")]
    Policy(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn core_code(e: &Error) -> u8 {
    match e {
        Error::InvalidParameter(_) | Error::DimensionMismatch { .. } | Error::InvalidDirection { .. } => {
            EXIT_USAGE
        }
        Error::QuadratureBudget { .. } => EXIT_NUMERIC,
        Error::Tie { .. } | Error::Parse { .. } | Error::Data(_) | Error::Io { .. } | Error::Csv(_) => {
            EXIT_DATA
        }
        Error::Replication { source, .. } => core_code(source),
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) => core_code(e),
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Numeric(_) => EXIT_NUMERIC,
            CliError::Policy(_) => EXIT_POLICY,
            CliError::Io { .. } => EXIT_DATA,
        }
    }
}
