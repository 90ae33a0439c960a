use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// A config value that parsed but does not make sense, with where it came from.
    #[error("{location}: {key}: {message}")]
    Config {
        location: String,
        key: String,
        message: String,
    },

    #[error("{path}: {message}")]
    Parse { path: String, message: String },

    #[error(transparent)]
    Core(#[from] ringpair::Error),

    /// Outputs were written but some rate floors could not be met.
    #[error("{0}")]
    Infeasible(String),

    /// Outputs were written but some points hit a numerical guard.
    #[error("{0}")]
    Numerical(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    /// 1 I/O, 2 validation, 3 infeasible, 4 numerical guard.
    pub fn exit_code(&self) -> u8 {
        use ringpair::Error as E;
        match self {
            Self::Config { .. } | Self::Parse { .. } => 2,
            Self::Infeasible(_) => 3,
            Self::Numerical(_) => 4,
            Self::Io { .. } => 1,
            Self::Core(e) => match e {
                E::Infeasible { .. } => 3,
                E::Io(_) | E::Json(_) => 1,
                e if e.is_numerical_guard() => 4,
                _ => 2,
            },
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
