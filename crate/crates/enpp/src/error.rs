use std::fmt;
use std::path::PathBuf;

/// A configuration problem, located by line when possible.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    /// 1-based line in the config file.
    pub line: Option<usize>,
    /// What went wrong.
    pub message: String,
}

impl ConfigError {
    /// Error at `line`, if known.
    pub fn new(line: Option<usize>, message: impl Into<String>) -> Self {
        Self {
            line,
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

/// Everything the front end can fail with.
#[derive(Debug, thiserror::Error)]
pub enum AppError {
    /// Bad or missing configuration.
    #[error("config error: {0}")]
    Config(#[from] ConfigError),
    /// Malformed input file (snapshot, index).
    #[error("{path}: {message}")]
    Input {
        /// Offending file.
        path: PathBuf,
        /// Description.
        message: String,
    },
    /// Solver failure.
    #[error("numerical failure: {0}")]
    Numerical(#[from] enpp_core::Error),
    /// Filesystem failure.
    #[error("{path}: {source}")]
    Io {
        /// Offending path.
        path: PathBuf,
        /// Cause.
        source: std::io::Error,
    },
    /// CSV writing failure.
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl AppError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    /// Malformed input at `path`.
    pub fn input(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        Self::Input {
            path: path.into(),
            message: message.into(),
        }
    }

    /// Process exit code: 2 for anything the user can fix in the inputs
    /// (including non-neutral initial charges), 3 for failures during a run.
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Config(_) | AppError::Input { .. } => 2,
            AppError::Numerical(enpp_core::Error::NonNeutral { .. }) => 2,
            AppError::Numerical(_) | AppError::Io { .. } | AppError::Csv(_) => 3,
        }
    }
}

/// Result alias for the front end.
pub type AppResult<T> = Result<T, AppError>;
