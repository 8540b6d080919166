use std::path::PathBuf;

use qhj_derive::DeriveError;
use qhj_fields::FieldsError;
use qhj_solvers::SolverError;
use qhj_traj::TrajError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("config: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Fields(#[from] FieldsError),
    #[error(transparent)]
    Traj(#[from] TrajError),
    #[error(transparent)]
    Derive(#[from] DeriveError),
}

impl CliError {
    pub(crate) fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> CliError {
        let path = path.into();
        move |source| CliError::Io { path, source }
    }

    /// 2 for anything the caller can fix in argv or the config, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Config(_) | CliError::Io { .. } => 2,
            CliError::Solver(e) => match e {
                SolverError::NonFinite { .. } => 1,
                _ => 2,
            },
            CliError::Traj(TrajError::SeedMasked { .. } | TrajError::SeedDimension { .. } | TrajError::BadStep(_)) => 2,
            CliError::Traj(TrajError::Solver(_)) => 2,
            CliError::Derive(DeriveError::UnknownPipeline(_)) => 2,
            _ => 1,
        }
    }
}
