use qhj_fields::FieldsError;
use qhj_solvers::SolverError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TrajError {
    #[error("seed {index} at {position:?} lies in a masked (nodal) region")]
    SeedMasked { index: usize, position: Vec<f64> },
    #[error("time {t} is outside the record span [{start}, {end}]")]
    TimeOutOfRange { t: f64, start: f64, end: f64 },
    #[error("seed {index} has {got} coordinates, grid has {dim} axes")]
    SeedDimension { index: usize, got: usize, dim: usize },
    #[error("invalid trajectory step {0}")]
    BadStep(f64),
    #[error("{0}")]
    Unsupported(String),
    #[error("velocity became non-finite for seed {index} at t = {t}")]
    NonFinite { index: usize, t: f64 },
    #[error(transparent)]
    Field(#[from] FieldsError),
    #[error(transparent)]
    Solver(#[from] SolverError),
}
