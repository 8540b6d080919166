use qhj_fields::FieldsError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("invalid config: {0}")]
    Config(String),

    #[error("config does not parse: {0}")]
    Parse(#[from] serde_json::Error),

    #[error(transparent)]
    Field(#[from] FieldsError),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("non-finite value after step {step}")]
    NonFinite { step: usize },

    #[error("time step {dt} exceeds the stability limit {limit}")]
    Unstable { dt: f64, limit: f64 },

    #[error("`{0}` has no closed form")]
    NotAnalytic(&'static str),

    #[error("unsupported: {0}")]
    Unsupported(String),
}
