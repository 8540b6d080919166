use qhj_opalg::AlgebraError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DeriveError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),

    #[error("unknown pipeline `{0}` (expected nonrel-general, nonrel-bohm or relativistic)")]
    UnknownPipeline(String),

    #[error("no golden with label `{0}`")]
    MissingGolden(String),

    #[error("golden file line {line}: {reason}")]
    GoldenFormat { line: usize, reason: String },

    #[error("golden `{label}` does not parse: {source}")]
    GoldenSyntax { label: String, source: AlgebraError },

    #[error("no goldens are recorded for this Hamiltonian spec: {0}")]
    NoGoldens(String),
}
