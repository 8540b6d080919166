use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FieldsError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("non-finite value at point {index}")]
    NonFinite { index: usize },

    #[error("wave function vanishes identically")]
    AllZero,

    #[error("axis {axis} out of range for a {dim}-dimensional grid")]
    BadAxis { axis: usize, dim: usize },

    #[error("derivative order {0} is not supported (use 1 or 2)")]
    BadOrder(u32),

    #[error("{0} requires a one-dimensional grid")]
    NeedsOneDimension(&'static str),

    #[error("missing input: {0}")]
    MissingInput(&'static str),

    #[error("time slices are not evenly spaced ({before} vs {after})")]
    UnevenSlices { before: f64, after: f64 },

    #[error("equation `{0}` is not handled by this evaluator")]
    WrongEvaluator(String),

    #[error("unknown equation id `{0}`")]
    UnknownEquation(String),
}
