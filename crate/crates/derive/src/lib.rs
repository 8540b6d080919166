//! Quantum Hamilton-Jacobi derivation pipelines checked against stored goldens.
//!
//! Three pipelines are available through [`golden_check`]: `nonrel-general`,
//! `nonrel-bohm` and `relativistic`. Each returns a [`DerivationReport`] that
//! serializes to JSON or to a plain transcript.

mod error;
mod goldens;
mod pipelines;
mod report;

pub use error::DeriveError;
pub use goldens::{Goldens, GOLDENS_TEXT};
pub use pipelines::{
    derive_nonrel_bohm, derive_nonrel_general, derive_relativistic, golden_check, nonrel_chain, NonrelChain,
    PIPELINES,
};
pub use report::{CIdentification, Check, DerivationReport, DerivationStep, ExprKind, StepStatus};
