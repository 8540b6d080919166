//! Fields on uniform periodic grids, spectral and central differences,
//! polar decomposition `psi = R exp(iS/hbar)`, the quantum potential `QP`
//! and quantum kinetic energy `QK`, and pointwise residuals of the
//! Hamilton-Jacobi, continuity and Klein-Gordon equations.
//!
//! ```
//! use qhj_fields::*;
//!
//! let grid = Grid::line(256, -10.0, 10.0).unwrap();
//! let r = ScalarField::from_fn(&grid, Unit::Amplitude, |x| (-x[0] * x[0] / 4.0).exp()).unwrap();
//! let qp = quantum_potential(&r, &Constants::default(), &EvalOptions::default()).unwrap();
//! assert!((qp.field.values()[128] - 0.25).abs() < 1e-10);
//! ```

mod derivative;
mod error;
pub mod export;
mod field;
mod grid;
mod polar;
mod quantum;
mod residual;

pub use derivative::{derivative, derivative_complex, divergence, gradient, laplacian, Scheme, SpectralOps};
pub use error::FieldsError;
pub use field::{Constants, ScalarField, Unit, VectorField, WaveFunction};
pub use grid::{Axis, Grid};
pub use polar::{phase_gradient, phase_gradient_of, polar_decompose, EvalOptions, Mask, DEFAULT_MASK_EPS};
pub use quantum::{half_sum_from_density, quantum_kinetic, quantum_potential, sum_from_divergence, MaskedField};
pub use residual::{
    continuity_residual, hj_residual, kg_acceleration, kg_residual, Coefficients, Difference, DifferenceSummary,
    EquationId, HjInputs, KgState, NonrelState, Residual, ResidualReport,
};

pub use num_complex::Complex64;
