//! Trajectories of the guidance law `dq/dt = grad S / m` through the slices of
//! an [`qhj_solvers::EvolutionRecord`]. Velocities are built from the spectral
//! phase gradient of each slice, interpolated by four-point Lagrange stencils
//! in space and linearly in time, and integrated with classical RK4.

mod error;
mod integrate;
mod seeds;
mod velocity;

pub use error::TrajError;
pub use integrate::{integrate_trajectories, Path, TrajMeta, TrajOptions, TrajectorySet};
pub use seeds::sample_density;
pub use velocity::VelocityField;
