//! Time-dependent Schrodinger propagation by split-step Fourier, 1+1D
//! Klein-Gordon propagation by leapfrog, and closed-form oracle states.

mod analytic;
mod config;
mod error;
mod kg;
mod record;
mod tdse;

pub use analytic::{analytic_record, analytic_state, free_gaussian_width, grid_mode, mass_shell_energy, OracleState};
pub use config::{Dynamics, InitialState, PotentialSpec, ScenarioConfig};
pub use error::SolverError;
pub use kg::{check_stability, measured_frequency, propagate_kg, solve_kg, stability_limit};
pub use record::{EvolutionRecord, RecordView, SliceView, Snapshot, SolverMeta};
pub use tdse::{initial_wave, propagate_tdse, solve_tdse, SplitStep};

/// Run whichever solver the scenario's dynamics selects.
pub fn simulate(cfg: &ScenarioConfig) -> Result<EvolutionRecord, SolverError> {
    match cfg.dynamics {
        Dynamics::Schrodinger => solve_tdse(cfg),
        Dynamics::KleinGordon => solve_kg(cfg),
    }
}
