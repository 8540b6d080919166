use qhj_fields::{Complex64, Constants, Grid, ScalarField, SpectralOps, WaveFunction};

use crate::analytic::analytic_state;
use crate::{Dynamics, EvolutionRecord, ScenarioConfig, Snapshot, SolverError, SolverMeta};

/// Strang splitting: half-step potential phase, full kinetic step in
/// frequency space, half-step potential phase.
pub struct SplitStep {
    ops: SpectralOps,
    half_potential: Vec<Complex64>,
    kinetic: Vec<Complex64>,
}

impl SplitStep {
    /// `dt` may be negative for backward propagation.
    pub fn new(grid: &Grid, v: &ScalarField, k: &Constants, dt: f64) -> Result<Self, SolverError> {
        if v.grid() != grid {
            return Err(qhj_fields::FieldsError::GridMismatch.into());
        }
        let ops = SpectralOps::new(grid);
        let half_potential = v.values().iter().map(|&x| Complex64::from_polar(1.0, -x * dt / (2.0 * k.hbar))).collect();
        let kinetic = (0..grid.len())
            .map(|p| {
                let k2: f64 = grid
                    .multi_index(p)
                    .iter()
                    .enumerate()
                    .map(|(a, &j)| ops.wavenumbers(a)[j].powi(2))
                    .sum();
                Complex64::from_polar(1.0, -k.hbar * k2 * dt / (2.0 * k.mass))
            })
            .collect();
        Ok(SplitStep { ops, half_potential, kinetic })
    }

    pub fn step(&self, psi: &mut [Complex64]) {
        psi.iter_mut().zip(&self.half_potential).for_each(|(z, p)| *z *= p);
        self.ops.transform(psi, false);
        psi.iter_mut().zip(&self.kinetic).for_each(|(z, p)| *z *= p);
        self.ops.transform(psi, true);
        psi.iter_mut().zip(&self.half_potential).for_each(|(z, p)| *z *= p);
    }
}

/// Propagate `psi0` for `steps` steps of size `dt`, storing every
/// `stride`-th slice and the last one.
pub fn propagate_tdse(
    psi0: &WaveFunction,
    v: &ScalarField,
    dt: f64,
    steps: usize,
    stride: usize,
) -> Result<EvolutionRecord, SolverError> {
    let k = psi0.constants();
    let grid = psi0.grid().clone();
    let stepper = SplitStep::new(&grid, v, &k, dt)?;
    let t0 = psi0.time();
    let mut psi = psi0.values().to_vec();
    let stride = stride.max(1);
    let mut snapshots = vec![Snapshot { step: 0, time: t0, values: psi.clone(), rate: None, energy: None }];
    for n in 1..=steps {
        stepper.step(&mut psi);
        if psi.iter().any(|z| !z.is_finite()) {
            return Err(SolverError::NonFinite { step: n });
        }
        if n % stride == 0 || n == steps {
            snapshots.push(Snapshot { step: n, time: t0 + n as f64 * dt, values: psi.clone(), rate: None, energy: None });
        }
    }
    Ok(EvolutionRecord {
        grid,
        constants: k,
        dynamics: Dynamics::Schrodinger,
        meta: SolverMeta {
            method: "strang-split-step".into(),
            time_order: 2,
            space: "spectral".into(),
            dt,
            steps,
            output_stride: stride,
        },
        snapshots,
    })
}

/// Initial wave function of a Schrodinger scenario.
pub fn initial_wave(cfg: &ScenarioConfig) -> Result<WaveFunction, SolverError> {
    match cfg.initial_state.sampled_values() {
        Some((vals, _)) => Ok(WaveFunction::new(&cfg.grid, vals, 0.0, cfg.constants)?),
        None => Ok(analytic_state(&cfg.initial_state, &cfg.grid, &cfg.constants, 0.0)?.psi),
    }
}

pub fn solve_tdse(cfg: &ScenarioConfig) -> Result<EvolutionRecord, SolverError> {
    cfg.validate()?;
    if cfg.dynamics != Dynamics::Schrodinger {
        return Err(SolverError::Config("solve_tdse needs dynamics = schrodinger".into()));
    }
    let psi0 = initial_wave(cfg)?;
    let v = cfg.potential.sample(&cfg.grid, &cfg.constants)?;
    propagate_tdse(&psi0, &v, cfg.dt, cfg.steps, cfg.output_stride)
}
