use std::f64::consts::PI;

use qhj_fields::{Complex64, Constants, Grid, SpectralOps};

use crate::analytic::analytic_state;
use crate::{Dynamics, EvolutionRecord, ScenarioConfig, Snapshot, SolverError, SolverMeta};

/// `m0 c^2 / hbar`.
fn mass_frequency(k: &Constants) -> f64 {
    k.mass * k.c_light * k.c_light / k.hbar
}

/// Largest stable step: `min(h/c, 2/omega_max)` with
/// `omega_max^2 = c^2 (pi/h)^2 + (m0 c^2/hbar)^2` for the spectral Laplacian.
pub fn stability_limit(grid: &Grid, k: &Constants) -> f64 {
    let h = grid.axes()[0].spacing();
    let w_max = ((k.c_light * PI / h).powi(2) + mass_frequency(k).powi(2)).sqrt();
    (h / k.c_light).min(2.0 / w_max)
}

pub fn check_stability(grid: &Grid, k: &Constants, dt: f64) -> Result<(), SolverError> {
    let limit = stability_limit(grid, k);
    if dt.abs() > limit {
        return Err(SolverError::Unstable { dt, limit });
    }
    Ok(())
}

/// `K phi = (-c^2 lap + (m0 c^2/hbar)^2) phi`, so that `phi_tt = -K phi`.
struct KgOperator {
    ops: SpectralOps,
    symbol: Vec<f64>,
}

impl KgOperator {
    fn new(grid: &Grid, k: &Constants) -> Self {
        let ops = SpectralOps::new(grid);
        let mu2 = mass_frequency(k).powi(2);
        let symbol = ops.wavenumbers(0).iter().map(|q| k.c_light * k.c_light * q * q + mu2).collect();
        KgOperator { ops, symbol }
    }

    fn apply(&self, phi: &[Complex64]) -> Vec<Complex64> {
        let mut out = phi.to_vec();
        self.ops.transform(&mut out, false);
        out.iter_mut().zip(&self.symbol).for_each(|(z, s)| *z *= s);
        self.ops.transform(&mut out, true);
        out
    }
}

/// `E_{n+1/2} = |(phi_{n+1} - phi_n)/dt|^2 + Re <phi_{n+1}, K phi_n>`, exactly
/// conserved by the leapfrog recursion.
fn energy(next: &[Complex64], cur: &[Complex64], k_cur: &[Complex64], dt: f64, dx: f64) -> f64 {
    let kin: f64 = next.iter().zip(cur).map(|(a, b)| ((a - b) / dt).norm_sqr()).sum();
    let pot: f64 = next.iter().zip(k_cur).map(|(a, b)| (a.conj() * b).re).sum();
    (kin + pot) * dx
}

/// Leapfrog for `phi_tt = c^2 phi_xx - (m0 c^2/hbar)^2 phi`, started with
/// `phi_1 = phi_0 + dt phi_t0 - dt^2/2 K phi_0`. Stored rates are centred
/// differences `(phi_{n+1} - phi_{n-1}) / 2dt`, the initial one is `phi_t0`.
pub fn propagate_kg(
    grid: &Grid,
    k: &Constants,
    phi0: &[Complex64],
    phi_t0: &[Complex64],
    dt: f64,
    steps: usize,
    stride: usize,
) -> Result<EvolutionRecord, SolverError> {
    if grid.dim() != 1 {
        return Err(SolverError::Unsupported("Klein-Gordon on a multi-axis grid".into()));
    }
    for v in [phi0, phi_t0] {
        if v.len() != grid.len() {
            return Err(qhj_fields::FieldsError::LengthMismatch { expected: grid.len(), got: v.len() }.into());
        }
    }
    check_stability(grid, k, dt)?;
    let op = KgOperator::new(grid, k);
    let dx = grid.cell_volume();
    let stride = stride.max(1);
    let mut prev: Vec<Complex64> = phi0.to_vec();
    let k0 = op.apply(&prev);
    let mut cur: Vec<Complex64> = (0..prev.len())
        .map(|p| prev[p] + dt * phi_t0[p] - 0.5 * dt * dt * k0[p])
        .collect();
    let mut snapshots = vec![Snapshot {
        step: 0,
        time: 0.0,
        values: prev.clone(),
        rate: Some(phi_t0.to_vec()),
        energy: Some(energy(&cur, &prev, &k0, dt, dx)),
    }];
    for n in 1..=steps {
        let k_cur = op.apply(&cur);
        let next: Vec<Complex64> = (0..cur.len()).map(|p| 2.0 * cur[p] - prev[p] - dt * dt * k_cur[p]).collect();
        if next.iter().any(|z| !z.is_finite()) {
            return Err(SolverError::NonFinite { step: n });
        }
        if n % stride == 0 || n == steps {
            snapshots.push(Snapshot {
                step: n,
                time: n as f64 * dt,
                values: cur.clone(),
                rate: Some(next.iter().zip(&prev).map(|(a, b)| (a - b) / (2.0 * dt)).collect()),
                energy: Some(energy(&next, &cur, &k_cur, dt, dx)),
            });
        }
        prev = cur;
        cur = next;
    }
    Ok(EvolutionRecord {
        grid: grid.clone(),
        constants: *k,
        dynamics: Dynamics::KleinGordon,
        meta: SolverMeta {
            method: "leapfrog".into(),
            time_order: 2,
            space: "spectral".into(),
            dt,
            steps,
            output_stride: stride,
        },
        snapshots,
    })
}

pub fn solve_kg(cfg: &ScenarioConfig) -> Result<EvolutionRecord, SolverError> {
    cfg.validate()?;
    if cfg.dynamics != Dynamics::KleinGordon {
        return Err(SolverError::Config("solve_kg needs dynamics = klein-gordon".into()));
    }
    let (phi0, phi_t0) = match cfg.initial_state.sampled_values() {
        Some((v, Some(r))) => (v, r),
        Some((_, None)) => return Err(SolverError::Config("sampled Klein-Gordon data needs re_t and im_t".into())),
        None => {
            let s = analytic_state(&cfg.initial_state, &cfg.grid, &cfg.constants, 0.0)?;
            (s.psi.values().to_vec(), s.psi_t)
        }
    };
    propagate_kg(&cfg.grid, &cfg.constants, &phi0, &phi_t0, cfg.dt, cfg.steps, cfg.output_stride)
}

/// Angular frequency `omega` of `phi(t) ~ phi(0) exp(-i omega t)`, by a
/// least-squares fit to the unwrapped phase of the overlap `<phi(0), phi(t)>`.
pub fn measured_frequency(record: &EvolutionRecord) -> Option<f64> {
    let first = &record.snapshots.first()?.values;
    let n0: f64 = first.iter().map(|z| z.norm_sqr()).sum();
    if n0 == 0.0 || record.len() < 2 {
        return None;
    }
    let mut phase = Vec::with_capacity(record.len());
    let mut last = 0.0;
    for s in &record.snapshots {
        let c: Complex64 = first.iter().zip(&s.values).map(|(a, b)| a.conj() * b).sum();
        let mut ph = c.arg();
        while ph - last > PI {
            ph -= 2.0 * PI;
        }
        while ph - last < -PI {
            ph += 2.0 * PI;
        }
        phase.push(ph);
        last = ph;
    }
    let t = record.times();
    let n = t.len() as f64;
    let (mt, mp) = (t.iter().sum::<f64>() / n, phase.iter().sum::<f64>() / n);
    let sxy: f64 = t.iter().zip(&phase).map(|(a, b)| (a - mt) * (b - mp)).sum();
    let sxx: f64 = t.iter().map(|a| (a - mt).powi(2)).sum();
    Some(-sxy / sxx)
}
