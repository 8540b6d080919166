//! Closed-form states. Multi-axis grids use products of the 1D state along
//! every axis with the same parameters.
//!
//! Free Gaussian, with `alpha = 1 + i hbar t / (2 m sigma0^2)`, `v = hbar k0 / m`
//! and `u = x - x0 - v t`:
//!
//! `psi = (2 pi sigma0^2)^(-1/4) alpha^(-1/2) exp(-u^2 / (4 sigma0^2 alpha) + i k0 (x - x0) - i hbar k0^2 t / 2m)`.
//!
//! Its width is `sigma0 |alpha|`.
//!
//! Harmonic ground state: `(m omega / pi hbar)^(1/4) exp(-m omega x^2 / 2 hbar - i omega t / 2)`.
//!
//! Coherent state released at rest from `x0`: with `xc = x0 cos(omega t)`,
//! `pc = -m omega x0 sin(omega t)` and `theta = m omega x0^2 sin(2 omega t) / (4 hbar)`,
//!
//! `psi = (m omega / pi hbar)^(1/4) exp(-m omega (x - xc)^2 / 2 hbar + i pc x / hbar - i omega t / 2 + i theta)`.
//!
//! `hbar d(theta)/dt = m omega^2 xc^2/2 - pc^2/2m`. Derivations are in `docs/analytic-states.md`.
//!
//! Klein-Gordon plane wave: `exp(i (p x - E t) / hbar)` with
//! `E = sqrt(p^2 c^2 + m0^2 c^4)`; `p` must be a grid momentum `2 pi hbar n / L`.

use std::f64::consts::PI;

use qhj_fields::{Complex64, Constants, Grid, WaveFunction};

use crate::{Dynamics, EvolutionRecord, InitialState, Snapshot, SolverError, SolverMeta};

/// A state together with its first (and for Klein-Gordon, second) time derivative.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleState {
    pub psi: WaveFunction,
    pub psi_t: Vec<Complex64>,
    pub psi_tt: Option<Vec<Complex64>>,
}

fn i(x: f64) -> Complex64 {
    Complex64::new(0.0, x)
}

/// `(ln psi, d ln psi / dt)` of a 1D factor.
fn factor(kind: &InitialState, x: f64, t: f64, k: &Constants) -> (Complex64, Complex64) {
    let (hbar, m) = (k.hbar, k.mass);
    match *kind {
        InitialState::FreeGaussian { sigma0, k0, x0 } => {
            let s2 = sigma0 * sigma0;
            let alpha = Complex64::new(1.0, hbar * t / (2.0 * m * s2));
            let dalpha = i(hbar / (2.0 * m * s2));
            let v = hbar * k0 / m;
            let u = x - x0 - v * t;
            let w = hbar * k0 * k0 / (2.0 * m);
            let ln = -0.25 * (2.0 * PI * s2).ln() - 0.5 * alpha.ln() - u * u / (4.0 * s2 * alpha)
                + i(k0 * (x - x0) - w * t);
            let dln = -0.5 * dalpha / alpha + 2.0 * v * u / (4.0 * s2 * alpha) + u * u * dalpha / (4.0 * s2 * alpha * alpha)
                - i(w);
            (ln, dln)
        }
        InitialState::HarmonicGround { omega } => {
            let ln = 0.25 * (m * omega / (PI * hbar)).ln() - m * omega * x * x / (2.0 * hbar) - i(0.5 * omega * t);
            (ln, -i(0.5 * omega))
        }
        InitialState::HarmonicCoherent { omega, x0 } => {
            let a = m * omega / (2.0 * hbar);
            let (s, c) = (omega * t).sin_cos();
            let xc = x0 * c;
            let pc = -m * omega * x0 * s;
            let dxc = -omega * x0 * s;
            let dpc = -m * omega * omega * x0 * c;
            let theta = m * omega * x0 * x0 * (2.0 * omega * t).sin() / (4.0 * hbar);
            let dtheta = m * omega * omega * x0 * x0 * (2.0 * omega * t).cos() / (2.0 * hbar);
            let ln = 0.25 * (m * omega / (PI * hbar)).ln() - a * (x - xc) * (x - xc)
                + i(pc * x / hbar - 0.5 * omega * t + theta);
            let dln = Complex64::new(2.0 * a * (x - xc) * dxc, 0.0) + i(dpc * x / hbar - 0.5 * omega + dtheta);
            (ln, dln)
        }
        _ => unreachable!("factor is only called for product states"),
    }
}

fn check_params(kind: &InitialState) -> Result<(), SolverError> {
    let bad = |s: String| Err(SolverError::Parameter(s));
    match *kind {
        InitialState::FreeGaussian { sigma0, k0, x0 } => {
            if !(sigma0.is_finite() && sigma0 > 0.0) {
                return bad(format!("sigma0 = {sigma0} must be positive"));
            }
            if !(k0.is_finite() && x0.is_finite()) {
                return bad("k0 and x0 must be finite".into());
            }
        }
        InitialState::HarmonicGround { omega } | InitialState::HarmonicCoherent { omega, .. } => {
            if !(omega.is_finite() && omega > 0.0) {
                return bad(format!("omega = {omega} must be positive"));
            }
        }
        InitialState::KgPlaneWave { p } => {
            if !p.is_finite() {
                return bad("p must be finite".into());
            }
        }
        InitialState::Sampled { .. } => {}
    }
    Ok(())
}

/// Mode index `n` with `p = 2 pi hbar n / L`, if `p` lies on the grid.
pub fn grid_mode(p: f64, grid: &Grid, k: &Constants) -> Option<i64> {
    let l = grid.axes()[0].extent();
    let n = p * l / (2.0 * PI * k.hbar);
    let r = n.round();
    ((n - r).abs() < 1e-9 * n.abs().max(1.0)).then_some(r as i64)
}

/// Relativistic energy `E = sqrt(p^2 c^2 + m0^2 c^4)`.
pub fn mass_shell_energy(p: f64, k: &Constants) -> f64 {
    (p * p * k.c_light * k.c_light + (k.mass * k.c_light * k.c_light).powi(2)).sqrt()
}

/// Width `sigma0 sqrt(1 + (hbar t / 2 m sigma0^2)^2)` of the free packet.
pub fn free_gaussian_width(sigma0: f64, t: f64, k: &Constants) -> f64 {
    sigma0 * (1.0 + (k.hbar * t / (2.0 * k.mass * sigma0 * sigma0)).powi(2)).sqrt()
}

/// Evaluate a closed-form state on `grid` at time `t`.
pub fn analytic_state(kind: &InitialState, grid: &Grid, k: &Constants, t: f64) -> Result<OracleState, SolverError> {
    check_params(kind)?;
    match *kind {
        InitialState::Sampled { .. } => Err(SolverError::NotAnalytic("sampled")),
        InitialState::KgPlaneWave { p } => {
            if grid.dim() != 1 {
                return Err(SolverError::Unsupported("kg-plane-wave on a multi-axis grid".into()));
            }
            if grid_mode(p, grid, k).is_none() {
                return Err(SolverError::Parameter(format!(
                    "p = {p} is not a grid momentum 2 pi hbar n / L"
                )));
            }
            let w = mass_shell_energy(p, k) / k.hbar;
            let psi = WaveFunction::from_fn(grid, t, *k, |x| i((p * x[0]) / k.hbar - w * t).exp())?;
            let psi_t = psi.values().iter().map(|z| z * i(-w)).collect();
            let psi_tt = psi.values().iter().map(|z| z * (-w * w)).collect();
            Ok(OracleState { psi, psi_t, psi_tt: Some(psi_tt) })
        }
        _ => {
            let mut vals = Vec::with_capacity(grid.len());
            let mut rates = Vec::with_capacity(grid.len());
            for p in 0..grid.len() {
                let (ln, dln) = grid
                    .point(p)
                    .iter()
                    .map(|&x| factor(kind, x, t, k))
                    .fold((Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)), |a, b| (a.0 + b.0, a.1 + b.1));
                let z = ln.exp();
                vals.push(z);
                rates.push(z * dln);
            }
            Ok(OracleState { psi: WaveFunction::new(grid, vals, t, *k)?, psi_t: rates, psi_tt: None })
        }
    }
}

/// Record of closed-form slices at `t = n dt` for `n = 0, stride, 2 stride, ..., steps`,
/// in the same layout the solvers produce.
pub fn analytic_record(
    kind: &InitialState,
    grid: &Grid,
    k: &Constants,
    dt: f64,
    steps: usize,
    stride: usize,
) -> Result<EvolutionRecord, SolverError> {
    let stride = stride.max(1);
    let relativistic = matches!(kind, InitialState::KgPlaneWave { .. });
    let mut snapshots = Vec::new();
    for n in (0..=steps).filter(|n| n % stride == 0 || *n == steps) {
        let t = n as f64 * dt;
        let s = analytic_state(kind, grid, k, t)?;
        snapshots.push(Snapshot {
            step: n,
            time: t,
            values: s.psi.values().to_vec(),
            rate: relativistic.then_some(s.psi_t),
            energy: None,
        });
    }
    Ok(EvolutionRecord {
        grid: grid.clone(),
        constants: *k,
        dynamics: if relativistic { Dynamics::KleinGordon } else { Dynamics::Schrodinger },
        meta: SolverMeta {
            method: "closed-form".into(),
            time_order: 0,
            space: "exact".into(),
            dt,
            steps,
            output_stride: stride,
        },
        snapshots,
    })
}
