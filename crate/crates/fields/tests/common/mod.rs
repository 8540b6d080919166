//! Closed-form oracle states, written out independently of the solvers.
#![allow(dead_code)]

use qhj_fields::*;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Free packet with `hbar = m = 1`: width `s0`, momentum `k0`, centre `x0`.
/// Returns `(psi, psi_t)` at `x, t`.
pub fn free_gaussian(x: f64, t: f64, s0: f64, k0: f64, x0: f64) -> (Complex64, Complex64) {
    let alpha = c(1.0, t / (2.0 * s0 * s0));
    let dalpha = c(0.0, 1.0 / (2.0 * s0 * s0));
    let u = x - x0 - k0 * t;
    let w = 0.5 * k0 * k0;
    let norm = (2.0 * std::f64::consts::PI * s0 * s0).powf(-0.25);
    let ln = -0.5 * alpha.ln() - u * u / (4.0 * s0 * s0 * alpha) + c(0.0, k0 * (x - x0) - w * t);
    let psi = norm * ln.exp();
    let dln = -0.5 * dalpha / alpha + 2.0 * k0 * u / (4.0 * s0 * s0 * alpha)
        + u * u * dalpha / (4.0 * s0 * s0 * alpha * alpha)
        - c(0.0, w);
    (psi, psi * dln)
}

/// Phase `S` of the free packet (up to the constant of `arg`).
pub fn free_gaussian_phase(x: f64, t: f64, s0: f64, k0: f64, x0: f64) -> f64 {
    let tau = t / (2.0 * s0 * s0);
    let u = x - x0 - k0 * t;
    u * u * tau / (4.0 * s0 * s0 * (1.0 + tau * tau)) + k0 * (x - x0) - 0.5 * k0 * k0 * t - 0.5 * tau.atan()
}

pub fn wave(grid: &Grid, t: f64, f: impl Fn(f64) -> (Complex64, Complex64)) -> (WaveFunction, Vec<Complex64>) {
    let vals: Vec<(Complex64, Complex64)> = (0..grid.len()).map(|p| f(grid.point(p)[0])).collect();
    let psi = WaveFunction::new(grid, vals.iter().map(|v| v.0).collect(), t, Constants::default()).unwrap();
    (psi, vals.iter().map(|v| v.1).collect())
}

/// Harmonic ground state, `hbar = m = omega = 1`.
pub fn harmonic_ground(x: f64, t: f64) -> (Complex64, Complex64) {
    let amp = std::f64::consts::PI.powf(-0.25) * (-0.5 * x * x).exp();
    let psi = amp * c(0.0, -0.5 * t).exp();
    (psi, psi * c(0.0, -0.5))
}

pub fn line(n: usize, l: f64) -> Grid {
    Grid::line(n, -l, l).unwrap()
}

pub fn max_err(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
