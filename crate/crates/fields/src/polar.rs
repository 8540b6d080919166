use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::derivative::derivative_complex;
use crate::{FieldsError, Scheme, ScalarField, Unit, VectorField, WaveFunction};

pub const DEFAULT_MASK_EPS: f64 = 1e-6;

/// Node mask: point `p` is kept when `R[p] >= eps * max R`.
#[derive(Clone, Debug, PartialEq)]
pub struct Mask {
    keep: Vec<bool>,
    eps: f64,
    threshold: f64,
}

impl Mask {
    pub fn from_amplitude(r: &ScalarField, eps: f64) -> Self {
        let max = r.values().iter().fold(0.0f64, |m, &v| m.max(v));
        let threshold = eps * max;
        let keep = r.values().iter().map(|&v| v >= threshold && v > 0.0).collect();
        Mask { keep, eps, threshold }
    }

    pub fn all(n: usize) -> Self {
        Mask { keep: vec![true; n], eps: 0.0, threshold: 0.0 }
    }

    pub fn keeps(&self, p: usize) -> bool {
        self.keep[p]
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn kept(&self) -> usize {
        self.keep.iter().filter(|&&k| k).count()
    }

    /// Fraction of points excluded by the mask.
    pub fn masked_fraction(&self) -> f64 {
        1.0 - self.kept() as f64 / self.keep.len() as f64
    }

    /// Intersection of two masks.
    pub fn and(&self, other: &Mask) -> Mask {
        Mask {
            keep: self.keep.iter().zip(&other.keep).map(|(a, b)| *a && *b).collect(),
            eps: self.eps.max(other.eps),
            threshold: self.threshold.max(other.threshold),
        }
    }
}

/// Derivative options shared by the evaluators.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvalOptions {
    pub scheme: Scheme,
    pub mask_eps: f64,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions { scheme: Scheme::Spectral, mask_eps: DEFAULT_MASK_EPS }
    }
}

fn wrap(d: f64) -> f64 {
    d - 2.0 * PI * (d / (2.0 * PI)).round()
}

fn unwrap_line(arg: &[f64], idx: &[usize], start: usize, out: &mut [f64]) {
    for w in (start + 1)..idx.len() {
        out[idx[w]] = out[idx[w - 1]] + wrap(arg[idx[w]] - arg[idx[w - 1]]);
    }
    for w in (0..start).rev() {
        out[idx[w]] = out[idx[w + 1]] + wrap(arg[idx[w]] - arg[idx[w + 1]]);
    }
}

/// `psi = R exp(iS/hbar)` with `R = |psi|` and `S` unwrapped outward from
/// the point of largest `|psi|`. In 2D the row through that point is
/// unwrapped first, then every column from that row. Phases across nodal
/// lines are unreliable; those points fall under the mask.
pub fn polar_decompose(psi: &WaveFunction) -> Result<(ScalarField, ScalarField), FieldsError> {
    let grid = psi.grid();
    let vals = psi.values();
    let r: Vec<f64> = vals.iter().map(|z| z.norm()).collect();
    let (pmax, &rmax) = r
        .iter()
        .enumerate()
        .fold((0, &0.0), |best, cur| if cur.1 > best.1 { cur } else { best });
    if rmax == 0.0 {
        return Err(FieldsError::AllZero);
    }
    let arg: Vec<f64> = vals.iter().map(|z| z.arg()).collect();
    let mut s = vec![0.0; vals.len()];
    s[pmax] = arg[pmax];
    let at = grid.multi_index(pmax);
    let last = grid.dim() - 1;
    let row: Vec<usize> = (0..grid.axes()[last].points)
        .map(|j| {
            let mut m = at.clone();
            m[last] = j;
            grid.flat_index(&m)
        })
        .collect();
    unwrap_line(&arg, &row, at[last], &mut s);
    if grid.dim() == 2 {
        for &p in &row {
            let j = grid.multi_index(p)[1];
            let col: Vec<usize> = (0..grid.axes()[0].points).map(|i| grid.flat_index(&[i, j])).collect();
            unwrap_line(&arg, &col, at[0], &mut s);
        }
    }
    let hbar = psi.constants().hbar;
    let s = s.into_iter().map(|x| hbar * x).collect();
    Ok((ScalarField::new(grid, r, Unit::Amplitude)?, ScalarField::new(grid, s, Unit::Action)?))
}

/// Below this `|psi|^2` the phase gradient is set to zero.
const TINY: f64 = 1e-300;

/// `grad S = hbar Im(conj(psi) grad psi) / |psi|^2`, free of unwrapping.
pub fn phase_gradient(psi: &WaveFunction, scheme: Scheme) -> Result<VectorField, FieldsError> {
    let hbar = psi.constants().hbar;
    let grid = psi.grid();
    let mut comps = Vec::new();
    for a in 0..grid.dim() {
        let d = derivative_complex(grid, psi.values(), 1, a, scheme)?;
        comps.push(
            psi.values()
                .iter()
                .zip(&d)
                .map(|(z, dz)| {
                    let r2 = z.norm_sqr();
                    if r2 > TINY {
                        hbar * (z.conj() * dz).im / r2
                    } else {
                        0.0
                    }
                })
                .collect(),
        );
    }
    VectorField::new(grid, comps, Unit::Momentum)
}

/// Gradient of a phase field through `u = exp(iS/hbar)`, so `S` need not
/// be periodic, only `u`.
pub fn phase_gradient_of(s: &ScalarField, hbar: f64, scheme: Scheme) -> Result<VectorField, FieldsError> {
    let u: Vec<Complex64> = s.values().iter().map(|&x| Complex64::from_polar(1.0, x / hbar)).collect();
    let mut comps = Vec::new();
    for a in 0..s.grid().dim() {
        let d = derivative_complex(s.grid(), &u, 1, a, scheme)?;
        comps.push(u.iter().zip(&d).map(|(z, dz)| hbar * (z.conj() * dz).im).collect());
    }
    VectorField::new(s.grid(), comps, Unit::Momentum)
}
