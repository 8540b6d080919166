use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::{FieldsError, Grid, ScalarField, Unit, VectorField};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scheme {
    #[default]
    #[serde(rename = "spectral")]
    Spectral,
    #[serde(rename = "central-2nd")]
    Central2,
}

/// Cached FFT plans and wavenumbers for every axis of a grid.
pub struct SpectralOps {
    grid: Grid,
    forward: Vec<Arc<dyn Fft<f64>>>,
    inverse: Vec<Arc<dyn Fft<f64>>>,
    k: Vec<Vec<f64>>,
}

impl SpectralOps {
    pub fn new(grid: &Grid) -> Self {
        let mut planner = FftPlanner::new();
        let mut forward = Vec::new();
        let mut inverse = Vec::new();
        let mut k = Vec::new();
        for a in grid.axes() {
            let n = a.points;
            forward.push(planner.plan_fft_forward(n));
            inverse.push(planner.plan_fft_inverse(n));
            let dk = 2.0 * PI / a.extent();
            k.push((0..n).map(|j| if j < n / 2 { j as f64 } else { j as f64 - n as f64 } * dk).collect());
        }
        SpectralOps { grid: grid.clone(), forward, inverse, k }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Angular wavenumbers in FFT order; index `n/2` holds the Nyquist mode `-pi/h`.
    pub fn wavenumbers(&self, axis: usize) -> &[f64] {
        &self.k[axis]
    }

    /// FFT along one axis. The inverse includes the `1/n` factor.
    pub fn transform_axis(&self, data: &mut [Complex64], axis: usize, inverse: bool) {
        let n = self.grid.axes()[axis].points;
        let plan = if inverse { &self.inverse[axis] } else { &self.forward[axis] };
        let scale = if inverse { 1.0 / n as f64 } else { 1.0 };
        if axis + 1 == self.grid.dim() {
            plan.process(data);
            if inverse {
                data.iter_mut().for_each(|z| *z *= scale);
            }
            return;
        }
        let mut buf = vec![Complex64::default(); n];
        for line in self.grid.lines(axis) {
            for (b, &p) in buf.iter_mut().zip(&line) {
                *b = data[p];
            }
            plan.process(&mut buf);
            for (b, &p) in buf.iter().zip(&line) {
                data[p] = b * scale;
            }
        }
    }

    /// Transform along every axis.
    pub fn transform(&self, data: &mut [Complex64], inverse: bool) {
        for axis in 0..self.grid.dim() {
            self.transform_axis(data, axis, inverse);
        }
    }

    /// Multiply each mode of the full transform by `m(k)` where `k` holds
    /// one wavenumber per axis.
    pub fn apply_multiplier(&self, data: &mut [Complex64], m: impl Fn(&[f64]) -> Complex64) {
        self.transform(data, false);
        let mut k = vec![0.0; self.grid.dim()];
        for (p, z) in data.iter_mut().enumerate() {
            for (a, j) in self.grid.multi_index(p).into_iter().enumerate() {
                k[a] = self.k[a][j];
            }
            *z *= m(&k);
        }
        self.transform(data, true);
    }

    /// `d^order/dx_axis^order` of complex samples. Odd orders drop the Nyquist mode.
    pub fn derivative(&self, data: &[Complex64], order: u32, axis: usize) -> Vec<Complex64> {
        let n = self.grid.axes()[axis].points;
        let mut out = data.to_vec();
        self.transform_axis(&mut out, axis, false);
        let stride = self.grid.stride(axis);
        for (p, z) in out.iter_mut().enumerate() {
            let j = (p / stride) % n;
            let k = self.k[axis][j];
            let factor = if order % 2 == 1 && j == n / 2 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(0.0, k).powu(order)
            };
            *z *= factor;
        }
        self.transform_axis(&mut out, axis, true);
        out
    }
}

fn check(order: u32, axis: usize, grid: &Grid) -> Result<(), FieldsError> {
    if !(1..=2).contains(&order) {
        return Err(FieldsError::BadOrder(order));
    }
    grid.axis(axis)?;
    Ok(())
}

fn central(grid: &Grid, data: &[Complex64], order: u32, axis: usize) -> Vec<Complex64> {
    let h = grid.axes()[axis].spacing();
    let mut out = vec![Complex64::default(); data.len()];
    for line in grid.lines(axis) {
        let n = line.len();
        for j in 0..n {
            let (m, c, p) = (data[line[(j + n - 1) % n]], data[line[j]], data[line[(j + 1) % n]]);
            out[line[j]] = match order {
                1 => (p - m) / (2.0 * h),
                _ => (p - 2.0 * c + m) / (h * h),
            };
        }
    }
    out
}

/// Periodic derivative of complex samples.
pub fn derivative_complex(
    grid: &Grid,
    data: &[Complex64],
    order: u32,
    axis: usize,
    scheme: Scheme,
) -> Result<Vec<Complex64>, FieldsError> {
    check(order, axis, grid)?;
    if data.len() != grid.len() {
        return Err(FieldsError::LengthMismatch { expected: grid.len(), got: data.len() });
    }
    Ok(match scheme {
        Scheme::Spectral => SpectralOps::new(grid).derivative(data, order, axis),
        Scheme::Central2 => central(grid, data, order, axis),
    })
}

/// Periodic derivative `d^order f / dx_axis^order`.
pub fn derivative(f: &ScalarField, order: u32, axis: usize, scheme: Scheme) -> Result<ScalarField, FieldsError> {
    let z: Vec<Complex64> = f.values().iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let d = derivative_complex(f.grid(), &z, order, axis, scheme)?;
    ScalarField::new(f.grid(), d.into_iter().map(|z| z.re).collect(), f.unit())
}

pub fn gradient(f: &ScalarField, scheme: Scheme) -> Result<VectorField, FieldsError> {
    let comps = (0..f.grid().dim())
        .map(|a| derivative(f, 1, a, scheme).map(ScalarField::into_values))
        .collect::<Result<_, _>>()?;
    VectorField::new(f.grid(), comps, f.unit())
}

pub fn laplacian(f: &ScalarField, scheme: Scheme) -> Result<ScalarField, FieldsError> {
    let mut acc = vec![0.0; f.grid().len()];
    for a in 0..f.grid().dim() {
        for (s, d) in acc.iter_mut().zip(derivative(f, 2, a, scheme)?.values()) {
            *s += d;
        }
    }
    ScalarField::new(f.grid(), acc, f.unit())
}

pub fn divergence(v: &VectorField, scheme: Scheme) -> Result<ScalarField, FieldsError> {
    let mut acc = vec![0.0; v.grid().len()];
    for a in 0..v.grid().dim() {
        let c = ScalarField::new(v.grid(), v.component(a).to_vec(), v.unit())?;
        for (s, d) in acc.iter_mut().zip(derivative(&c, 1, a, scheme)?.values()) {
            *s += d;
        }
    }
    ScalarField::new(v.grid(), acc, Unit::Rate)
}
