use qhj_fields::export::fmt_f64;
use rayon::prelude::*;
use serde::Serialize;

use crate::{TrajError, VelocityField};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrajOptions {
    /// Integrator step; rounded so that a whole number of steps spans the interval.
    pub dt: f64,
    /// End time, default the last slice of the record.
    pub t_end: Option<f64>,
    /// Store every n-th step (and the last).
    pub output_stride: usize,
}

impl TrajOptions {
    pub fn new(dt: f64) -> Self {
        TrajOptions { dt, t_end: None, output_stride: 1 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrajMeta {
    pub integrator: &'static str,
    pub dt: f64,
    pub steps: usize,
    pub space_interpolation: &'static str,
    pub time_interpolation: &'static str,
}

/// One path: positions wrapped into the periodic domain and the winding
/// count per axis at every time stamp.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Path {
    pub positions: Vec<Vec<f64>>,
    pub winding: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrajectorySet {
    pub seeds: Vec<Vec<f64>>,
    pub times: Vec<f64>,
    pub extents: Vec<f64>,
    pub paths: Vec<Path>,
    pub meta: TrajMeta,
}

impl TrajectorySet {
    /// Position of seed `i` at stamp `k` with the windings added back.
    pub fn unwrapped(&self, i: usize, k: usize) -> Vec<f64> {
        let p = &self.paths[i];
        p.positions[k].iter().zip(&p.winding[k]).zip(&self.extents).map(|((x, &w), l)| x + w as f64 * l).collect()
    }

    /// Unwrapped positions along axis 0 of every seed at stamp `k`.
    pub fn column(&self, k: usize) -> Vec<f64> {
        (0..self.paths.len()).map(|i| self.unwrapped(i, k)[0]).collect()
    }

    pub fn endpoints(&self) -> Vec<Vec<f64>> {
        let k = self.times.len() - 1;
        (0..self.paths.len()).map(|i| self.unwrapped(i, k)).collect()
    }

    /// `seed,t,x[,y],winding` rows; 2D grids get `winding_x,winding_y`.
    pub fn to_csv(&self) -> String {
        let dim = self.extents.len();
        let mut out = String::from(if dim == 1 { "seed,t,x,winding\n" } else { "seed,t,x,y,winding_x,winding_y\n" });
        for (i, p) in self.paths.iter().enumerate() {
            for (k, t) in self.times.iter().enumerate() {
                let xs: Vec<String> = p.positions[k].iter().map(|&x| fmt_f64(x)).collect();
                let ws: Vec<String> = p.winding[k].iter().map(|w| w.to_string()).collect();
                out.push_str(&format!("{i},{},{},{}\n", fmt_f64(*t), xs.join(","), ws.join(",")));
            }
        }
        out
    }
}

fn wrap(field: &VelocityField, q: &[f64]) -> (Vec<f64>, Vec<i64>) {
    q.iter()
        .zip(field.grid().axes())
        .map(|(&x, a)| {
            let l = a.extent();
            let w = ((x - a.lower) / l).floor();
            (x - w * l, w as i64)
        })
        .unzip()
}

fn rk4_step(field: &VelocityField, t: f64, h: f64, q: &mut [f64]) -> Result<(), TrajError> {
    let eval = |t: f64, q: &[f64]| field.velocity(t, &wrap(field, q).0);
    let shift = |q: &[f64], k: &[f64], s: f64| -> Vec<f64> { q.iter().zip(k).map(|(a, b)| a + s * b).collect() };
    let k1 = eval(t, q)?;
    let k2 = eval(t + 0.5 * h, &shift(q, &k1, 0.5 * h))?;
    let k3 = eval(t + 0.5 * h, &shift(q, &k2, 0.5 * h))?;
    let k4 = eval(t + h, &shift(q, &k3, h))?;
    for (d, x) in q.iter_mut().enumerate() {
        *x += h / 6.0 * (k1[d] + 2.0 * k2[d] + 2.0 * k3[d] + k4[d]);
    }
    Ok(())
}

/// Integrate `dq/dt = grad S / m` from the first slice time for every seed.
pub fn integrate_trajectories(
    field: &VelocityField,
    seeds: &[Vec<f64>],
    opts: &TrajOptions,
) -> Result<TrajectorySet, TrajError> {
    if !(opts.dt.is_finite() && opts.dt > 0.0) {
        return Err(TrajError::BadStep(opts.dt));
    }
    let (t0, last) = field.span();
    let t1 = opts.t_end.unwrap_or(last);
    if t1 < t0 || t1 > last + 1e-9 * (last - t0).abs().max(1.0) {
        return Err(TrajError::TimeOutOfRange { t: t1, start: t0, end: last });
    }
    let steps = (((t1 - t0) / opts.dt).round() as usize).max(1);
    let h = (t1 - t0) / steps as f64;
    let stride = opts.output_stride.max(1);
    let stamps: Vec<usize> = (0..=steps).filter(|n| n % stride == 0 || *n == steps).collect();
    let dim = field.grid().dim();
    for (index, s) in seeds.iter().enumerate() {
        if s.len() != dim {
            return Err(TrajError::SeedDimension { index, got: s.len(), dim });
        }
        if !field.unmasked(t0, &wrap(field, s).0)? {
            return Err(TrajError::SeedMasked { index, position: s.clone() });
        }
    }
    let paths = seeds
        .par_iter()
        .enumerate()
        .map(|(index, seed)| {
            let mut q = seed.clone();
            let mut path = Path { positions: Vec::with_capacity(stamps.len()), winding: Vec::with_capacity(stamps.len()) };
            let mut push = |q: &[f64]| {
                let (x, w) = wrap(field, q);
                path.positions.push(x);
                path.winding.push(w);
            };
            push(&q);
            for n in 1..=steps {
                let t = t0 + (n - 1) as f64 * h;
                rk4_step(field, t, h, &mut q)?;
                if q.iter().any(|x| !x.is_finite()) {
                    return Err(TrajError::NonFinite { index, t: t + h });
                }
                if n % stride == 0 || n == steps {
                    push(&q);
                }
            }
            Ok(path)
        })
        .collect::<Result<Vec<_>, TrajError>>()?;
    Ok(TrajectorySet {
        seeds: seeds.to_vec(),
        times: stamps.iter().map(|&n| t0 + n as f64 * h).collect(),
        extents: field.grid().axes().iter().map(|a| a.extent()).collect(),
        paths,
        meta: TrajMeta {
            integrator: "rk4",
            dt: h,
            steps,
            space_interpolation: "cubic-lagrange",
            time_interpolation: "linear",
        },
    })
}
