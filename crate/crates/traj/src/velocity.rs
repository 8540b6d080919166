use qhj_fields::{phase_gradient, EvalOptions, Grid, Mask};
use qhj_solvers::{Dynamics, EvolutionRecord};

use crate::TrajError;

/// Guidance velocity `grad S / m` of every slice of a record, with the
/// amplitude mask of each slice.
pub struct VelocityField {
    grid: Grid,
    times: Vec<f64>,
    slices: Vec<Vec<Vec<f64>>>,
    masks: Vec<Mask>,
}

/// Four-point Lagrange weights for nodes at offsets -1, 0, 1, 2 and fractional position `s`.
fn cubic_weights(s: f64) -> [f64; 4] {
    [
        -s * (s - 1.0) * (s - 2.0) / 6.0,
        (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0,
        -(s + 1.0) * s * (s - 2.0) / 2.0,
        (s + 1.0) * s * (s - 1.0) / 6.0,
    ]
}

impl VelocityField {
    pub fn from_record(record: &EvolutionRecord, opts: &EvalOptions) -> Result<Self, TrajError> {
        if record.dynamics != Dynamics::Schrodinger {
            return Err(TrajError::Unsupported("trajectories need a Schrodinger record".into()));
        }
        let m = record.constants.mass;
        let mut slices = Vec::with_capacity(record.len());
        let mut masks = Vec::with_capacity(record.len());
        for i in 0..record.len() {
            let psi = record.wave(i)?;
            let g = phase_gradient(&psi, opts.scheme)?;
            slices.push(g.components().iter().map(|c| c.iter().map(|v| v / m).collect()).collect());
            masks.push(Mask::from_amplitude(&psi.amplitude(), opts.mask_eps));
        }
        Ok(VelocityField { grid: record.grid.clone(), times: record.times(), slices, masks })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn span(&self) -> (f64, f64) {
        (self.times[0], *self.times.last().unwrap())
    }

    /// Slice index `j` and weight `w` with `t = (1 - w) t_j + w t_{j+1}`.
    fn bracket(&self, t: f64) -> Result<(usize, f64), TrajError> {
        let (start, end) = self.span();
        let tol = 1e-9 * (end - start).abs().max(1.0);
        if !(t >= start - tol && t <= end + tol) {
            return Err(TrajError::TimeOutOfRange { t, start, end });
        }
        if self.times.len() == 1 {
            return Ok((0, 0.0));
        }
        let j = self.times.partition_point(|&s| s <= t).clamp(1, self.times.len() - 1) - 1;
        let w = ((t - self.times[j]) / (self.times[j + 1] - self.times[j])).clamp(0.0, 1.0);
        Ok((j, w))
    }

    /// Cell index and fractional offset along `axis` of a wrapped coordinate.
    fn locate(&self, axis: usize, x: f64) -> (i64, f64) {
        let a = &self.grid.axes()[axis];
        let u = (x - a.lower) / a.spacing();
        let i = u.floor();
        (i as i64, u - i)
    }

    fn spatial(&self, slice: usize, x: &[f64], out: &mut [f64]) {
        let dim = self.grid.dim();
        let mut idx = [[0usize; 4]; 2];
        let mut wts = [[0.0; 4]; 2];
        for a in 0..dim {
            let (i, s) = self.locate(a, x[a]);
            let n = self.grid.axes()[a].points as i64;
            for o in 0..4 {
                idx[a][o] = (i + o as i64 - 1).rem_euclid(n) as usize;
            }
            wts[a] = cubic_weights(s);
        }
        out.iter_mut().for_each(|v| *v = 0.0);
        let comps = &self.slices[slice];
        if dim == 1 {
            for o in 0..4 {
                out[0] += wts[0][o] * comps[0][idx[0][o]];
            }
        } else {
            let ny = self.grid.axes()[1].points;
            for oi in 0..4 {
                for oj in 0..4 {
                    let w = wts[0][oi] * wts[1][oj];
                    let p = idx[0][oi] * ny + idx[1][oj];
                    for (c, v) in out.iter_mut().enumerate() {
                        *v += w * comps[c][p];
                    }
                }
            }
        }
    }

    /// Velocity at time `t` and wrapped position `x`: cubic in space, linear in time.
    pub fn velocity(&self, t: f64, x: &[f64]) -> Result<Vec<f64>, TrajError> {
        let (j, w) = self.bracket(t)?;
        let dim = self.grid.dim();
        let mut a = vec![0.0; dim];
        self.spatial(j, x, &mut a);
        if w > 0.0 {
            let mut b = vec![0.0; dim];
            self.spatial(j + 1, x, &mut b);
            a.iter_mut().zip(&b).for_each(|(u, v)| *u = (1.0 - w) * *u + w * v);
        }
        Ok(a)
    }

    /// Whether the grid point nearest `x` is kept by the mask of the slice at or before `t`.
    pub fn unmasked(&self, t: f64, x: &[f64]) -> Result<bool, TrajError> {
        let (j, w) = self.bracket(t)?;
        let j = if w > 0.5 { j + 1 } else { j };
        let mut p = 0;
        for a in 0..self.grid.dim() {
            let (i, s) = self.locate(a, x[a]);
            let n = self.grid.axes()[a].points as i64;
            let k = (i + (s >= 0.5) as i64).rem_euclid(n) as usize;
            p = p * self.grid.axes()[a].points + k;
        }
        Ok(self.masks[j].keeps(p))
    }
}
