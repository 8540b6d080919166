use qhj_fields::WaveFunction;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::TrajError;

/// Draw `n` positions from `|psi|^2` on a 1D grid by inverting the CDF of the
/// piecewise-linear density. Draws are stratified: the `i`-th uses
/// `u = (i + U) / n` with `U` uniform from a ChaCha8 stream seeded by `seed`.
/// The result is sorted.
pub fn sample_density(psi: &WaveFunction, n: usize, seed: u64) -> Result<Vec<f64>, TrajError> {
    let grid = psi.grid();
    if grid.dim() != 1 {
        return Err(TrajError::Unsupported("density sampling is one-dimensional".into()));
    }
    let axis = &grid.axes()[0];
    let h = axis.spacing();
    let rho: Vec<f64> = psi.values().iter().map(|z| z.norm_sqr()).collect();
    let m = rho.len();
    // Cell j spans [x_j, x_j + h] with the right node wrapping at the end.
    let cell = |j: usize| (rho[j], rho[(j + 1) % m]);
    let mass: Vec<f64> = (0..m).map(|j| 0.5 * h * (cell(j).0 + cell(j).1)).collect();
    let total: f64 = mass.iter().sum();
    let mut cdf = Vec::with_capacity(m + 1);
    cdf.push(0.0);
    for w in &mass {
        cdf.push(cdf.last().unwrap() + w / total);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let out = (0..n)
        .map(|i| {
            let u = (i as f64 + rng.random::<f64>()) / n as f64;
            let j = cdf.partition_point(|&c| c <= u).clamp(1, m) - 1;
            let r = (u - cdf[j]) * total;
            let (r0, r1) = cell(j);
            let (a, b) = (0.5 * (r1 - r0) * h, r0 * h);
            let disc = (b * b + 4.0 * a * r).max(0.0);
            let s = if b + disc.sqrt() > 0.0 { 2.0 * r / (b + disc.sqrt()) } else { 0.5 };
            axis.coord(j) + s.clamp(0.0, 1.0) * h
        })
        .collect();
    Ok(out)
}
