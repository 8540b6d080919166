use crate::derivative::{derivative, laplacian};
use crate::{Constants, EvalOptions, FieldsError, Mask, ScalarField, Unit};

/// A field whose masked points hold the sentinel `0.0` and are excluded
/// from every norm.
#[derive(Clone, Debug, PartialEq)]
pub struct MaskedField {
    pub field: ScalarField,
    pub mask: Mask,
}

impl MaskedField {
    pub fn value(&self, p: usize) -> Option<f64> {
        self.mask.keeps(p).then(|| self.field.values()[p])
    }

    /// Largest `|value|` over kept points.
    pub fn max_abs(&self) -> f64 {
        (0..self.field.values().len()).filter_map(|p| self.value(p)).fold(0.0, |m, v| m.max(v.abs()))
    }
}

fn masked(r: &ScalarField, mask: Mask, f: impl Fn(usize) -> f64) -> Result<MaskedField, FieldsError> {
    let v = (0..r.values().len()).map(|p| if mask.keeps(p) { f(p) } else { 0.0 }).collect();
    Ok(MaskedField { field: ScalarField::new(r.grid(), v, Unit::Energy)?, mask })
}

/// `QP = -(hbar^2/2m) lap(R)/R`.
pub fn quantum_potential(r: &ScalarField, k: &Constants, opts: &EvalOptions) -> Result<MaskedField, FieldsError> {
    let lap = laplacian(r, opts.scheme)?;
    let pre = -k.hbar * k.hbar / (2.0 * k.mass);
    let (rv, lv) = (r.values(), lap.values());
    masked(r, Mask::from_amplitude(r, opts.mask_eps), |p| pre * lv[p] / rv[p])
}

/// `QK = -(hbar^2/2m) |grad R / R|^2`, never positive.
pub fn quantum_kinetic(r: &ScalarField, k: &Constants, opts: &EvalOptions) -> Result<MaskedField, FieldsError> {
    let grads = (0..r.grid().dim())
        .map(|a| derivative(r, 1, a, opts.scheme))
        .collect::<Result<Vec<_>, _>>()?;
    let pre = -k.hbar * k.hbar / (2.0 * k.mass);
    let rv = r.values();
    masked(r, Mask::from_amplitude(r, opts.mask_eps), |p| {
        pre * grads.iter().map(|g| (g.values()[p] / rv[p]).powi(2)).sum::<f64>()
    })
}

/// `-(hbar^2/8m) lap(R^2)/R^2`, the closed form of `(QP + QK)/2`.
pub fn half_sum_from_density(
    r: &ScalarField,
    k: &Constants,
    opts: &EvalOptions,
) -> Result<MaskedField, FieldsError> {
    let rho = ScalarField::new(r.grid(), r.values().iter().map(|x| x * x).collect(), Unit::Density)?;
    let lap = laplacian(&rho, opts.scheme)?;
    let pre = -k.hbar * k.hbar / (8.0 * k.mass);
    let (rv, lv) = (rho.values(), lap.values());
    masked(r, Mask::from_amplitude(r, opts.mask_eps), |p| pre * lv[p] / rv[p])
}

/// `-(hbar^2/2m) div(R grad R)/R^2`, the closed form of `QP + QK`.
pub fn sum_from_divergence(
    r: &ScalarField,
    k: &Constants,
    opts: &EvalOptions,
) -> Result<MaskedField, FieldsError> {
    let grid = r.grid();
    let mut div = vec![0.0; grid.len()];
    for a in 0..grid.dim() {
        let g = derivative(r, 1, a, opts.scheme)?;
        let flux: Vec<f64> = r.values().iter().zip(g.values()).map(|(x, d)| x * d).collect();
        let flux = ScalarField::new(grid, flux, Unit::Dimensionless)?;
        for (s, d) in div.iter_mut().zip(derivative(&flux, 1, a, opts.scheme)?.values()) {
            *s += d;
        }
    }
    let pre = -k.hbar * k.hbar / (2.0 * k.mass);
    let rv = r.values();
    masked(r, Mask::from_amplitude(r, opts.mask_eps), |p| pre * div[p] / (rv[p] * rv[p]))
}
