use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{FieldsError, Grid};

/// Physical dimension tag carried by a field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Unit {
    Dimensionless,
    Amplitude,
    Density,
    Action,
    Momentum,
    Velocity,
    Energy,
    Rate,
}

/// Physical constants. `mass` is the rest mass in the relativistic setting.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Constants {
    pub hbar: f64,
    pub mass: f64,
    pub c_light: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Constants { hbar: 1.0, mass: 1.0, c_light: 1.0 }
    }
}

impl Constants {
    pub fn validate(&self) -> Result<(), String> {
        for (name, v) in [("hbar", self.hbar), ("mass", self.mass), ("c_light", self.c_light)] {
            if !v.is_finite() || v < 0.0 || (v == 0.0 && name != "mass") {
                return Err(format!("{name} = {v} is not a valid constant"));
            }
        }
        Ok(())
    }
}

fn check_values<T: Copy>(
    grid: &Grid,
    values: &[T],
    finite: impl Fn(T) -> bool,
) -> Result<(), FieldsError> {
    if values.len() != grid.len() {
        return Err(FieldsError::LengthMismatch { expected: grid.len(), got: values.len() });
    }
    match values.iter().position(|&v| !finite(v)) {
        Some(index) => Err(FieldsError::NonFinite { index }),
        None => Ok(()),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalarField {
    grid: Grid,
    values: Vec<f64>,
    unit: Unit,
}

impl ScalarField {
    pub fn new(grid: &Grid, values: Vec<f64>, unit: Unit) -> Result<Self, FieldsError> {
        check_values(grid, &values, f64::is_finite)?;
        Ok(ScalarField { grid: grid.clone(), values, unit })
    }

    /// Sample `f` at every grid point.
    pub fn from_fn(grid: &Grid, unit: Unit, f: impl Fn(&[f64]) -> f64) -> Result<Self, FieldsError> {
        let values = (0..grid.len()).map(|p| f(&grid.point(p))).collect();
        ScalarField::new(grid, values, unit)
    }

    pub fn constant(grid: &Grid, value: f64, unit: Unit) -> Result<Self, FieldsError> {
        ScalarField::new(grid, vec![value; grid.len()], unit)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn unit(&self) -> Unit {
        self.unit
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn same_grid(&self, other: &ScalarField) -> Result<(), FieldsError> {
        if self.grid == other.grid {
            Ok(())
        } else {
            Err(FieldsError::GridMismatch)
        }
    }
}

/// One component per axis.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorField {
    grid: Grid,
    components: Vec<Vec<f64>>,
    unit: Unit,
}

impl VectorField {
    pub fn new(grid: &Grid, components: Vec<Vec<f64>>, unit: Unit) -> Result<Self, FieldsError> {
        if components.len() != grid.dim() {
            return Err(FieldsError::LengthMismatch { expected: grid.dim(), got: components.len() });
        }
        for c in &components {
            check_values(grid, c, f64::is_finite)?;
        }
        Ok(VectorField { grid: grid.clone(), components, unit })
    }

    pub fn zeros(grid: &Grid, unit: Unit) -> Self {
        VectorField { grid: grid.clone(), components: vec![vec![0.0; grid.len()]; grid.dim()], unit }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn component(&self, axis: usize) -> &[f64] {
        &self.components[axis]
    }

    pub fn components(&self) -> &[Vec<f64>] {
        &self.components
    }

    pub fn unit(&self) -> Unit {
        self.unit
    }

    /// `sum_k u_k w_k` at point `p`.
    pub fn dot_at(&self, other: &VectorField, p: usize) -> f64 {
        self.components.iter().zip(&other.components).map(|(u, w)| u[p] * w[p]).sum()
    }

    pub fn norm_sq_at(&self, p: usize) -> f64 {
        self.components.iter().map(|u| u[p] * u[p]).sum()
    }
}

/// Complex field sampled on a grid at one instant.
#[derive(Clone, Debug, PartialEq)]
pub struct WaveFunction {
    grid: Grid,
    values: Vec<Complex64>,
    time: f64,
    constants: Constants,
}

impl WaveFunction {
    pub fn new(grid: &Grid, values: Vec<Complex64>, time: f64, constants: Constants) -> Result<Self, FieldsError> {
        check_values(grid, &values, |z: Complex64| z.is_finite())?;
        if values.iter().all(|z| z.norm_sqr() == 0.0) {
            return Err(FieldsError::AllZero);
        }
        Ok(WaveFunction { grid: grid.clone(), values, time, constants })
    }

    pub fn from_fn(
        grid: &Grid,
        time: f64,
        constants: Constants,
        f: impl Fn(&[f64]) -> Complex64,
    ) -> Result<Self, FieldsError> {
        let values = (0..grid.len()).map(|p| f(&grid.point(p))).collect();
        WaveFunction::new(grid, values, time, constants)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn constants(&self) -> Constants {
        self.constants
    }

    /// Discrete `sum |psi|^2 dV`.
    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.cell_volume()
    }

    /// Discrete L2 distance `sqrt(sum |psi - phi|^2 dV)`.
    pub fn distance(&self, other: &WaveFunction) -> Result<f64, FieldsError> {
        if self.grid != other.grid {
            return Err(FieldsError::GridMismatch);
        }
        let s: f64 = self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm_sqr()).sum();
        Ok((s * self.grid.cell_volume()).sqrt())
    }

    pub fn amplitude(&self) -> ScalarField {
        let r = self.values.iter().map(|z| z.norm()).collect();
        ScalarField { grid: self.grid.clone(), values: r, unit: Unit::Amplitude }
    }

    pub fn density(&self) -> ScalarField {
        let r = self.values.iter().map(|z| z.norm_sqr()).collect();
        ScalarField { grid: self.grid.clone(), values: r, unit: Unit::Density }
    }
}
