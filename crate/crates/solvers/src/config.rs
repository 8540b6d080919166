use qhj_fields::{Complex64, Constants, EvalOptions, Grid, ScalarField, Unit};
use serde::{Deserialize, Serialize};

use crate::SolverError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Dynamics {
    #[default]
    Schrodinger,
    KleinGordon,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PotentialSpec {
    Free,
    /// `V = m omega^2 |x|^2 / 2`.
    Harmonic { omega: f64 },
    /// One value per grid point, row-major.
    Sampled { values: Vec<f64> },
}

impl PotentialSpec {
    pub fn sample(&self, grid: &Grid, k: &Constants) -> Result<ScalarField, SolverError> {
        Ok(match self {
            PotentialSpec::Free => ScalarField::constant(grid, 0.0, Unit::Energy)?,
            PotentialSpec::Harmonic { omega } => ScalarField::from_fn(grid, Unit::Energy, |x| {
                0.5 * k.mass * omega * omega * x.iter().map(|v| v * v).sum::<f64>()
            })?,
            PotentialSpec::Sampled { values } => ScalarField::new(grid, values.clone(), Unit::Energy)?,
        })
    }

    pub fn is_free(&self) -> bool {
        match self {
            PotentialSpec::Free => true,
            PotentialSpec::Harmonic { .. } => false,
            PotentialSpec::Sampled { values } => values.iter().all(|&v| v == 0.0),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum InitialState {
    FreeGaussian {
        sigma0: f64,
        #[serde(default)]
        k0: f64,
        #[serde(default)]
        x0: f64,
    },
    HarmonicGround {
        omega: f64,
    },
    /// Ground state displaced to `x0` at rest.
    HarmonicCoherent {
        omega: f64,
        x0: f64,
    },
    KgPlaneWave {
        p: f64,
    },
    /// Explicit samples; `re_t`/`im_t` give the initial time derivative
    /// required by Klein-Gordon runs.
    Sampled {
        re: Vec<f64>,
        im: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        re_t: Option<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        im_t: Option<Vec<f64>>,
    },
}

impl InitialState {
    pub fn name(&self) -> &'static str {
        match self {
            InitialState::FreeGaussian { .. } => "free-gaussian",
            InitialState::HarmonicGround { .. } => "harmonic-ground",
            InitialState::HarmonicCoherent { .. } => "harmonic-coherent",
            InitialState::KgPlaneWave { .. } => "kg-plane-wave",
            InitialState::Sampled { .. } => "sampled",
        }
    }

    pub(crate) fn sampled_values(&self) -> Option<(Vec<Complex64>, Option<Vec<Complex64>>)> {
        match self {
            InitialState::Sampled { re, im, re_t, im_t } => {
                let join = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(&x, &y)| Complex64::new(x, y)).collect();
                let rate = match (re_t, im_t) {
                    (Some(a), Some(b)) => Some(join(a, b)),
                    _ => None,
                };
                Some((join(re, im), rate))
            }
            _ => None,
        }
    }
}

fn default_stride() -> usize {
    10
}

/// A complete, self-describing simulation scenario.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub grid: Grid,
    #[serde(default)]
    pub constants: Constants,
    #[serde(default)]
    pub dynamics: Dynamics,
    pub potential: PotentialSpec,
    pub initial_state: InitialState,
    pub dt: f64,
    pub steps: usize,
    #[serde(default = "default_stride")]
    pub output_stride: usize,
    #[serde(default)]
    pub evaluation: EvalOptions,
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self, SolverError> {
        let c: ScenarioConfig = serde_json::from_str(text)?;
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        let bad = |s: String| Err(SolverError::Config(s));
        self.constants.validate().map_err(SolverError::Config)?;
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return bad(format!("dt = {} must be positive", self.dt));
        }
        if self.steps < 1 {
            return bad("steps must be at least 1".into());
        }
        if self.output_stride < 1 {
            return bad("output_stride must be at least 1".into());
        }
        if !(self.evaluation.mask_eps >= 0.0 && self.evaluation.mask_eps < 1.0) {
            return bad(format!("evaluation.mask_eps = {} must lie in [0, 1)", self.evaluation.mask_eps));
        }
        let n = self.grid.len();
        if let PotentialSpec::Sampled { values } = &self.potential {
            if values.len() != n {
                return bad(format!("potential has {} samples for {n} grid points", values.len()));
            }
        }
        if let InitialState::Sampled { re, im, re_t, im_t } = &self.initial_state {
            let lens = [Some(re), Some(im), re_t.as_ref(), im_t.as_ref()];
            if lens.iter().flatten().any(|v| v.len() != n) {
                return bad(format!("sampled initial state must have {n} values per component"));
            }
            if re_t.is_some() != im_t.is_some() {
                return bad("re_t and im_t must be given together".into());
            }
        }
        match self.dynamics {
            Dynamics::Schrodinger => {
                if matches!(self.initial_state, InitialState::KgPlaneWave { .. }) {
                    return bad("kg-plane-wave needs dynamics = klein-gordon".into());
                }
                if self.constants.mass <= 0.0 {
                    return bad("Schrodinger dynamics needs mass > 0".into());
                }
            }
            Dynamics::KleinGordon => {
                if self.grid.dim() != 1 {
                    return bad("Klein-Gordon runs are one-dimensional".into());
                }
                if !self.potential.is_free() {
                    return bad("Klein-Gordon runs take no potential".into());
                }
                match &self.initial_state {
                    InitialState::KgPlaneWave { .. } => {}
                    InitialState::Sampled { re_t: Some(_), .. } => {}
                    other => {
                        return bad(format!("`{}` gives no initial time derivative for Klein-Gordon", other.name()))
                    }
                }
                crate::kg::check_stability(&self.grid, &self.constants, self.dt)?;
            }
        }
        Ok(())
    }

    pub fn t_end(&self) -> f64 {
        self.dt * self.steps as f64
    }
}
