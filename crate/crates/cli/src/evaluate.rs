use qhj_fields::{
    continuity_residual, hj_residual, kg_acceleration, kg_residual, quantum_kinetic, quantum_potential, Coefficients,
    EquationId, HjInputs, KgState, MaskedField, NonrelState, ResidualReport, WaveFunction,
};
use qhj_solvers::{Dynamics, EvolutionRecord, ScenarioConfig, SplitStep};
use serde::Serialize;

use crate::CliError;

/// A residual of one slice, named by equation (and part, for `generalized`).
pub struct NamedResidual {
    pub name: String,
    pub report: ResidualReport,
    pub field: MaskedField,
}

#[derive(Serialize)]
pub struct NamedReport<'a> {
    pub name: &'a str,
    #[serde(flatten)]
    pub report: &'a ResidualReport,
}

pub struct SliceEvaluation {
    pub index: usize,
    pub time: f64,
    pub residuals: Vec<NamedResidual>,
    /// Schrodinger slices only.
    pub qp: Option<MaskedField>,
    pub qk: Option<MaskedField>,
}

pub fn parse_equations(list: &[String]) -> Result<Vec<EquationId>, CliError> {
    let mut out = Vec::new();
    for s in list {
        let id: EquationId = s.trim().parse().map_err(|_| {
            let known: Vec<&str> = EquationId::ALL.iter().map(|e| e.as_str()).collect();
            CliError::Usage(format!("unknown equation `{s}`; expected one of {}", known.join(", ")))
        })?;
        if !out.contains(&id) {
            out.push(id);
        }
    }
    if out.is_empty() {
        return Err(CliError::Usage("--eq needs at least one equation".into()));
    }
    Ok(out)
}

pub fn check_equations(dynamics: Dynamics, eqs: &[EquationId]) -> Result<(), CliError> {
    let relativistic = dynamics == Dynamics::KleinGordon;
    if let Some(e) = eqs.iter().find(|e| e.is_relativistic() != relativistic) {
        return Err(CliError::Usage(format!("equation `{e}` does not apply to {dynamics:?} dynamics")));
    }
    Ok(())
}

fn push(out: &mut Vec<NamedResidual>, name: &str, r: qhj_fields::Residual) {
    out.push(NamedResidual { name: name.to_string(), report: r.report, field: r.field });
}

/// Residuals of every stored slice. Schrodinger slices get their time
/// derivatives from one split step either side of the slice, so the
/// difference quotient spans `2 dt` whatever the output stride. Klein-Gordon
/// slices use the stored rate and the spectral right-hand side for `phi_tt`.
pub fn evaluate_record(
    cfg: &ScenarioConfig,
    record: &EvolutionRecord,
    eqs: &[EquationId],
) -> Result<Vec<SliceEvaluation>, CliError> {
    check_equations(record.dynamics, eqs)?;
    let k = record.constants;
    let opts = cfg.evaluation;
    let grid = &record.grid;
    match record.dynamics {
        Dynamics::Schrodinger => {
            let v = cfg.potential.sample(grid, &k)?;
            let dt = record.meta.dt;
            let fwd = SplitStep::new(grid, &v, &k, dt)?;
            let back = SplitStep::new(grid, &v, &k, -dt)?;
            let inputs = HjInputs { potential: Some(&v), ..Default::default() };
            (0..record.len())
                .map(|i| {
                    let mid = record.wave(i)?;
                    let shifted = |st: &SplitStep, s: f64| -> Result<WaveFunction, CliError> {
                        let mut vals = mid.values().to_vec();
                        st.step(&mut vals);
                        Ok(WaveFunction::new(grid, vals, mid.time() + s * dt, k)?)
                    };
                    let state = NonrelState::from_slices(&shifted(&back, -1.0)?, &mid, &shifted(&fwd, 1.0)?, opts.scheme)?;
                    let mut residuals = Vec::new();
                    for &eq in eqs {
                        match eq {
                            EquationId::BohmHj | EquationId::GeneralHj => {
                                push(&mut residuals, eq.as_str(), hj_residual(eq, &state, &inputs, &k, &opts)?)
                            }
                            EquationId::Continuity => {
                                push(&mut residuals, eq.as_str(), continuity_residual(eq, &state, &inputs, &k, &opts)?)
                            }
                            EquationId::Generalized => {
                                let c = Coefficients::polar(&state, &v, None)?;
                                let with = HjInputs { coefficients: Some(&c), ..inputs };
                                push(&mut residuals, "generalized.real", hj_residual(eq, &state, &with, &k, &opts)?);
                                push(
                                    &mut residuals,
                                    "generalized.imaginary",
                                    continuity_residual(eq, &state, &with, &k, &opts)?,
                                );
                            }
                            _ => unreachable!("checked above"),
                        }
                    }
                    Ok(SliceEvaluation {
                        index: i,
                        time: mid.time(),
                        residuals,
                        qp: Some(quantum_potential(&state.r, &k, &opts)?),
                        qk: Some(quantum_kinetic(&state.r, &k, &opts)?),
                    })
                })
                .collect()
        }
        Dynamics::KleinGordon => (0..record.len())
            .map(|i| {
                let phi = record.wave(i)?;
                let rate = record.snapshots[i]
                    .rate
                    .as_ref()
                    .ok_or_else(|| CliError::Config("Klein-Gordon slice without a stored rate".into()))?;
                let acc = kg_acceleration(&phi, &k, opts.scheme)?;
                let state = KgState::from_field(&phi, rate, &acc, opts.scheme)?;
                let mut residuals = Vec::new();
                for &eq in eqs {
                    push(&mut residuals, eq.as_str(), kg_residual(eq, &state, &k, &opts)?);
                }
                Ok(SliceEvaluation { index: i, time: phi.time(), residuals, qp: None, qk: None })
            })
            .collect(),
    }
}

/// Whether a residual vanishes on exact solutions of the propagated equation.
/// `general-hj` and the real part of `generalized` carry the extra half sum
/// of QK and QP and are reported, not gated.
pub fn vanishes_on_solutions(name: &str) -> bool {
    !matches!(name, "general-hj" | "generalized.real")
}

/// Largest max-norm per residual name over all slices, in first-seen order.
pub fn worst_by_name(slices: &[SliceEvaluation]) -> Vec<(String, f64)> {
    let mut out: Vec<(String, f64)> = Vec::new();
    for r in slices.iter().flat_map(|s| &s.residuals) {
        match out.iter_mut().find(|(n, _)| *n == r.name) {
            Some((_, v)) => *v = v.max(r.report.max_norm),
            None => out.push((r.name.clone(), r.report.max_norm)),
        }
    }
    out
}
