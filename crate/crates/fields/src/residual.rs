use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::derivative::{derivative_complex, divergence};
use crate::polar::{phase_gradient, polar_decompose};
use crate::quantum::{quantum_kinetic, quantum_potential, MaskedField};
use crate::{Constants, EvalOptions, FieldsError, Mask, Scheme, ScalarField, Unit, VectorField, WaveFunction};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EquationId {
    /// `S_t + |grad S|^2/2m + QP + V`.
    BohmHj,
    /// `S_t + |grad S|^2/2m + (QP + QK)/2 + Vvec.grad S + V`.
    GeneralHj,
    /// Identity-metric equations with free coefficients `a, b, c`.
    Generalized,
    /// `d(R^2)/dt + div(R^2 grad S / m)`.
    Continuity,
    KgReal,
    KgFinal,
    KgContinuity,
}

impl EquationId {
    pub const ALL: [EquationId; 7] = [
        EquationId::BohmHj,
        EquationId::GeneralHj,
        EquationId::Generalized,
        EquationId::Continuity,
        EquationId::KgReal,
        EquationId::KgFinal,
        EquationId::KgContinuity,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EquationId::BohmHj => "bohm-hj",
            EquationId::GeneralHj => "general-hj",
            EquationId::Generalized => "generalized",
            EquationId::Continuity => "continuity",
            EquationId::KgReal => "kg-real",
            EquationId::KgFinal => "kg-final",
            EquationId::KgContinuity => "kg-continuity",
        }
    }

    pub fn is_relativistic(self) -> bool {
        matches!(self, EquationId::KgReal | EquationId::KgFinal | EquationId::KgContinuity)
    }
}

impl fmt::Display for EquationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EquationId {
    type Err = FieldsError;
    fn from_str(s: &str) -> Result<Self, FieldsError> {
        EquationId::ALL
            .into_iter()
            .find(|e| e.as_str() == s)
            .ok_or_else(|| FieldsError::UnknownEquation(s.to_string()))
    }
}

/// `general-hj` minus `bohm-hj` against its predicted value `(QK - QP)/2 + Vvec.grad S`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DifferenceSummary {
    pub measured_max_norm: f64,
    pub predicted_max_norm: f64,
    pub max_discrepancy: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub equation: EquationId,
    pub time: f64,
    /// Max of `|residual|` over unmasked points.
    pub max_norm: f64,
    /// `sqrt(sum R^2 r^2 / sum R^2)` over unmasked points.
    pub weighted_l2: f64,
    /// Fraction of grid points excluded by the node mask.
    pub mask_fraction: f64,
    /// Share of `sum R^2` carried by the excluded points.
    pub masked_probability: f64,
    pub mask_eps: f64,
    pub points: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub difference: Option<DifferenceSummary>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Difference {
    pub measured: MaskedField,
    pub predicted: MaskedField,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Residual {
    pub report: ResidualReport,
    pub field: MaskedField,
    pub difference: Option<Difference>,
}

fn build(r: &ScalarField, opts: &EvalOptions, f: impl Fn(usize) -> f64) -> Result<MaskedField, FieldsError> {
    let mask = Mask::from_amplitude(r, opts.mask_eps);
    let v = (0..r.values().len()).map(|p| if mask.keeps(p) { f(p) } else { 0.0 }).collect();
    Ok(MaskedField { field: ScalarField::new(r.grid(), v, Unit::Energy)?, mask })
}

fn report(eq: EquationId, time: f64, r: &ScalarField, m: &MaskedField) -> ResidualReport {
    let (mut max, mut num, mut den, mut total) = (0.0f64, 0.0, 0.0, 0.0);
    for (p, (&x, &rr)) in m.field.values().iter().zip(r.values()).enumerate() {
        total += rr * rr;
        if m.mask.keeps(p) {
            max = max.max(x.abs());
            num += rr * rr * x * x;
            den += rr * rr;
        }
    }
    ResidualReport {
        equation: eq,
        time,
        max_norm: max,
        weighted_l2: if den > 0.0 { (num / den).sqrt() } else { 0.0 },
        mask_fraction: m.mask.masked_fraction(),
        masked_probability: if total > 0.0 { 1.0 - den / total } else { 0.0 },
        mask_eps: m.mask.eps(),
        points: r.values().len(),
        difference: None,
    }
}

fn finish(eq: EquationId, time: f64, r: &ScalarField, field: MaskedField) -> Residual {
    Residual { report: report(eq, time, r, &field), field, difference: None }
}

/// Polar data of a non-relativistic state at one instant.
#[derive(Clone, Debug, PartialEq)]
pub struct NonrelState {
    pub time: f64,
    pub r: ScalarField,
    pub s: ScalarField,
    pub grad_s: VectorField,
    pub ds_dt: ScalarField,
    /// `d(R^2)/dt`, needed by the continuity equation.
    pub dr2_dt: Option<ScalarField>,
}

impl NonrelState {
    fn assemble(psi: &WaveFunction, st: Vec<f64>, rt: Vec<f64>, scheme: Scheme) -> Result<Self, FieldsError> {
        let grid = psi.grid();
        let (r, s) = polar_decompose(psi)?;
        Ok(NonrelState {
            time: psi.time(),
            r,
            s,
            grad_s: phase_gradient(psi, scheme)?,
            ds_dt: ScalarField::new(grid, st, Unit::Energy)?,
            dr2_dt: Some(ScalarField::new(grid, rt, Unit::Rate)?),
        })
    }

    /// From `psi` and its time derivative `psi_t`.
    pub fn from_wave(psi: &WaveFunction, psi_t: &[Complex64], scheme: Scheme) -> Result<Self, FieldsError> {
        let grid = psi.grid();
        if psi_t.len() != grid.len() {
            return Err(FieldsError::LengthMismatch { expected: grid.len(), got: psi_t.len() });
        }
        let hbar = psi.constants().hbar;
        let (mut st, mut rt) = (Vec::with_capacity(grid.len()), Vec::with_capacity(grid.len()));
        for (z, zt) in psi.values().iter().zip(psi_t) {
            let w = z.conj() * zt;
            let r2 = z.norm_sqr();
            st.push(if r2 > 1e-300 { hbar * w.im / r2 } else { 0.0 });
            rt.push(2.0 * w.re);
        }
        NonrelState::assemble(psi, st, rt, scheme)
    }

    /// Central differences in time over three evenly spaced slices:
    /// `S_t = hbar arg(psi_next conj(psi_prev)) / 2dt` and
    /// `(R^2)_t = (|psi_next|^2 - |psi_prev|^2) / 2dt`.
    pub fn from_slices(
        prev: &WaveFunction,
        mid: &WaveFunction,
        next: &WaveFunction,
        scheme: Scheme,
    ) -> Result<Self, FieldsError> {
        if prev.grid() != mid.grid() || next.grid() != mid.grid() {
            return Err(FieldsError::GridMismatch);
        }
        let (before, after) = (mid.time() - prev.time(), next.time() - mid.time());
        if before <= 0.0 || (before - after).abs() > 1e-9 * before.max(after) {
            return Err(FieldsError::UnevenSlices { before, after });
        }
        let dt = next.time() - prev.time();
        let hbar = mid.constants().hbar;
        let (st, rt) = next
            .values()
            .iter()
            .zip(prev.values())
            .map(|(a, b)| (hbar * (a * b.conj()).arg() / dt, (a.norm_sqr() - b.norm_sqr()) / dt))
            .unzip();
        NonrelState::assemble(mid, st, rt, scheme)
    }

    /// From polar fields; `grad S` comes from `psi = R exp(iS/hbar)`.
    pub fn from_polar(
        time: f64,
        r: ScalarField,
        s: ScalarField,
        ds_dt: ScalarField,
        dr2_dt: Option<ScalarField>,
        constants: Constants,
        scheme: Scheme,
    ) -> Result<Self, FieldsError> {
        r.same_grid(&s)?;
        r.same_grid(&ds_dt)?;
        if let Some(d) = &dr2_dt {
            r.same_grid(d)?;
        }
        let psi: Vec<Complex64> = r
            .values()
            .iter()
            .zip(s.values())
            .map(|(&a, &ph)| Complex64::from_polar(a, ph / constants.hbar))
            .collect();
        let psi = WaveFunction::new(r.grid(), psi, time, constants)?;
        let grad_s = phase_gradient(&psi, scheme)?;
        Ok(NonrelState { time, r, s, grad_s, ds_dt, dr2_dt })
    }
}

/// Free coefficients of the identity-metric equations.
#[derive(Clone, Debug, PartialEq)]
pub struct Coefficients {
    pub a: ScalarField,
    pub a_t: Option<ScalarField>,
    pub b: VectorField,
    pub c: ScalarField,
}

impl Coefficients {
    /// `a = R^2`, `b = R^2 Vvec`, `c = R^2 V`.
    pub fn polar(
        state: &NonrelState,
        potential: &ScalarField,
        vector_potential: Option<&VectorField>,
    ) -> Result<Self, FieldsError> {
        let grid = state.r.grid();
        let rho: Vec<f64> = state.r.values().iter().map(|x| x * x).collect();
        let b = (0..grid.dim())
            .map(|k| {
                rho.iter()
                    .enumerate()
                    .map(|(p, r2)| r2 * vector_potential.map_or(0.0, |v| v.component(k)[p]))
                    .collect()
            })
            .collect();
        let c = rho.iter().zip(potential.values()).map(|(r2, v)| r2 * v).collect();
        Ok(Coefficients {
            a: ScalarField::new(grid, rho, Unit::Density)?,
            a_t: state.dr2_dt.clone(),
            b: VectorField::new(grid, b, Unit::Momentum)?,
            c: ScalarField::new(grid, c, Unit::Energy)?,
        })
    }
}

/// Optional inputs; an absent potential is zero.
#[derive(Clone, Copy, Debug, Default)]
pub struct HjInputs<'a> {
    pub potential: Option<&'a ScalarField>,
    pub vector_potential: Option<&'a VectorField>,
    pub coefficients: Option<&'a Coefficients>,
}

fn at(f: Option<&ScalarField>, p: usize) -> f64 {
    f.map_or(0.0, |f| f.values()[p])
}

fn check_inputs(state: &NonrelState, inputs: &HjInputs) -> Result<(), FieldsError> {
    if let Some(v) = inputs.potential {
        state.r.same_grid(v)?;
    }
    if let Some(v) = inputs.vector_potential {
        if v.grid() != state.r.grid() {
            return Err(FieldsError::GridMismatch);
        }
    }
    if let Some(c) = inputs.coefficients {
        state.r.same_grid(&c.a)?;
        state.r.same_grid(&c.c)?;
        if c.b.grid() != state.r.grid() {
            return Err(FieldsError::GridMismatch);
        }
    }
    Ok(())
}

/// Pointwise left-hand side of a Hamilton-Jacobi type equation.
pub fn hj_residual(
    eq: EquationId,
    state: &NonrelState,
    inputs: &HjInputs,
    k: &Constants,
    opts: &EvalOptions,
) -> Result<Residual, FieldsError> {
    check_inputs(state, inputs)?;
    let (t, r) = (state.time, &state.r);
    let st = state.ds_dt.values();
    let kin = |p: usize| st[p] + state.grad_s.norm_sq_at(p) / (2.0 * k.mass);
    let vdot = |p: usize| inputs.vector_potential.map_or(0.0, |v| v.dot_at(&state.grad_s, p));
    match eq {
        EquationId::BohmHj | EquationId::GeneralHj => {
            let qp = quantum_potential(r, k, opts)?;
            let qk = quantum_kinetic(r, k, opts)?;
            let (qpv, qkv) = (qp.field.values(), qk.field.values());
            let bohm = build(r, opts, |p| kin(p) + qpv[p] + at(inputs.potential, p))?;
            if eq == EquationId::BohmHj {
                return Ok(finish(eq, t, r, bohm));
            }
            let general = build(r, opts, |p| {
                kin(p) + 0.5 * (qpv[p] + qkv[p]) + vdot(p) + at(inputs.potential, p)
            })?;
            let (gv, bv) = (general.field.values(), bohm.field.values());
            let measured = build(r, opts, |p| gv[p] - bv[p])?;
            let predicted = build(r, opts, |p| 0.5 * (qkv[p] - qpv[p]) + vdot(p))?;
            let discrepancy = (0..gv.len())
                .filter(|&p| measured.mask.keeps(p))
                .map(|p| (measured.field.values()[p] - predicted.field.values()[p]).abs())
                .fold(0.0, f64::max);
            let mut out = finish(eq, t, r, general);
            out.report.difference = Some(DifferenceSummary {
                measured_max_norm: measured.max_abs(),
                predicted_max_norm: predicted.max_abs(),
                max_discrepancy: discrepancy,
            });
            out.difference = Some(Difference { measured, predicted });
            Ok(out)
        }
        EquationId::Generalized => {
            let c = inputs.coefficients.ok_or(FieldsError::MissingInput("coefficients a, b, c"))?;
            let lap_a = crate::derivative::laplacian(&c.a, opts.scheme)?;
            let (av, lv, cv) = (c.a.values(), lap_a.values(), c.c.values());
            let h2 = k.hbar * k.hbar / (8.0 * k.mass);
            let field = build(r, opts, |p| {
                kin(p) - h2 * lv[p] / av[p] + c.b.dot_at(&state.grad_s, p) / av[p] + cv[p] / av[p]
            })?;
            Ok(finish(eq, t, r, field))
        }
        other => Err(FieldsError::WrongEvaluator(other.to_string())),
    }
}

/// Continuity-type equations: `continuity` and the imaginary part of
/// `generalized`, `a_t + div(a grad S / m) + div b`.
pub fn continuity_residual(
    eq: EquationId,
    state: &NonrelState,
    inputs: &HjInputs,
    k: &Constants,
    opts: &EvalOptions,
) -> Result<Residual, FieldsError> {
    check_inputs(state, inputs)?;
    let grid = state.r.grid();
    let (rate, weight, extra) = match eq {
        EquationId::Continuity => {
            let rate = state.dr2_dt.as_ref().ok_or(FieldsError::MissingInput("second time slice"))?;
            let rho: Vec<f64> = state.r.values().iter().map(|x| x * x).collect();
            (rate, rho, None)
        }
        EquationId::Generalized => {
            let c = inputs.coefficients.ok_or(FieldsError::MissingInput("coefficients a, b, c"))?;
            let rate = c.a_t.as_ref().ok_or(FieldsError::MissingInput("time derivative of a"))?;
            (rate, c.a.values().to_vec(), Some(divergence(&c.b, opts.scheme)?))
        }
        other => return Err(FieldsError::WrongEvaluator(other.to_string())),
    };
    let comps = (0..grid.dim())
        .map(|a| weight.iter().zip(state.grad_s.component(a)).map(|(w, g)| w * g / k.mass).collect())
        .collect();
    let flux = VectorField::new(grid, comps, Unit::Momentum)?;
    let div = divergence(&flux, opts.scheme)?;
    let (rv, dv) = (rate.values(), div.values());
    let field = build(&state.r, opts, |p| {
        rv[p] + dv[p] + extra.as_ref().map_or(0.0, |e| e.values()[p])
    })?;
    Ok(finish(eq, state.time, &state.r, field))
}

/// Polar data of a 1+1 dimensional Klein-Gordon field, with `q^0 = c t`
/// and signature `(+, -)`.
#[derive(Clone, Debug, PartialEq)]
pub struct KgState {
    pub time: f64,
    pub r: ScalarField,
    pub r_t: Vec<f64>,
    pub r_tt: Vec<f64>,
    pub r_x: Vec<f64>,
    pub r_xx: Vec<f64>,
    pub s_t: Vec<f64>,
    pub s_x: Vec<f64>,
    /// `d/dt (R^2 S_t)`.
    pub flux_t: Vec<f64>,
    /// `d/dx (R^2 S_x)`.
    pub flux_x: Vec<f64>,
}

impl KgState {
    /// From `phi`, `phi_t` and `phi_tt`; space derivatives by `scheme`.
    pub fn from_field(
        phi: &WaveFunction,
        phi_t: &[Complex64],
        phi_tt: &[Complex64],
        scheme: Scheme,
    ) -> Result<Self, FieldsError> {
        let grid = phi.grid();
        if grid.dim() != 1 {
            return Err(FieldsError::NeedsOneDimension("Klein-Gordon evaluation"));
        }
        for d in [phi_t, phi_tt] {
            if d.len() != grid.len() {
                return Err(FieldsError::LengthMismatch { expected: grid.len(), got: d.len() });
            }
        }
        let hbar = phi.constants().hbar;
        let z = phi.values();
        let zx = derivative_complex(grid, z, 1, 0, scheme)?;
        let zxx = derivative_complex(grid, z, 2, 0, scheme)?;
        let n = grid.len();
        let mut s = KgState {
            time: phi.time(),
            r: phi.amplitude(),
            r_t: Vec::with_capacity(n),
            r_tt: Vec::with_capacity(n),
            r_x: Vec::with_capacity(n),
            r_xx: Vec::with_capacity(n),
            s_t: Vec::with_capacity(n),
            s_x: Vec::with_capacity(n),
            flux_t: Vec::with_capacity(n),
            flux_x: Vec::with_capacity(n),
        };
        // With R^2 = |phi|^2: R R' = Re(phi* phi'), R^2 S' = hbar Im(phi* phi'),
        // R R'' = Re(phi* phi'') + |phi'|^2 - R'^2 and (R^2 S')' = hbar Im(phi* phi'').
        let point = |w1: Complex64, w2: Complex64, d1: Complex64, r: f64| -> (f64, f64, f64, f64) {
            if r * r <= 1e-300 {
                return (0.0, 0.0, 0.0, hbar * w2.im);
            }
            let r1 = w1.re / r;
            let r2 = (w2.re + d1.norm_sqr() - r1 * r1) / r;
            (r1, r2, hbar * w1.im / (r * r), hbar * w2.im)
        };
        for p in 0..n {
            let r = z[p].norm();
            let c = z[p].conj();
            let (rt, rtt, st, ft) = point(c * phi_t[p], c * phi_tt[p], phi_t[p], r);
            let (rx, rxx, sx, fx) = point(c * zx[p], c * zxx[p], zx[p], r);
            s.r_t.push(rt);
            s.r_tt.push(rtt);
            s.s_t.push(st);
            s.flux_t.push(ft);
            s.r_x.push(rx);
            s.r_xx.push(rxx);
            s.s_x.push(sx);
            s.flux_x.push(fx);
        }
        Ok(s)
    }
}

/// `phi_tt = c^2 phi_xx - (m0 c^2/hbar)^2 phi`, the Klein-Gordon acceleration.
pub fn kg_acceleration(phi: &WaveFunction, k: &Constants, scheme: Scheme) -> Result<Vec<Complex64>, FieldsError> {
    let zxx = derivative_complex(phi.grid(), phi.values(), 2, 0, scheme)?;
    let w = k.mass * k.c_light * k.c_light / k.hbar;
    Ok(phi.values().iter().zip(&zxx).map(|(z, d)| k.c_light * k.c_light * d - w * w * z).collect())
}

pub fn kg_residual(eq: EquationId, state: &KgState, k: &Constants, opts: &EvalOptions) -> Result<Residual, FieldsError> {
    let (m0, c2, h2) = (k.mass, k.c_light * k.c_light, k.hbar * k.hbar);
    let s = state;
    let grad_sq = |p: usize| s.s_t[p] * s.s_t[p] / c2 - s.s_x[p] * s.s_x[p];
    let box_r = |p: usize| (s.r_tt[p] / c2 - s.r_xx[p]) / s.r.values()[p];
    let grad_r_sq = |p: usize| (s.r_t[p] * s.r_t[p] / c2 - s.r_x[p] * s.r_x[p]) / s.r.values()[p].powi(2);
    let field = match eq {
        EquationId::KgReal => build(&s.r, opts, |p| {
            grad_sq(p) / (2.0 * m0) - m0 * c2 / 2.0 - h2 / (2.0 * m0) * box_r(p)
        })?,
        EquationId::KgFinal => build(&s.r, opts, |p| {
            grad_sq(p) / (2.0 * m0) - m0 * c2 / 2.0 - h2 / (4.0 * m0) * (box_r(p) + grad_r_sq(p))
        })?,
        EquationId::KgContinuity => build(&s.r, opts, |p| s.flux_t[p] / c2 - s.flux_x[p])?,
        other => return Err(FieldsError::WrongEvaluator(other.to_string())),
    };
    Ok(finish(eq, s.time, &s.r, field))
}
