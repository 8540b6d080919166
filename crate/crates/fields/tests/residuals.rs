mod common;

use common::*;
use qhj_fields::*;
use std::f64::consts::PI;

/// Default masking leaves FFT roundoff divided by R ~ 1e-6 at the edge,
/// about 5e-9 here; 1e-4 keeps all but ~2e-9 of the probability.
const HARMONIC_MASK: f64 = 1e-4;

fn harmonic_state(g: &Grid, t: f64) -> (NonrelState, ScalarField) {
    let (psi, psi_t) = wave(g, t, |x| harmonic_ground(x, t));
    let v = ScalarField::from_fn(g, Unit::Energy, |x| 0.5 * x[0] * x[0]).unwrap();
    (NonrelState::from_wave(&psi, &psi_t, Scheme::Spectral).unwrap(), v)
}

fn harmonic_opts() -> EvalOptions {
    EvalOptions { mask_eps: HARMONIC_MASK, ..EvalOptions::default() }
}

#[test]
fn harmonic_ground_satisfies_bohm_equation() {
    let g = line(128, 10.0);
    for t in [0.0, 0.3, 2.0] {
        let (s, v) = harmonic_state(&g, t);
        let inp = HjInputs { potential: Some(&v), ..HjInputs::default() };
        let r = hj_residual(EquationId::BohmHj, &s, &inp, &Constants::default(), &harmonic_opts()).unwrap();
        assert!(r.report.max_norm <= 1e-10, "{:e}", r.report.max_norm);
        assert!(r.report.masked_probability < 1e-8);
        assert!(r.report.mask_fraction < 0.6);
        assert_eq!(r.report.time, t);
    }
}

#[test]
fn general_minus_bohm_is_half_qk_minus_qp() {
    let g = line(128, 10.0);
    let (s, v) = harmonic_state(&g, 0.5);
    let inp = HjInputs { potential: Some(&v), ..HjInputs::default() };
    let k = Constants::default();
    let r = hj_residual(EquationId::GeneralHj, &s, &inp, &k, &harmonic_opts()).unwrap();
    let d = r.report.difference.as_ref().unwrap();
    assert!(d.max_discrepancy <= 1e-10);
    // For R = exp(-x^2/2): (QK - QP)/2 = -1/4, so the general residual is -1/4 on kept points.
    let diff = r.difference.as_ref().unwrap();
    for p in (0..g.len()).filter(|&p| r.field.mask.keeps(p)) {
        assert!((diff.measured.field.values()[p] + 0.25).abs() < 1e-9);
        assert!((r.field.field.values()[p] + 0.25).abs() < 1e-9);
    }
}

#[test]
fn vector_potential_enters_only_the_general_equation() {
    let g = line(128, 10.0);
    let (s, v) = harmonic_state(&g, 0.0);
    // Give the state a uniform drift so V.grad S is nonzero.
    let grad = VectorField::new(&g, vec![vec![0.3; g.len()]], Unit::Momentum).unwrap();
    let s = NonrelState { grad_s: grad, ..s };
    let vv = VectorField::new(&g, vec![vec![2.0; g.len()]], Unit::Velocity).unwrap();
    let k = Constants::default();
    let with = HjInputs { potential: Some(&v), vector_potential: Some(&vv), ..HjInputs::default() };
    let without = HjInputs { potential: Some(&v), ..HjInputs::default() };
    let a = hj_residual(EquationId::GeneralHj, &s, &with, &k, &harmonic_opts()).unwrap();
    let b = hj_residual(EquationId::GeneralHj, &s, &without, &k, &harmonic_opts()).unwrap();
    for p in (0..g.len()).filter(|&p| a.field.mask.keeps(p)) {
        assert!((a.field.field.values()[p] - b.field.field.values()[p] - 0.6).abs() < 1e-12);
    }
    assert!(a.report.difference.unwrap().max_discrepancy < 1e-12);
    let c = hj_residual(EquationId::BohmHj, &s, &with, &k, &harmonic_opts()).unwrap();
    let d = hj_residual(EquationId::BohmHj, &s, &without, &k, &harmonic_opts()).unwrap();
    assert_eq!(c.field, d.field);
}

#[test]
fn free_packet_satisfies_bohm_and_continuity() {
    let g = line(512, 20.0);
    let k = Constants::default();
    for t in [0.0, 0.5, 1.0] {
        for k0 in [0.0, 1.0] {
            let (psi, psi_t) = wave(&g, t, |x| free_gaussian(x, t, 1.0, k0, 0.0));
            let s = NonrelState::from_wave(&psi, &psi_t, Scheme::Spectral).unwrap();
            let o = EvalOptions::default();
            let hj = hj_residual(EquationId::BohmHj, &s, &HjInputs::default(), &k, &o).unwrap();
            let ct = continuity_residual(EquationId::Continuity, &s, &HjInputs::default(), &k, &o).unwrap();
            assert!(hj.report.max_norm <= 1e-6, "t={t} k0={k0}: {:e}", hj.report.max_norm);
            assert!(ct.report.max_norm <= 1e-6, "t={t} k0={k0}: {:e}", ct.report.max_norm);
        }
    }
}

#[test]
fn stationary_state_continuity_vanishes() {
    let g = line(128, 10.0);
    let (s, _) = harmonic_state(&g, 1.0);
    let r = continuity_residual(EquationId::Continuity, &s, &HjInputs::default(), &Constants::default(), &harmonic_opts())
        .unwrap();
    assert!(r.report.max_norm <= 1e-10);
}

#[test]
fn slices_give_the_same_residuals_as_analytic_rates() {
    let g = line(512, 20.0);
    let k = Constants::default();
    let dt = 1e-3;
    let w = |t: f64| wave(&g, t, |x| free_gaussian(x, t, 1.0, 1.0, 0.0)).0;
    let s = NonrelState::from_slices(&w(0.5 - dt), &w(0.5), &w(0.5 + dt), Scheme::Spectral).unwrap();
    let o = EvalOptions::default();
    let ct = continuity_residual(EquationId::Continuity, &s, &HjInputs::default(), &k, &o).unwrap();
    let hj = hj_residual(EquationId::BohmHj, &s, &HjInputs::default(), &k, &o).unwrap();
    assert!(ct.report.max_norm <= 1e-5, "{:e}", ct.report.max_norm);
    assert!(hj.report.max_norm <= 1e-5, "{:e}", hj.report.max_norm);
    assert!(matches!(
        NonrelState::from_slices(&w(0.0), &w(0.5), &w(0.6), Scheme::Spectral),
        Err(FieldsError::UnevenSlices { .. })
    ));
}

#[test]
fn polar_coefficients_reduce_generalized_to_general() {
    let g = line(512, 20.0);
    let k = Constants::default();
    let (psi, psi_t) = wave(&g, 0.5, |x| free_gaussian(x, 0.5, 1.0, 1.0, 0.0));
    let s = NonrelState::from_wave(&psi, &psi_t, Scheme::Spectral).unwrap();
    let v = ScalarField::from_fn(&g, Unit::Energy, |x| 0.1 * (2.0 * PI * x[0] / 40.0).cos()).unwrap();
    let coeffs = Coefficients::polar(&s, &v, None).unwrap();
    let inp = HjInputs { potential: Some(&v), coefficients: Some(&coeffs), ..HjInputs::default() };
    // The generalized form divides by a = R^2, so roundoff is amplified by 1/R^2.
    let o = EvalOptions { mask_eps: 1e-3, ..EvalOptions::default() };
    let gen = hj_residual(EquationId::Generalized, &s, &inp, &k, &o).unwrap();
    let gh = hj_residual(EquationId::GeneralHj, &s, &inp, &k, &o).unwrap();
    assert!(max_err(gen.field.field.values(), gh.field.field.values()) < 1e-6);
    let gi = continuity_residual(EquationId::Generalized, &s, &inp, &k, &o).unwrap();
    let ct = continuity_residual(EquationId::Continuity, &s, &inp, &k, &o).unwrap();
    assert!(max_err(gi.field.field.values(), ct.field.field.values()) < 1e-12);
    assert!(matches!(
        hj_residual(EquationId::Generalized, &s, &HjInputs::default(), &k, &o),
        Err(FieldsError::MissingInput(_))
    ));
}

#[test]
fn polar_inputs_match_wave_inputs() {
    let g = line(512, 20.0);
    let (psi, psi_t) = wave(&g, 1.0, |x| free_gaussian(x, 1.0, 1.0, 1.0, 0.0));
    let from_wave = NonrelState::from_wave(&psi, &psi_t, Scheme::Spectral).unwrap();
    let st = from_wave.ds_dt.clone();
    let from_polar =
        NonrelState::from_polar(1.0, from_wave.r.clone(), from_wave.s.clone(), st, None, Constants::default(), Scheme::Spectral)
            .unwrap();
    let mask = Mask::from_amplitude(&from_wave.r, DEFAULT_MASK_EPS);
    for p in (0..g.len()).filter(|&p| mask.keeps(p)) {
        assert!((from_wave.grad_s.component(0)[p] - from_polar.grad_s.component(0)[p]).abs() < 1e-6);
    }
    let k = Constants::default();
    assert!(matches!(
        continuity_residual(EquationId::Continuity, &from_polar, &HjInputs::default(), &k, &EvalOptions::default()),
        Err(FieldsError::MissingInput(_))
    ));
}

fn plane_wave_state(n_modes: f64, k: &Constants, t: f64) -> KgState {
    let g = line(64, 5.0);
    let p = k.hbar * 2.0 * PI * n_modes / 10.0;
    let e = (p * p * k.c_light.powi(2) + k.mass.powi(2) * k.c_light.powi(4)).sqrt();
    let phi = WaveFunction::from_fn(&g, t, *k, |x| c(0.0, (p * x[0] - e * t) / k.hbar).exp()).unwrap();
    let w = e / k.hbar;
    let phi_t: Vec<Complex64> = phi.values().iter().map(|z| z * c(0.0, -w)).collect();
    let phi_tt: Vec<Complex64> = phi.values().iter().map(|z| z * (-w * w)).collect();
    KgState::from_field(&phi, &phi_t, &phi_tt, Scheme::Spectral).unwrap()
}

#[test]
fn kg_plane_wave_residuals_vanish() {
    for k in [Constants::default(), Constants { hbar: 0.7, mass: 1.3, c_light: 2.0 }] {
        let s = plane_wave_state(3.0, &k, 0.4);
        for eq in [EquationId::KgReal, EquationId::KgFinal, EquationId::KgContinuity] {
            let r = kg_residual(eq, &s, &k, &EvalOptions::default()).unwrap();
            let scale = k.mass * k.c_light.powi(2);
            assert!(r.report.max_norm <= 1e-12 * scale, "{eq}: {:e}", r.report.max_norm);
        }
    }
}

#[test]
fn kg_acceleration_matches_the_plane_wave() {
    let k = Constants { hbar: 1.0, mass: 1.0, c_light: 1.0 };
    let g = line(64, 5.0);
    let p = 2.0 * PI * 2.0 / 10.0;
    let phi = WaveFunction::from_fn(&g, 0.0, k, |x| c(0.0, p * x[0]).exp()).unwrap();
    let acc = kg_acceleration(&phi, &k, Scheme::Spectral).unwrap();
    let w2 = p * p + 1.0;
    for (a, z) in acc.iter().zip(phi.values()) {
        assert!((a + w2 * z).norm() < 1e-12);
    }
}

#[test]
fn kg_final_differs_from_kg_real_for_varying_amplitude() {
    // R = 1 + 0.2 cos(x), S = -E t: a standing profile that is not a KG solution.
    let k = Constants::default();
    let g = Grid::line(64, 0.0, 2.0 * PI).unwrap();
    let phi = WaveFunction::from_fn(&g, 0.0, k, |x| c(1.0 + 0.2 * x[0].cos(), 0.0)).unwrap();
    let phi_t: Vec<Complex64> = phi.values().iter().map(|z| z * c(0.0, -1.0)).collect();
    let phi_tt: Vec<Complex64> = phi.values().iter().map(|z| -z).collect();
    let s = KgState::from_field(&phi, &phi_t, &phi_tt, Scheme::Spectral).unwrap();
    let real = kg_residual(EquationId::KgReal, &s, &k, &EvalOptions::default()).unwrap();
    let fin = kg_residual(EquationId::KgFinal, &s, &k, &EvalOptions::default()).unwrap();
    // kg-final - kg-real = (hbar^2/4m0)(box R/R - dR.dR/R^2), with box R = -R_xx and dR.dR = -R_x^2.
    for p in 0..g.len() {
        let x = g.point(p)[0];
        let r = 1.0 + 0.2 * x.cos();
        let (rx, rxx) = (-0.2 * x.sin(), -0.2 * x.cos());
        let got = fin.field.field.values()[p] - real.field.field.values()[p];
        assert!((got - 0.25 * (-rxx / r + rx * rx / (r * r))).abs() < 1e-12);
    }
    assert!(matches!(
        kg_residual(EquationId::BohmHj, &s, &k, &EvalOptions::default()),
        Err(FieldsError::WrongEvaluator(_))
    ));
}

#[test]
fn equation_ids_round_trip() {
    for e in EquationId::ALL {
        assert_eq!(e.as_str().parse::<EquationId>().unwrap(), e);
        assert_eq!(serde_json::to_string(&e).unwrap(), format!("\"{e}\""));
    }
    assert!("eq-24".parse::<EquationId>().is_err());
}
