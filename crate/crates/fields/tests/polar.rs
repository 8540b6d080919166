mod common;

use common::*;
use qhj_fields::*;
use std::f64::consts::PI;

#[test]
fn plane_wave_is_unit_amplitude_and_linear_phase() {
    let g = line(128, 5.0);
    let k0 = 2.0 * PI * 3.0 / 10.0;
    let (psi, _) = wave(&g, 0.0, |x| (c(0.0, k0 * x).exp(), c(0.0, 0.0)));
    let (r, s) = polar_decompose(&psi).unwrap();
    assert!(r.values().iter().all(|v| (v - 1.0).abs() < 1e-15));
    let off = s.values()[0] - k0 * g.point(0)[0];
    for p in 0..g.len() {
        assert!((s.values()[p] - k0 * g.point(p)[0] - off).abs() < 1e-12);
    }
    let grad = phase_gradient(&psi, Scheme::Spectral).unwrap();
    assert!(grad.component(0).iter().all(|v| (v - k0).abs() < 1e-12));
    let grad = phase_gradient_of(&s, 1.0, Scheme::Spectral).unwrap();
    assert!(grad.component(0).iter().all(|v| (v - k0).abs() < 1e-12));
}

#[test]
fn real_gaussian_has_zero_phase() {
    let g = line(128, 10.0);
    let (psi, _) = wave(&g, 0.0, |x| (c((-x * x / 4.0).exp(), 0.0), c(0.0, 0.0)));
    let (r, s) = polar_decompose(&psi).unwrap();
    assert!(s.max_abs() == 0.0);
    for p in 0..g.len() {
        let x = g.point(p)[0];
        assert!((r.values()[p] - (-x * x / 4.0).exp()).abs() < 1e-16);
    }
}

#[test]
fn spreading_packet_phase_matches_closed_form() {
    let g = line(512, 20.0);
    let (psi, _) = wave(&g, 1.0, |x| free_gaussian(x, 1.0, 1.0, 1.0, 0.0));
    let (r, s) = polar_decompose(&psi).unwrap();
    let mask = Mask::from_amplitude(&r, DEFAULT_MASK_EPS);
    let exact: Vec<f64> = (0..g.len()).map(|p| free_gaussian_phase(g.point(p)[0], 1.0, 1.0, 1.0, 0.0)).collect();
    let p0 = (0..g.len()).find(|&p| mask.keeps(p)).unwrap();
    let off = s.values()[p0] - exact[p0];
    let worst = (0..g.len())
        .filter(|&p| mask.keeps(p))
        .map(|p| (s.values()[p] - exact[p] - off).abs())
        .fold(0.0, f64::max);
    assert!(worst <= 1e-8, "{worst}");
    assert!((off / (2.0 * PI)).fract().abs() < 1e-9 || ((off / (2.0 * PI)).fract().abs() - 1.0).abs() < 1e-9);
}

#[test]
fn polar_form_reproduces_psi() {
    let g = line(256, 15.0);
    let (psi, _) = wave(&g, 0.7, |x| free_gaussian(x, 0.7, 1.3, -2.0, 1.0));
    let (r, s) = polar_decompose(&psi).unwrap();
    let mask = Mask::from_amplitude(&r, DEFAULT_MASK_EPS);
    for p in (0..g.len()).filter(|&p| mask.keeps(p)) {
        let z = r.values()[p] * c(0.0, s.values()[p]).exp();
        assert!((z - psi.values()[p]).norm() <= 1e-12 * psi.values()[p].norm());
    }
}

#[test]
fn plane_unwrapping_follows_row_then_columns() {
    let g = Grid::plane(Axis::new(32, 0.0, 4.0), Axis::new(32, 0.0, 4.0)).unwrap();
    let (kx, ky) = (2.0 * PI * 5.0 / 4.0, 2.0 * PI * 3.0 / 4.0);
    let constants = Constants { hbar: 0.5, ..Constants::default() };
    let psi = WaveFunction::from_fn(&g, 0.0, constants, |x| c(0.0, kx * x[0] + ky * x[1]).exp()).unwrap();
    let (_, s) = polar_decompose(&psi).unwrap();
    for p in 0..g.len() {
        let x = g.point(p);
        assert!((s.values()[p] - 0.5 * (kx * x[0] + ky * x[1])).abs() < 1e-11);
    }
}

#[test]
fn vanishing_wave_function_is_rejected() {
    let g = line(16, 1.0);
    assert!(matches!(
        WaveFunction::new(&g, vec![c(0.0, 0.0); 16], 0.0, Constants::default()),
        Err(FieldsError::AllZero)
    ));
}

#[test]
fn mask_counts_small_amplitudes() {
    let g = line(16, 1.0);
    let r = ScalarField::new(&g, (0..16).map(|p| if p < 4 { 1e-9 } else { 1.0 }).collect(), Unit::Amplitude).unwrap();
    let m = Mask::from_amplitude(&r, 1e-6);
    assert_eq!(m.kept(), 12);
    assert_eq!(m.masked_fraction(), 0.25);
    assert_eq!(Mask::from_amplitude(&r, 1e-12).kept(), 16);
}
