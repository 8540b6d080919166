mod common;

use common::*;
use proptest::prelude::*;
use qhj_fields::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn opts(scheme: Scheme) -> EvalOptions {
    EvalOptions { scheme, ..EvalOptions::default() }
}

fn amplitude(g: &Grid, f: impl Fn(f64) -> f64) -> ScalarField {
    ScalarField::from_fn(g, Unit::Amplitude, |x| f(x[0])).unwrap()
}

#[test]
fn gaussian_amplitude_closed_forms() {
    // R = exp(-x^2/4): lap R / R = x^2/4 - 1/2, grad R / R = -x/2.
    let g = line(256, 12.0);
    let r = amplitude(&g, |x| (-x * x / 4.0).exp());
    let k = Constants::default();
    let qp = quantum_potential(&r, &k, &opts(Scheme::Spectral)).unwrap();
    let qk = quantum_kinetic(&r, &k, &opts(Scheme::Spectral)).unwrap();
    let at = |x: f64| (0..g.len()).find(|&p| (g.point(p)[0] - x).abs() < 1e-12).unwrap();
    assert!((qp.value(at(0.0)).unwrap() - 0.25).abs() < 1e-10);
    assert!((qp.value(at(1.125)).unwrap() - (0.25 - 1.125f64.powi(2) / 8.0)).abs() < 1e-10);
    assert!(qk.value(at(0.0)).unwrap().abs() < 1e-10);
    assert!((qk.value(at(1.125)).unwrap() + 1.125f64.powi(2) / 8.0).abs() < 1e-10);
    // The x = 1 points of the examples sit on a grid with h = 1/8.
    let g = line(256, 16.0);
    let r = amplitude(&g, |x| (-x * x / 4.0).exp());
    let p1 = (0..g.len()).find(|&p| (g.point(p)[0] - 1.0).abs() < 1e-12).unwrap();
    let qp = quantum_potential(&r, &k, &opts(Scheme::Spectral)).unwrap();
    let qk = quantum_kinetic(&r, &k, &opts(Scheme::Spectral)).unwrap();
    assert!((qp.value(p1).unwrap() - 0.125).abs() < 1e-10);
    assert!((qk.value(p1).unwrap() + 0.125).abs() < 1e-10);
}

#[test]
fn constant_amplitude_has_no_quantum_terms() {
    let g = line(64, 3.0);
    let r = amplitude(&g, |_| 2.0);
    let k = Constants::default();
    for s in [Scheme::Spectral, Scheme::Central2] {
        assert!(quantum_potential(&r, &k, &opts(s)).unwrap().max_abs() < 1e-13);
        assert!(quantum_kinetic(&r, &k, &opts(s)).unwrap().max_abs() < 1e-26);
    }
}

#[test]
fn harmonic_ground_quantum_potential_balances_the_well() {
    let g = line(128, 8.0);
    let r = amplitude(&g, |x| (-x * x / 2.0).exp());
    let e = EvalOptions { mask_eps: 1e-3, ..EvalOptions::default() };
    let qp = quantum_potential(&r, &Constants::default(), &e).unwrap();
    for p in (0..g.len()).filter(|&p| qp.mask.keeps(p)) {
        let x = g.point(p)[0];
        assert!((qp.field.values()[p] + x * x / 2.0 - 0.5).abs() < 1e-10);
    }
}

/// Strictly positive random trigonometric polynomial of degree <= 3 on `[0, 2pi)`.
fn random_amplitude(rng: &mut ChaCha8Rng) -> impl Fn(f64) -> f64 {
    let terms: Vec<(f64, f64, f64)> = (1..=3)
        .map(|n| (n as f64, rng.random_range(-0.3..0.3), rng.random_range(-0.3..0.3)))
        .collect();
    let base = 1.0 + terms.iter().map(|t| t.1.abs() + t.2.abs()).sum::<f64>() + rng.random_range(0.0..0.5);
    move |x| base + terms.iter().map(|(n, a, b)| a * (n * x).cos() + b * (n * x).sin()).sum::<f64>()
}

fn identity_errors(r: &ScalarField, k: &Constants, scheme: Scheme) -> (f64, f64, f64) {
    let o = opts(scheme);
    let qp = quantum_potential(r, k, &o).unwrap();
    let qk = quantum_kinetic(r, k, &o).unwrap();
    let half: Vec<f64> = qp.field.values().iter().zip(qk.field.values()).map(|(a, b)| 0.5 * (a + b)).collect();
    let sum: Vec<f64> = half.iter().map(|h| 2.0 * h).collect();
    let lap_form = half_sum_from_density(r, k, &o).unwrap();
    let div_form = sum_from_divergence(r, k, &o).unwrap();
    let quarter: Vec<f64> = div_form.field.values().iter().map(|v| 0.5 * v).collect();
    (
        max_err(&half, lap_form.field.values()),
        max_err(&sum, div_form.field.values()),
        max_err(&half, &quarter),
    )
}

#[test]
fn half_sum_identity_on_random_amplitudes() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let k = Constants { hbar: 1.0, mass: 1.0, c_light: 1.0 };
    let g = Grid::line(256, 0.0, 2.0 * PI).unwrap();
    for _ in 0..50 {
        let f = random_amplitude(&mut rng);
        let r = amplitude(&g, &f);
        let (lap, div, quarter) = identity_errors(&r, &k, Scheme::Spectral);
        assert!(lap <= 1e-8 && div <= 1e-8 && quarter <= 1e-8, "{lap} {div} {quarter}");
        // The half sum is not -(hbar^2/2m) div(R grad R)/R^2: that is the full sum.
        let full = sum_from_divergence(&r, &k, &opts(Scheme::Spectral)).unwrap();
        let qp = quantum_potential(&r, &k, &opts(Scheme::Spectral)).unwrap();
        let qk = quantum_kinetic(&r, &k, &opts(Scheme::Spectral)).unwrap();
        let half: Vec<f64> = qp.field.values().iter().zip(qk.field.values()).map(|(a, b)| 0.5 * (a + b)).collect();
        assert!(max_err(&half, full.field.values()) > 1e-3);
    }
}

#[test]
fn half_sum_identity_central_is_second_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let k = Constants::default();
    for _ in 0..50 {
        let f = random_amplitude(&mut rng);
        let errs: Vec<f64> = [64, 128, 256]
            .iter()
            .map(|&n| {
                let g = Grid::line(n, 0.0, 2.0 * PI).unwrap();
                let h = g.axes()[0].spacing();
                let (lap, div, _) = identity_errors(&amplitude(&g, &f), &k, Scheme::Central2);
                lap.max(div) / (h * h)
            })
            .collect();
        // The error divided by h^2 settles to a constant.
        assert!(errs[2] < 5.0 && (errs[1] / errs[2] - 1.0).abs() < 0.1, "{errs:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn quantum_kinetic_is_never_positive(seed in 0u64..10_000, width in 0.5f64..3.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_amplitude(&mut rng);
        let g = Grid::line(128, 0.0, 2.0 * PI).unwrap();
        let r = amplitude(&g, |x| f(x) * (-(x - PI).powi(2) / width).exp());
        for s in [Scheme::Spectral, Scheme::Central2] {
            let qk = quantum_kinetic(&r, &Constants::default(), &opts(s)).unwrap();
            prop_assert!(qk.field.values().iter().all(|&v| v <= 0.0));
        }
    }

    #[test]
    fn raising_the_mask_never_raises_the_max_norm(seed in 0u64..10_000, e1 in -12i32..-1, bump in 1i32..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_amplitude(&mut rng);
        let g = Grid::line(128, -10.0, 10.0).unwrap();
        let r = amplitude(&g, |x| f(x) * (-x * x / 2.0).exp());
        let lo = EvalOptions { mask_eps: 10f64.powi(e1), ..EvalOptions::default() };
        let hi = EvalOptions { mask_eps: 10f64.powi((e1 + bump).min(-1)), ..EvalOptions::default() };
        let a = quantum_potential(&r, &Constants::default(), &lo).unwrap();
        let b = quantum_potential(&r, &Constants::default(), &hi).unwrap();
        prop_assert!(b.max_abs() <= a.max_abs());
        prop_assert!(b.mask.masked_fraction() >= a.mask.masked_fraction());
    }
}
