mod common;

use common::*;
use qhj_fields::*;
use std::f64::consts::PI;

#[test]
fn grid_validation() {
    assert!(Grid::line(6, 0.0, 1.0).is_err());
    assert!(Grid::line(12, 0.0, 1.0).is_err());
    assert!(Grid::line(16, 1.0, 1.0).is_err());
    assert!(Grid::new(vec![]).is_err());
    let g = Grid::line(16, -2.0, 2.0).unwrap();
    assert_eq!(g.axes()[0].spacing(), 0.25);
    assert_eq!(g.point(4), vec![-1.0]);
    let p = Grid::plane(Axis::new(8, 0.0, 1.0), Axis::new(16, 0.0, 2.0)).unwrap();
    assert_eq!(p.len(), 128);
    assert_eq!(p.multi_index(17), vec![1, 1]);
    assert_eq!(p.flat_index(&[1, 1]), 17);
    let back: Grid = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
    assert_eq!(back, p);
    assert!(serde_json::from_str::<Grid>(r#"{"axes":[{"points":10,"lower":0,"upper":1}]}"#).is_err());
}

#[test]
fn band_limited_sine_is_exact() {
    let l = 3.0;
    let g = Grid::line(64, 0.0, l).unwrap();
    let w = 2.0 * PI / l;
    let f = ScalarField::from_fn(&g, Unit::Dimensionless, |x| (w * x[0]).sin()).unwrap();
    let d1 = derivative(&f, 1, 0, Scheme::Spectral).unwrap();
    let d2 = derivative(&f, 2, 0, Scheme::Spectral).unwrap();
    for p in 0..g.len() {
        let x = g.point(p)[0];
        assert!((d1.values()[p] - w * (w * x).cos()).abs() <= 1e-12 * w);
        assert!((d2.values()[p] + w * w * (w * x).sin()).abs() <= 1e-12 * w * w);
    }
}

#[test]
fn constants_have_zero_derivatives() {
    let g = line(32, 1.0);
    let f = ScalarField::constant(&g, 3.5, Unit::Energy).unwrap();
    for scheme in [Scheme::Spectral, Scheme::Central2] {
        for order in [1, 2] {
            assert!(derivative(&f, order, 0, scheme).unwrap().max_abs() < 1e-13);
        }
    }
}

#[test]
fn gaussian_spectral_versus_central() {
    let g = line(512, 16.0);
    let h = g.axes()[0].spacing();
    let f = ScalarField::from_fn(&g, Unit::Dimensionless, |x| (-x[0] * x[0] / 2.0).exp()).unwrap();
    let exact1: Vec<f64> = (0..g.len()).map(|p| { let x = g.point(p)[0]; -x * (-x * x / 2.0).exp() }).collect();
    let exact2: Vec<f64> =
        (0..g.len()).map(|p| { let x = g.point(p)[0]; (x * x - 1.0) * (-x * x / 2.0).exp() }).collect();
    let s1 = derivative(&f, 1, 0, Scheme::Spectral).unwrap();
    let c1 = derivative(&f, 1, 0, Scheme::Central2).unwrap();
    let s2 = derivative(&f, 2, 0, Scheme::Spectral).unwrap();
    let c2 = derivative(&f, 2, 0, Scheme::Central2).unwrap();
    assert!(max_err(s1.values(), &exact1) < 1e-12);
    assert!(max_err(s2.values(), &exact2) < 1e-12);
    // Leading truncation terms: h^2 f'''/6 and h^2 f''''/12, with max |f'''| ~ 1.38, max |f''''| = 3.
    let e1 = max_err(c1.values(), s1.values());
    let e2 = max_err(c2.values(), s2.values());
    assert!(e1 > 0.1 * h * h && e1 < 0.3 * h * h, "{e1} vs h^2 = {}", h * h);
    assert!(e2 > 0.1 * h * h && e2 < 0.3 * h * h, "{e2} vs h^2 = {}", h * h);
}

#[test]
fn central_scheme_is_second_order() {
    let err = |n: usize| {
        let g = Grid::line(n, 0.0, 2.0 * PI).unwrap();
        let f = ScalarField::from_fn(&g, Unit::Dimensionless, |x| (x[0].sin()).exp()).unwrap();
        let d = derivative(&f, 2, 0, Scheme::Central2).unwrap();
        let exact: Vec<f64> = (0..n)
            .map(|p| { let x = g.point(p)[0]; (x.cos().powi(2) - x.sin()) * x.sin().exp() })
            .collect();
        max_err(d.values(), &exact)
    };
    let (a, b, c) = (err(32), err(64), err(128));
    assert!((a / b - 4.0).abs() < 0.2 && (b / c - 4.0).abs() < 0.1, "{a} {b} {c}");
}

#[test]
fn plane_derivatives_follow_their_axis() {
    let g = Grid::plane(Axis::new(32, 0.0, 2.0 * PI), Axis::new(16, 0.0, 2.0 * PI)).unwrap();
    let f = ScalarField::from_fn(&g, Unit::Dimensionless, |x| (2.0 * x[0]).sin() * x[1].cos()).unwrap();
    let dx = derivative(&f, 1, 0, Scheme::Spectral).unwrap();
    let dyy = derivative(&f, 2, 1, Scheme::Spectral).unwrap();
    let lap = laplacian(&f, Scheme::Spectral).unwrap();
    for p in 0..g.len() {
        let x = g.point(p);
        assert!((dx.values()[p] - 2.0 * (2.0 * x[0]).cos() * x[1].cos()).abs() < 1e-12);
        assert!((dyy.values()[p] + f.values()[p]).abs() < 1e-12);
        assert!((lap.values()[p] + 5.0 * f.values()[p]).abs() < 1e-11);
    }
    let grad = gradient(&f, Scheme::Central2).unwrap();
    assert_eq!(grad.components().len(), 2);
}

#[test]
fn derivative_rejects_bad_requests() {
    let g = line(16, 1.0);
    let f = ScalarField::constant(&g, 1.0, Unit::Dimensionless).unwrap();
    assert!(matches!(derivative(&f, 3, 0, Scheme::Spectral), Err(FieldsError::BadOrder(3))));
    assert!(matches!(derivative(&f, 1, 1, Scheme::Spectral), Err(FieldsError::BadAxis { .. })));
    assert!(ScalarField::new(&g, vec![0.0; 3], Unit::Energy).is_err());
    let mut v = vec![0.0; 16];
    v[5] = f64::NAN;
    assert!(matches!(ScalarField::new(&g, v, Unit::Energy), Err(FieldsError::NonFinite { index: 5 })));
}

#[test]
fn spectral_ops_round_trip_in_two_dimensions() {
    let g = Grid::plane(Axis::new(8, 0.0, 1.0), Axis::new(16, 0.0, 1.0)).unwrap();
    let ops = SpectralOps::new(&g);
    let orig: Vec<Complex64> = (0..g.len()).map(|p| c(p as f64 * 0.1, (p as f64).sin())).collect();
    let mut z = orig.clone();
    ops.transform(&mut z, false);
    ops.transform(&mut z, true);
    let err = z.iter().zip(&orig).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    assert!(err < 1e-12);
    assert_eq!(ops.wavenumbers(0)[4], -4.0 * 2.0 * PI);
}
