use nslayer::corrector::*;
use nslayer::field::{FieldKind, VectorField};
use nslayer::geometry::{make_channel_grid, FrictionTensor, TorusChart, Wall};
use nslayer::harness::scaling_field;

#[test]
fn theta3_vanishes_on_walls() {
    let g = make_channel_grid(1.0, 1.0, 1.0, 8, 8, 257, 2.0).unwrap();
    let a = FrictionTensor::isotropic(Wall::Lower, 0.5).unwrap();
    let b = FrictionTensor::isotropic(Wall::Upper, 0.5).unwrap();
    let c = build_corrector_channel(&scaling_field(&g, 0.0), &a, &b, 1e-4, &g, 0.0).unwrap();
    assert_eq!(c.theta.wall_normal_max(), 0.0);
    assert!(c.theta.max_norm() > 0.0);
}

#[test]
fn corrector_rejects_wide_layers() {
    let g = make_channel_grid(1.0, 1.0, 1.0, 8, 8, 33, 1.0).unwrap();
    let a = FrictionTensor::isotropic(Wall::Lower, 0.5).unwrap();
    let b = FrictionTensor::isotropic(Wall::Upper, 0.5).unwrap();
    let u = VectorField::zeros(&g, FieldKind::Physical);
    assert!(build_corrector_channel(&u, &a, &b, 1.0 / 64.0, &g, 0.0).is_err());
}

#[test]
fn tangential_l2_scales_like_three_quarters() {
    let g = make_channel_grid(1.0, 1.0, 1.0, 8, 8, 2049, 7.0).unwrap();
    let a = FrictionTensor::isotropic(Wall::Lower, 0.5).unwrap();
    let b = FrictionTensor::isotropic(Wall::Upper, 0.5).unwrap();
    let eps = [1e-8, 1e-10, 1e-12, 1e-14];
    let t = corrector_norm_scalings(
        |t| Ok(scaling_field(&g, t)),
        &a,
        &b,
        &g,
        &eps,
        DerivativeSpec::new(0, 0, 0).unwrap(),
        &[0.0],
        0.0,
    )
    .unwrap();
    let e: Vec<f64> = t.rows.iter().map(|r| r.epsilon).collect();
    let tan: Vec<f64> = t.rows.iter().map(|r| r.norms.tan_l2).collect();
    let nor: Vec<f64> = t.rows.iter().map(|r| r.norms.nor_l2).collect();
    let ft = nslayer::analysis::fit_rate(&e, &tan).unwrap();
    let fn_ = nslayer::analysis::fit_rate(&e, &nor).unwrap();
    assert!((ft.slope - 0.75).abs() < 0.05, "{}", ft.slope);
    assert!((fn_.slope - 1.0).abs() < 0.05, "{}", fn_.slope);
}

#[test]
fn derivative_spec_range() {
    assert!(DerivativeSpec::new(1, 1, 0).is_err());
    assert!(DerivativeSpec::new(0, 3, 0).is_err());
    assert!(DerivativeSpec::new(0, 0, 3).is_err());
    assert!(DerivativeSpec::new(1, 0, 2).is_ok());
}

#[test]
fn flat_torus_multipliers_equal_channel_profile() {
    let chart = TorusChart::with_default_collar(2.0, 1.0).unwrap();
    let a = chart.a;
    let eps = 1e-3;
    for q in 0..=100 {
        let xi = 3.0 * a * q as f64 / 100.0;
        let m = torus_multipliers((0.0, 0.0), xi, eps, &torus_profile(xi, a, eps));
        let c = channel_profile(xi, Wall::Lower, 8.0 * a, eps).unwrap();
        assert!((m[0] + eps * c.deriv(1)).abs() <= 1e-12);
        assert!((m[2] - eps * c.value()).abs() <= 1e-12);
    }
}

#[test]
fn torus_corrector_surface_values() {
    let chart = TorusChart::with_default_collar(2.0, 1.0).unwrap();
    let grid = TorusGrid::new(chart, 16, 16, 129, 3.0).unwrap();
    let data = TorusBoundaryData::from_fn(&grid, 0.0, |e1: f64, e2: f64| [e2.sin(), e1.cos()]);
    let c = build_corrector_torus(&data, 1e-4, &grid, CurvatureMode::Chart).unwrap();
    assert_eq!(c.surface_normal_max(), 0.0);
    let d = c.surface_normal_derivative(3);
    let se: f64 = 1e-2;
    for (col, v) in d.iter().enumerate() {
        for (q, dv) in v.iter().enumerate() {
            let target = c.data.u_tilde[col][q] - se * c.e_error[col][q];
            assert!((dv - target).abs() < 1e-3, "{dv} vs {target}");
        }
    }
}
