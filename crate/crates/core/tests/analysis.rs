use std::f64::consts::PI;

use nslayer::analysis::*;
use nslayer::field::{FieldKind, VectorField};
use nslayer::geometry::{make_channel_grid, ChannelGrid, TorusChart};
use nslayer::Error;
use proptest::prelude::*;

fn grid(nz: usize) -> ChannelGrid<f64> {
    make_channel_grid(1.0, 1.0, 1.0, 8, 8, nz, 1.0).unwrap()
}

#[test]
fn fit_is_exact_on_power_laws() {
    let e = [1e-2, 1e-3, 1e-4, 1e-5];
    let v: Vec<f64> = e.iter().map(|x: &f64| 2.0 * x.powf(0.75)).collect();
    let f = fit_rate(&e, &v).unwrap();
    assert!((f.slope - 0.75).abs() < 1e-12);
    assert!((f.r_squared - 1.0).abs() < 1e-12);
    let c = fit_rate(&e, &[3.0; 4]).unwrap();
    assert!(c.slope.abs() < 1e-12);
}

#[test]
fn fit_needs_three_points() {
    assert!(matches!(fit_rate(&[1e-2, 1e-3], &[1.0, 0.5]), Err(Error::Fit(_))));
    let f = fit_rate(&[1e-2, 1e-3, 1e-4, 1e-5], &[1.0, 0.5, 0.0, 0.0]);
    assert!(matches!(f, Err(Error::Fit(_))));
    let f = fit_rate(&[1e-2, 1e-3, 1e-4, 1e-5, 1e-6], &[1.0, 0.5, 0.25, 0.125, 0.0]).unwrap();
    assert_eq!(f.notes.len(), 1);
}

#[test]
fn rate_fit_json_keys() {
    let f = fit_rate(&[1e-2, 1e-3, 1e-4], &[1.0, 0.5, 0.25]).unwrap();
    let j = serde_json::to_value(&f).unwrap();
    assert!(j.get("slope").is_some() && j.get("r2").is_some());
    let n = NormReport::new("diff", Region::Whole, 1.0, 1e-3, TimeMode::Instant).unwrap();
    let j = serde_json::to_value(&n).unwrap();
    for k in ["epsilon", "norm", "region", "value"] {
        assert!(j.get(k).is_some(), "{k}");
    }
}

#[test]
fn strip_and_interior_partition_the_grid() {
    let g = grid(65);
    let a = Region::BoundaryStrip(0.125).mask(&g).unwrap();
    let b = Region::Interior(0.125).mask(&g).unwrap();
    assert!(a.iter().zip(&b).all(|(x, y)| x ^ y));
}

#[test]
fn l2_norm_of_constant_is_root_volume() {
    let g = make_channel_grid(2.0, 1.0, 1.0, 8, 8, 33, 1.7).unwrap();
    let f = VectorField::from_fn(&g, FieldKind::Other, |_, _, _| [3.0, 0.0, 4.0]);
    assert!((norm_l2(&f, &g, Region::Whole).unwrap() - 5.0 * 2f64.sqrt()).abs() < 1e-12);
    assert!(norm_grad(&f, &g, Region::Whole).unwrap() < 1e-12);
}

#[test]
fn trace_ratio_of_cosine() {
    let g = grid(129);
    let u = VectorField::from_fn(&g, FieldKind::Other, |_, _, z: f64| [(PI * z).cos(), 0.0, 0.0]);
    let r = trace_inequality_check(&u, &g).unwrap();
    assert!((r.ratio.unwrap() - 2.0 / PI.sqrt()).abs() < 1e-3);
}

#[test]
fn trace_excludes_constants() {
    let g = grid(33);
    let u = VectorField::from_fn(&g, FieldKind::Other, |_, _, _| [1.0, 0.0, 0.0]);
    let r = trace_inequality_check(&u, &g).unwrap();
    assert!(r.ratio.is_none() && r.note.is_some());
    let bad = VectorField::from_fn(&g, FieldKind::Other, |_, _, _| [0.0, 0.0, 1.0]);
    assert!(matches!(trace_inequality_check(&bad, &g), Err(Error::Input(_))));
}

#[test]
fn ibp_gap_shrinks_at_second_order() {
    let mut gaps = Vec::new();
    for nz in [33, 65, 129] {
        let g = grid(nz);
        let k = 2.0 * PI;
        let f = VectorField::from_fn(&g, FieldKind::Other, |x, _, z: f64| {
            [z * z + (k * x).sin() * (PI * z).cos(), 0.0, -2.0 * (k * x).cos() * (PI * z).sin()]
        });
        let w = VectorField::from_fn(&g, FieldKind::Other, |x, y, z: f64| {
            [1.0 + z + (k * x).sin() * z.exp(), (k * y).sin() * z, (k * x).cos() * z * z]
        });
        gaps.push(lemma1_ibp_check(&f, &w, &g).unwrap().gap);
    }
    assert!(gaps[0] / gaps[1] > 3.5 && gaps[1] / gaps[2] > 3.5, "{gaps:?}");
}

#[test]
fn ibp_rejects_compressible_fields() {
    let g = grid(33);
    let f = VectorField::from_fn(&g, FieldKind::Other, |x, _, _| [x, 0.0, 0.0]);
    assert!(matches!(lemma1_ibp_check(&f, &f, &g), Err(Error::Input(_))));
}

#[test]
fn conormal_norm_is_monotone() {
    let g = grid(65);
    let f = VectorField::from_fn(&g, FieldKind::Other, |x, _, z| [z * (1.0 - z) * (2.0 * PI * x).sin(), z, 0.0]);
    let v: Vec<f64> = (0..=MAX_CONORMAL_ORDER).map(|m| conormal_norm(&f, &g, m).unwrap().value).collect();
    assert!(v.windows(2).all(|w| w[1] >= w[0]), "{v:?}");
    assert!(conormal_norm(&f, &g, MAX_CONORMAL_ORDER + 1).is_err());
}

#[test]
fn agmon_ratio_is_scale_invariant() {
    let g = make_channel_grid(1.0, 1.0, 1.0, 8, 8, 129, 2.0).unwrap();
    let f = VectorField::from_fn(&g, FieldKind::Other, |x, _, z: f64| [(-z / 0.05).exp() * (1.0 + 0.3 * (2.0 * PI * x).cos()), 0.0, 0.0]);
    let a = agmon_anisotropic_check(&f, &g, 3, 0.125).unwrap();
    let b = agmon_anisotropic_check(&f.scaled(-7.5), &g, 3, 0.125).unwrap();
    assert!((a.ratio_boundary - b.ratio_boundary).abs() < 1e-10 * a.ratio_boundary);
    assert!((a.ratio_interior - b.ratio_interior).abs() < 1e-10 * a.ratio_interior);
    let z = VectorField::zeros(&g, FieldKind::Other);
    assert!(matches!(agmon_anisotropic_check(&z, &g, 3, 0.125), Err(Error::Degenerate(_))));
}

#[test]
fn lemma_agmon_constant_and_bounded() {
    let b = BoxField::from_fn(&[2.0, 1.0, 1.0], &[8, 8, 8], |_| 3.0).unwrap();
    assert!((lemma_agmon_check(&b, 3).unwrap() - 0.5f64.sqrt()).abs() < 1e-12);
    let r: Vec<f64> = [1usize, 4, 16]
        .iter()
        .map(|&n| {
            let b = BoxField::from_fn(&[2.0 * PI], &[128], |x| (n as f64 * x[0]).sin()).unwrap();
            lemma_agmon_check(&b, 1).unwrap()
        })
        .collect();
    assert!(r.windows(2).all(|w| w[1] <= w[0]), "{r:?}");
}

#[test]
fn shape_condition_for_rotation_and_refinement() {
    let chart = TorusChart::with_default_collar(2.0, 1.0).unwrap();
    let rot = shape_bc_equivalence_check(|_, _, _| [0.0, 1.0, 0.0], &chart, 16, 16, 1e-3).unwrap();
    assert!(rot.residual < 1e-6);
    let f = |e1: f64, e2: f64, xi: f64| [e2.sin() * (1.0 + xi), e1.cos() + xi * xi, xi * e1.sin()];
    let a = shape_bc_equivalence_check(f, &chart, 16, 16, 1e-2).unwrap().residual;
    let b = shape_bc_equivalence_check(f, &chart, 16, 16, 5e-3).unwrap().residual;
    assert!(a / b > 3.5);
    let z = shape_bc_equivalence_check(|_, _, _| [0.0; 3], &chart, 8, 8, 1e-3).unwrap();
    assert_eq!(z.residual, 0.0);
    assert!(shape_bc_equivalence_check(|_, _, _| [0.0, 0.0, 1.0], &chart, 8, 8, 1e-3).is_err());
}

fn field_from(g: &ChannelGrid<f64>, c: [f64; 4]) -> VectorField<f64> {
    VectorField::from_fn(g, FieldKind::Other, |x, y, z| {
        [
            c[0] * (2.0 * PI * x).sin() + c[1] * z,
            c[2] * (2.0 * PI * y).cos() * z * z,
            c[3] * z * (1.0 - z),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn norms_are_homogeneous(c in prop::array::uniform4(-3.0f64..3.0), s in -5.0f64..5.0) {
        let g = grid(17);
        let f = field_from(&g, c);
        let sf = f.scaled(s);
        for r in [Region::Whole, Region::BoundaryStrip(0.125), Region::Interior(0.125)] {
            let a = norm_l2(&f, &g, r).unwrap();
            prop_assert!((norm_l2(&sf, &g, r).unwrap() - s.abs() * a).abs() <= 1e-12 * (1.0 + a));
            let a = norm_h1(&f, &g, r).unwrap();
            prop_assert!((norm_h1(&sf, &g, r).unwrap() - s.abs() * a).abs() <= 1e-11 * (1.0 + a));
            let a = norm_linf(&f, &g, r).unwrap();
            prop_assert!((norm_linf(&sf, &g, r).unwrap() - s.abs() * a).abs() <= 1e-12 * (1.0 + a));
        }
    }

    #[test]
    fn norms_satisfy_triangle_inequality(c in prop::array::uniform4(-3.0f64..3.0), d in prop::array::uniform4(-3.0f64..3.0)) {
        let g = grid(17);
        let f = field_from(&g, c);
        let h = field_from(&g, [d[3], d[2], d[1], d[0]]);
        let s = f.add(&h);
        for n in [norm_l2::<f64>, norm_h1::<f64>, norm_linf::<f64>] {
            let lhs = n(&s, &g, Region::Whole).unwrap();
            let rhs = n(&f, &g, Region::Whole).unwrap() + n(&h, &g, Region::Whole).unwrap();
            prop_assert!(lhs <= rhs + 1e-12);
        }
    }

    #[test]
    fn fit_recovers_synthetic_slopes(p in 0.0f64..2.0, c in 0.1f64..10.0) {
        let e: [f64; 5] = [1e-2, 3e-3, 1e-3, 3e-4, 1e-4];
        let v: Vec<f64> = e.iter().map(|x| c * x.powf(p)).collect();
        let f = fit_rate(&e, &v).unwrap();
        prop_assert!((f.slope - p).abs() < 1e-12);
    }
}
