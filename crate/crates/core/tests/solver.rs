use std::f64::consts::PI;

use nslayer::field::{FieldKind, ScalarField, VectorField};
use nslayer::geometry::{make_channel_grid, ChannelGrid, FrictionTensor, Wall};
use nslayer::solver::*;
use nslayer::Error;

fn friction(a: f64) -> (FrictionTensor<f64>, FrictionTensor<f64>) {
    (
        FrictionTensor::isotropic(Wall::Lower, a).unwrap(),
        FrictionTensor::isotropic(Wall::Upper, a).unwrap(),
    )
}

fn energy(g: &ChannelGrid<f64>, u: &VectorField<f64>) -> f64 {
    let mut e = 0.0;
    for col in 0..g.nx * g.ny {
        for k in 0..g.nz {
            let v = u.get(col * g.nz + k);
            e += g.cell_weight(k) * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
        }
    }
    e
}

fn rel_l2(a: &VectorField<f64>, b: &VectorField<f64>) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    for c in 0..3 {
        for (x, y) in a.c[c].iter().zip(&b.c[c]) {
            num += (x - y).powi(2);
            den += y * y;
        }
    }
    (num / den).sqrt()
}

fn cell(g: &ChannelGrid<f64>) -> VectorField<f64> {
    let k = 2.0 * PI / g.l1;
    VectorField::from_fn(g, FieldKind::Physical, |x, _, z| {
        [PI * (k * x).sin() * (PI * z).cos(), 0.0, -k * (k * x).cos() * (PI * z).sin()]
    })
}

#[test]
fn oracle_matches_ns_on_compatible_shear() {
    let alpha = 0.5;
    let grid = make_channel_grid(1.0, 1.0, 1.0, 4, 4, 129, 2.0).unwrap();
    let (al, au) = friction(alpha);
    let prof = |z: f64| {
        let u = 1.0 + 2.0 * alpha * z * (1.0 - z);
        [u, 0.3 * u]
    };
    let u0 = VectorField::from_fn(&grid, FieldKind::Physical, |_, _, z| {
        let p = prof(z);
        [p[0], p[1], 0.0]
    });
    let t = 0.1;
    let opts = SolverOptions::with_cadence(t / 10.0);
    let tr = ns_solve(&u0, &Forcing::Zero, 1e-3, &al, &au, t, &grid, &opts).unwrap();
    let mut cfg = ShearOracleConfig::new(1.0, 513);
    cfg.steps = 500;
    cfg.snapshots = 10;
    let or = shear_flow_oracle(prof, &al, &au, 1e-3, t, &cfg).unwrap();
    let ot = or.to_trajectory(&grid).unwrap();
    assert_eq!(tr.snapshots.len(), ot.snapshots.len());
    assert!(rel_l2(&tr.last().u, &ot.last().u) < 1e-6);
}

#[test]
fn oracle_rejects_bad_snapshot_split() {
    let (al, au) = friction(0.5);
    let mut cfg = ShearOracleConfig::new(1.0, 129);
    cfg.steps = 101;
    cfg.snapshots = 10;
    let r = shear_flow_oracle(|_| [1.0, 0.0], &al, &au, 1e-3, 0.1, &cfg);
    assert!(matches!(r, Err(Error::Config(_))));
}

#[test]
fn oracle_keeps_constant_profile_without_friction() {
    let (al, au) = friction(0.0);
    let mut cfg = ShearOracleConfig::new(1.0, 129);
    cfg.steps = 100;
    cfg.snapshots = 10;
    let or = shear_flow_oracle(|_| [1.0, -2.0], &al, &au, 1e-2, 0.1, &cfg).unwrap();
    for p in or.profiles.last().unwrap() {
        assert!((p[0] - 1.0).abs() < 1e-12 && (p[1] + 2.0).abs() < 1e-12);
    }
}

#[test]
fn euler_keeps_shear_steady() {
    let grid = make_channel_grid(1.0, 1.0, 1.0, 8, 4, 65, 1.5).unwrap();
    let u0 = VectorField::from_fn(&grid, FieldKind::Physical, |_, _, z: f64| [(3.0 * z).tanh(), z * z, 0.0]);
    let e = euler_solve(&u0, &Forcing::Zero, 0.1, &grid, &SolverOptions::with_cadence(0.05)).unwrap();
    assert!(e.last().u.sub(&u0, FieldKind::Difference).max_norm() < 1e-12);
}

#[test]
fn euler_conserves_energy_of_a_cell() {
    let grid = make_channel_grid(2.0, 2.0, 1.0, 16, 4, 65, 1.5).unwrap();
    let u0 = cell(&grid);
    let e = euler_solve(&u0, &Forcing::Zero, 0.25, &grid, &SolverOptions::with_cadence(0.025)).unwrap();
    let e0 = energy(&grid, &e.snapshots[0].u);
    let e1 = energy(&grid, &e.last().u);
    assert!(((e1 - e0) / e0).abs() < 1e-5);
    assert!(e.diagnostics.iter().all(|d| d.div_max < 1e-10));
}

#[test]
fn viscous_run_satisfies_walls_and_divergence() {
    let grid = make_channel_grid(2.0, 2.0, 1.0, 16, 4, 65, 1.5).unwrap();
    let al = FrictionTensor::constant(Wall::Lower, [[0.5, 0.1], [0.0, 0.3]]).unwrap();
    let au = FrictionTensor::isotropic(Wall::Upper, 0.5).unwrap();
    let n = ns_solve(&cell(&grid), &Forcing::Zero, 1e-2, &al, &au, 0.1, &grid, &SolverOptions::with_cadence(0.025)).unwrap();
    let d = n.diagnostics.last().unwrap();
    assert!(d.div_max < 1e-10, "{d:?}");
    assert!(d.robin_residual < 1e-9, "{d:?}");
}

#[test]
fn free_slip_energy_decays() {
    let grid = make_channel_grid(2.0, 2.0, 1.0, 16, 4, 65, 1.5).unwrap();
    let (al, au) = friction(0.0);
    let n = ns_solve(&cell(&grid), &Forcing::Zero, 1e-2, &al, &au, 0.1, &grid, &SolverOptions::with_cadence(0.025)).unwrap();
    assert!(n.diagnostics.windows(2).all(|w| w[1].energy <= w[0].energy));
}

#[test]
fn projection_is_idempotent() {
    let grid = make_channel_grid(2.0, 1.0, 1.0, 8, 8, 33, 1.0).unwrap();
    let (al, au) = friction(0.5);
    let s = ChannelSolver::new(&grid, 1e-2, Some((&al, &au)), &Forcing::Zero, true).unwrap();
    let u = VectorField::from_fn(&grid, FieldKind::Physical, |x, y, z| {
        [(PI * x).sin() * z, (2.0 * PI * y).cos() + z * z, (PI * x).cos() * z * (1.0 - z)]
    });
    let p1 = s.project_physical(&u).unwrap();
    let p2 = s.project_physical(&p1).unwrap();
    assert!(p2.sub(&p1, FieldKind::Other).max_norm() < 1e-10 * p1.max_norm());
    assert!(s.max_divergence(&s.to_spectral(&p1)) < 1e-10);
}

#[test]
fn checkpoint_round_trip() {
    let grid = make_channel_grid(1.0, 2.0, 1.0, 4, 6, 17, 1.3).unwrap();
    let (al, au) = friction(0.25);
    let u = cell(&grid);
    let mut p = ScalarField::zeros(&grid);
    p.data.iter_mut().enumerate().for_each(|(i, v)| *v = i as f64 * 0.5);
    let state = FlowState { u, p, t: 0.125 };
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("state.bin");
    write_checkpoint(&path, &grid, 1e-3, Some((&al, &au)), &state).unwrap();
    let c: Checkpoint<f64> = read_checkpoint(&path).unwrap();
    assert_eq!(c.grid.z_nodes, grid.z_nodes);
    assert_eq!(c.epsilon, 1e-3);
    assert_eq!(c.state.t, 0.125);
    assert_eq!(c.state.u.c, state.u.c);
    assert_eq!(c.state.p.data, state.p.data);
}

#[test]
fn checkpoint_rejects_garbage() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.bin");
    std::fs::write(&path, b"not a checkpoint").unwrap();
    assert!(read_checkpoint::<f64>(&path).is_err());
}

#[test]
fn remainder_checks_alignment() {
    let grid = make_channel_grid(1.0, 1.0, 1.0, 4, 4, 17, 1.0).unwrap();
    let u = cell(&grid);
    let opts = SolverOptions::with_cadence(0.05);
    let a = euler_solve(&u, &Forcing::Zero, 0.1, &grid, &opts).unwrap();
    let theta = vec![VectorField::zeros(&grid, FieldKind::Corrector); a.snapshots.len()];
    let w = remainder(&a, &a, &theta).unwrap();
    assert!(w.snapshots.iter().all(|s| s.u.max_norm() == 0.0));
    assert!(matches!(remainder(&a, &a, &theta[1..]), Err(Error::Input(_))));
}

#[test]
fn nonlinear_gap_vanishes_for_identical_fields() {
    let grid = make_channel_grid(2.0, 2.0, 1.0, 8, 4, 33, 1.0).unwrap();
    let u = cell(&grid);
    assert_eq!(nonlinear_gap_j(&u, &u, &grid).unwrap().max_norm(), 0.0);
}

#[test]
fn interpolation_is_exact_on_cubics() {
    let src: Vec<f64> = (0..11).map(|k| (k as f64 / 10.0).powf(1.3)).collect();
    let v: Vec<[f64; 2]> = src.iter().map(|z| [z * z * z, 1.0 - z]).collect();
    let dst = [0.0, 0.123, 0.5, 0.77, 1.0];
    for (z, p) in dst.iter().zip(interpolate_profile(&src, &v, &dst)) {
        assert!((p[0] - z * z * z).abs() < 1e-13 && (p[1] - 1.0 + z).abs() < 1e-13);
    }
}
