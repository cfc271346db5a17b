use nslayer::field::ScalarField;
use nslayer::geometry::{make_channel_grid, FrictionTensor, Wall};
use nslayer::harness::*;
use nslayer::solver::{write_checkpoint, FlowState};
use nslayer::Error;

/// Fast-path sweep small enough for a unit test.
fn small(kind: StudyKind) -> StudyConfig {
    let mut c = StudyConfig::for_kind(kind);
    c.eps_list = vec![1e-2, 1e-3, 1e-4];
    c.oracle_nz = 513;
    c.oracle_steps = 500;
    c.cadence = c.t_final / 10.0;
    c
}

#[test]
fn parse_reads_keys_and_defaults() {
    let text = "
        # tanh shear
        kind = corrected
        h = 2.0
        nx = 8   # trailing comment
        a_lower = 0.5
        a_upper = 0.5, 0.1, 0.0, 0.3
        eps_list = 1e-2, 1e-3, 1e-4
        t_final = 0.5
        initial = perturbed_shear
        forcing = custom:0, 0.1, 0
        dt_max = 1e-3
        output_prefix = run1
    ";
    let c = StudyConfig::parse(text).unwrap();
    assert_eq!(c.kind, StudyKind::CorrectedRates);
    assert_eq!(c.nx, 8);
    assert_eq!(c.a_upper, [[0.5, 0.1], [0.0, 0.3]]);
    assert_eq!(c.region_a, 0.25);
    assert_eq!(c.cadence, 0.01);
    assert_eq!(c.forcing, ForcingSpec::Custom([0.0, 0.1, 0.0]));
    assert!(matches!(c.initial, InitialData::PerturbedShear { .. }));
    assert_eq!(c.dt_max, Some(1e-3));
    assert_eq!(c.output_prefix, "run1");
}

#[test]
fn parse_rejects_bad_input() {
    for text in [
        "nope = 1",
        "nx",
        "nx = many",
        "eps_list = 1e-3, 1e-2, 1e-4",
        "eps_list = 1e-1, 1e-3, 1e-4",
        "kind = uniform\nforcing = custom:1,0,0",
        "a_lower = 1, 2",
        "cadence = 0.3",
        "initial = vortex",
        "region_a = 0.7",
        "oracle_steps = 2001",
    ] {
        assert!(matches!(StudyConfig::parse(text), Err(Error::Config(_))), "{text}");
    }
}

#[test]
fn uniform_targets_for_nominal_m() {
    let (b, i) = uniform_targets(7);
    assert!((b - 0.3125).abs() < 1e-15);
    assert!((i - (0.75 - 9.0 / 56.0)).abs() < 1e-15);
    assert!((i - 0.5893).abs() < 1e-4);
}

#[test]
fn uniform_study_refuses_forcing() {
    let mut c = small(StudyKind::UniformRates);
    c.forcing = ForcingSpec::Custom([1.0, 0.0, 0.0]);
    assert!(matches!(run_uniform_rates(&c), Err(Error::Config(_))));
}

#[test]
fn zero_corrector_reproduces_uncorrected_numbers() {
    let u = run_uncorrected_rates(&small(StudyKind::UncorrectedRates)).unwrap();
    let mut c = small(StudyKind::CorrectedRates);
    c.zero_corrector = true;
    let r = run_corrected_rates(&c).unwrap();
    for (a, b) in [("rem_linf_l2", "diff_linf_l2"), ("rem_l2_h1", "diff_l2_h1")] {
        let x: Vec<f64> = r.norms.iter().filter(|n| n.name == a).map(|n| n.value).collect();
        let y: Vec<f64> = u.norms.iter().filter(|n| n.name == b).map(|n| n.value).collect();
        assert_eq!(x.len(), 3);
        assert_eq!(x, y);
    }
    assert!(r.fit("r_eps_l2").is_none());
}

#[test]
fn sweep_is_deterministic() {
    let c = small(StudyKind::UncorrectedRates);
    let a = run_uncorrected_rates(&c).unwrap();
    let b = run_uncorrected_rates(&c).unwrap();
    assert_eq!(a.to_json_without_timing().unwrap(), b.to_json_without_timing().unwrap());
}

#[test]
fn short_sweep_reports_fit_error() {
    let mut c = small(StudyKind::UncorrectedRates);
    c.eps_list = vec![1e-3, 1e-4];
    let r = run_uncorrected_rates(&c).unwrap();
    let f = r.fit("diff_linf_l2").unwrap();
    assert!(f.fit.is_none() && f.error.is_some() && !f.pass);
    assert!(!r.passed());
}

#[test]
fn uniform_regions_cover_the_channel() {
    let r = run_uniform_rates(&small(StudyKind::UniformRates)).unwrap();
    let g = study_grid(&r.config).unwrap();
    let u0 = euler_reference(&r.config, &g).unwrap();
    let ue = viscous_run(&r.config, &g, 1e-3).unwrap();
    let d = ue.last().u.sub(&u0.last().u, nslayer::field::FieldKind::Difference);
    use nslayer::analysis::{norm_linf, Region};
    let whole = norm_linf(&d, &g, Region::Whole).unwrap();
    let b = norm_linf(&d, &g, Region::BoundaryStrip(r.config.region_a)).unwrap();
    let i = norm_linf(&d, &g, Region::Interior(r.config.region_a)).unwrap();
    assert_eq!(whole, b.max(i));
    assert!(r.notes.iter().any(|n| n.contains("interior slope")));
}

#[test]
fn custom_initial_data_runs_the_full_solver() {
    let mut c = StudyConfig::for_kind(StudyKind::UncorrectedRates);
    c.nx = 8;
    c.ny = 4;
    c.nz = 33;
    c.eps_list = vec![1e-2, 5e-3, 2.5e-3];
    c.t_final = 0.05;
    c.cadence = 0.01;
    c.oracle_steps = 500;
    let g = make_channel_grid(c.l1, c.l2, c.h, c.nx, c.ny, c.nz, c.clustering).unwrap();
    let u = initial_field(
        &StudyConfig {
            initial: InitialData::TaylorGreenLike,
            ..c.clone()
        },
        &g,
    )
    .unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("init.bin");
    let al = FrictionTensor::isotropic(Wall::Lower, 0.5).unwrap();
    let au = FrictionTensor::isotropic(Wall::Upper, 0.5).unwrap();
    let state = FlowState {
        u,
        p: ScalarField::zeros(&g),
        t: 0.0,
    };
    write_checkpoint(&path, &g, 0.0, Some((&al, &au)), &state).unwrap();
    c.initial = InitialData::Custom(path);
    assert!(!uses_fast_path(&c));
    let r = run_uncorrected_rates(&c).unwrap();
    assert!(r.failures.is_empty(), "{:?}", r.failures);
    assert_eq!(r.norms.len(), 6);
}

#[test]
fn report_round_trip_and_csv_rows() {
    let r = run_uncorrected_rates(&small(StudyKind::UncorrectedRates)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let json = emit_report(&r, dir.path(), "s", ReportFormat::Json).unwrap();
    let back = read_report_json(&json[0]).unwrap();
    assert_eq!(
        serde_json::to_value(&back).unwrap(),
        serde_json::to_value(&r).unwrap()
    );
    let csv = emit_report(&r, dir.path(), "s", ReportFormat::Csv).unwrap();
    let text = std::fs::read_to_string(&csv[0]).unwrap();
    assert_eq!(text.lines().count(), 1 + r.norms.len());
    assert_eq!(text.lines().next().unwrap(), "epsilon,norm,region,value");
    let plot = std::fs::read_to_string(&csv[1]).unwrap();
    assert_eq!(plot.lines().count(), 1 + 2 * 3);
}

#[test]
fn empty_report_gives_header_only_csv() {
    let r = ConvergenceReport::new(&StudyConfig::default());
    let dir = tempfile::tempdir().unwrap();
    let csv = emit_report(&r, dir.path(), "empty", ReportFormat::Csv).unwrap();
    assert_eq!(std::fs::read_to_string(&csv[0]).unwrap(), "epsilon,norm,region,value\n");
    assert!(r.passed());
}

#[test]
fn emit_reports_io_path() {
    let r = ConvergenceReport::new(&StudyConfig::default());
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("blocker");
    std::fs::write(&file, "x").unwrap();
    match emit_report(&r, &file.join("sub"), "p", ReportFormat::Json) {
        Err(Error::Io { path, .. }) => assert!(path.starts_with(&file)),
        other => panic!("{other:?}"),
    }
}

#[test]
fn dispatch_follows_kind() {
    let r = run_study(&StudyConfig::for_kind(StudyKind::TorusSuite)).unwrap();
    assert_eq!(r.config.kind, StudyKind::TorusSuite);
    assert!(r.check_named("flat_limit").is_some());
}
