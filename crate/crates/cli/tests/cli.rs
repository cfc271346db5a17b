use std::process::Command;

fn nslayer() -> Command {
    Command::new(env!("CARGO_BIN_EXE_nslayer"))
}

#[test]
fn torus_suite_passes_and_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = nslayer().args(["torus", "--out"]).arg(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    for f in ["study.json", "study.csv", "study_plot.csv"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("PASS flat_limit"));
}

#[test]
fn config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "forcing = custom:1,0,0\n").unwrap();
    let out = nslayer()
        .args(["converge", "--kind", "uniform", "--no-emit", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("zero forcing"));
    std::fs::write(&cfg, "bogus = 3\n").unwrap();
    let out = nslayer().args(["torus", "--no-emit", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn failing_fit_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("two.cfg");
    std::fs::write(&cfg, "eps_list = 1e-3, 1e-4\noracle_nz = 257\noracle_steps = 100\ncadence = 0.025\n").unwrap();
    let out = nslayer()
        .args(["converge", "--kind", "uncorrected", "--no-emit", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bad_thread_count_is_a_config_error() {
    let out = nslayer()
        .env("NSLAYER_THREADS", "zero")
        .args(["inequalities", "--no-emit"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn emit_converts_json_to_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("s.cfg");
    std::fs::write(
        &cfg,
        "eps_list = 1e-2, 1e-3, 1e-4\noracle_nz = 257\noracle_steps = 100\ncadence = 0.025\noutput_prefix = s\n",
    )
    .unwrap();
    let out = nslayer()
        .env("NSLAYER_THREADS", "1")
        .args(["converge", "--kind", "corrected", "--zero-corrector", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.code().is_some());
    let csv_dir = dir.path().join("csv");
    let out = nslayer()
        .args(["emit", "--format", "csv", "--input"])
        .arg(dir.path().join("s.json"))
        .arg("--out")
        .arg(&csv_dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(csv_dir.join("s.csv")).unwrap();
    assert_eq!(text.lines().count(), 1 + 3 * 4);
}

#[test]
fn corrector_needs_a_mode() {
    let out = nslayer().args(["corrector", "--no-emit"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = nslayer().args(["corrector", "--check", "--no-emit"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}
