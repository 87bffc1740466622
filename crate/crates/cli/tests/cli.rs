use std::path::Path;
use std::process::{Command, Output};

fn bhclock(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bhclock"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn unknown_key_exits_with_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = bhclock(&["thermal", "-p", "foo=1"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("`foo`"), "{}", stderr(&o));
}

#[test]
fn xi_outside_disk_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let o = bhclock(&["crossover-scan", "-p", "xi=1.2"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("`xi`"), "{}", stderr(&o));
}

#[test]
fn bad_flags_exit_with_config_error() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(bhclock(&["nonsense"], dir.path()).status.code(), Some(1));
    assert_eq!(
        bhclock(&["thermal", "--units", "cgs"], dir.path())
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        bhclock(&["isotherm", "-p", "M=-1"], dir.path())
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn violated_tolerance_exits_with_numerical_failure() {
    let dir = tempfile::tempdir().unwrap();
    let o = bhclock(&["geodesic-compare", "-p", "tol_rel_err=1e-9"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let checks = std::fs::read_to_string(dir.path().join("checks.csv")).unwrap();
    assert!(checks
        .lines()
        .any(|l| l.starts_with("near-horizon relative error,") && l.ends_with(",false")));
}

#[test]
fn thermal_reports_temperature() {
    let dir = tempfile::tempdir().unwrap();
    let o = bhclock(
        &[
            "thermal", "-p", "xi=0.5", "-p", "J=1", "-p", "N=1", "-p", "grid=3",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("thermal.json")).unwrap())
            .unwrap();
    assert!((v["T"].as_f64().unwrap() - 0.721348).abs() < 1e-6);
    assert_eq!(v["Z0"].as_f64().unwrap(), 4.0 / 3.0);
}

#[test]
fn isotherm_real_axis_root() {
    let dir = tempfile::tempdir().unwrap();
    let o = bhclock(&["isotherm", "--units", "natural"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("isotherm.csv")).unwrap();
    let row = csv.lines().nth(1).unwrap();
    let re: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
    assert!((re - 3.4873e-6).abs() < 1e-10);
}

#[test]
fn geodesic_compare_stays_within_one_percent() {
    let dir = tempfile::tempdir().unwrap();
    let o = bhclock(
        &["geodesic-compare", "-p", "M=1", "-p", "q0_rel=1e-3"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("geodesic.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("tau,q_full,q_approx,rel_err"));
    let worst = lines
        .map(|l| l.rsplit(',').next().unwrap().parse::<f64>().unwrap())
        .fold(0.0, f64::max);
    assert!(worst > 0.0 && worst <= 0.01);
}

#[test]
fn si_geodesic_runs() {
    let dir = tempfile::tempdir().unwrap();
    let o = bhclock(
        &["geodesic-compare", "--units", "si", "-p", "M=1.98892e30"],
        dir.path(),
    );
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stdout)
    );
}

#[test]
fn config_file_and_sections() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.ini");
    std::fs::write(
        &cfg,
        "# shared\nseed = 3\n[isotherm]\nangles = 0,90\n[thermal]\nxi = 0.2\n",
    )
    .unwrap();
    let out = dir.path().join("o");
    let o = bhclock(&["isotherm", "--config", cfg.to_str().unwrap()], &out);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = std::fs::read_to_string(out.join("isotherm.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);
}

#[test]
fn paw_demo_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let o = bhclock(
        &["paw-demo", "-p", "support_n_t=3", "-p", "support_n_q=4"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("paw.json")).unwrap())
            .unwrap();
    for key in [
        "d_gamma",
        "d_xi",
        "kernel_dim",
        "max_residual",
        "fidelity_trace",
    ] {
        assert!(v.get(key).is_some(), "{key}");
    }
    let support = std::fs::read_to_string(dir.path().join("support.csv")).unwrap();
    assert_eq!(support.lines().next(), Some("t,q,abs_z2,marked"));
    assert_eq!(support.lines().count(), 1 + 3 * 4);
}
