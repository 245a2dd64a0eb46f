use std::f64::consts::TAU;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dampcheck")).args(args).output().expect("spawn dampcheck")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn jump_estimate(text: &str) -> f64 {
    let line = text.lines().find(|l| l.starts_with("branch jump across")).expect("jump line");
    line.split(": ").nth(1).unwrap().split_whitespace().next().unwrap().parse().unwrap()
}

#[test]
fn classify_underdamped_prints_pseudo_frequency() {
    let out = run(&["classify", "--omega0", "1", "--gamma", "0.5"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("Underdamped"), "{text}");
    let omega: f64 = text.trim().rsplit('=').next().unwrap().parse().unwrap();
    assert!((omega - 0.75f64.sqrt()).abs() <= 1e-15);
}

#[test]
fn classify_critical() {
    let out = run(&["classify", "--gamma", "1"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("Critical"));
}

#[test]
fn classify_negative_gamma_is_invalid_input() {
    let out = run(&["classify", "--gamma", "-1"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn residual_liu_curve_violates() {
    let out = run(&["residual", "--curve", "liu-claimed", "--gamma", "0.1", "--convention", "liu"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("violates"));
}

#[test]
fn residual_liu_curve_violates_without_damping() {
    let out = run(&["residual", "--curve", "liu-claimed", "--gamma", "0", "--convention", "liu"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn residual_corrected_curve_satisfies() {
    let out = run(&["residual", "--curve", "corrected", "--gamma", "0.1", "--x0", "1", "--p0", "-0.1"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("satisfies"));
}

#[test]
fn residual_finite_difference_mode_agrees() {
    let out = run(&["residual", "--curve", "liu-claimed", "--derivatives", "finite-difference", "--convention", "liu"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn conserve_r_along_rk4() {
    let out = run(&[
        "conserve",
        "--invariant",
        "r",
        "--gamma",
        "0.1",
        "--x0",
        "1",
        "--p0",
        "0",
        "--t-end",
        "62.8",
        "--dt",
        "1e-3",
    ]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
}

#[test]
fn conserve_naive_h1_fails_and_unwrapped_holds() {
    let naive =
        run(&["conserve", "--invariant", "h1-naive", "--source", "liu-curve", "--gamma", "0.1", "--t-end", "10"]);
    assert_eq!(code(&naive), 1);
    let unwrapped = run(&["conserve", "--invariant", "h1-unwrapped", "--gamma", "0.1", "--t-end", "10"]);
    assert_eq!(code(&unwrapped), 0, "{}", stdout(&unwrapped));
}

#[test]
fn conserve_writes_series_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.csv");
    let out = run(&["conserve", "--invariant", "r", "--t-end", "1", "--csv", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().next(), Some("t,value"));
    assert_eq!(text.lines().count(), 1002);
}

#[test]
fn field_h1_reports_two_pi_and_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("h1.csv");
    let svg = dir.path().join("h1.svg");
    let out = run(&[
        "field",
        "--invariant",
        "h1",
        "--gamma",
        "0.1",
        "--nx",
        "101",
        "--ny",
        "101",
        "-o",
        csv.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!((jump_estimate(&stdout(&out)) - TAU).abs() <= 1e-3);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().next(), Some("x,p,value,valid"));
    assert_eq!(text.lines().count(), 101 * 101 + 1);
    assert!(std::fs::read_to_string(&svg).unwrap().contains("<svg"));
}

#[test]
fn field_cos_h1_hides_the_cut() {
    let out = run(&["field", "--invariant", "cos-h1", "--gamma", "0.1", "--nx", "101", "--ny", "101"]);
    assert_eq!(code(&out), 0);
    assert!(jump_estimate(&stdout(&out)).abs() <= 1e-3);
}

#[test]
fn field_at_zero_damping_is_refused() {
    let out = run(&["field", "--invariant", "h1", "--gamma", "0", "--nx", "11", "--ny", "11"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).to_lowercase().contains("singular"));
}

#[test]
fn demo_errors_passes() {
    for args in [&["demo-errors"][..], &["demo-errors", "--gamma", "0.25"]] {
        let out = run(args);
        assert_eq!(code(&out), 0, "{}", stdout(&out));
        assert!(stdout(&out).contains("7/7"));
    }
}

#[test]
fn demo_errors_json() {
    let out = run(&["demo-errors", "--json"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["all_passed"], true);
    assert_eq!(v["sections"].as_array().unwrap().len(), 7);
}

#[test]
fn demo_errors_rejects_overdamped() {
    assert_eq!(code(&run(&["demo-errors", "--gamma", "1.5"])), 2);
}
