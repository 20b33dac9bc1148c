use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tendon-hand"))
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

/// Compares against tests/golden/<name>; set UPDATE_GOLDEN=1 to rewrite.
fn golden(name: &str, actual: &str) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, expected, "golden file {name} differs");
}

fn csv_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect()
}

#[test]
fn fk_zero_pose() {
    let out = stdout(&["fk", "--finger", "index", "--deg", "0", "0", "0", "0"]);
    assert_eq!(out.lines().next(), Some("99.500000 0.000000 0.000000"));
    assert_eq!(out.lines().count(), 4);
}

#[test]
fn fk_right_angle() {
    let out = stdout(&["fk", "--finger", "index", "--deg", "0", "90", "0", "0"]);
    assert_eq!(out.lines().next(), Some("0.000000 0.000000 -99.500000"));
}

#[test]
fn fk_matches_scalar_formula() {
    let out = stdout(&["fk", "--finger", "index", "--deg", "15", "30", "45", "30"]);
    let got: Vec<f64> = out.lines().next().unwrap().split(' ').map(|v| v.parse().unwrap()).collect();
    let (t1, t2, t3, t4) = (15f64.to_radians(), 30f64.to_radians(), 45f64.to_radians(), 30f64.to_radians());
    let a = 47.0 * t2.cos() + 29.0 * (t2 + t3).cos() + 23.5 * (t2 + t3 + t4).cos();
    let b = 47.0 * t2.sin() + 29.0 * (t2 + t3).sin() + 23.5 * (t2 + t3 + t4).sin();
    let want = [a * t1.cos(), a * t1.sin(), -b];
    for (g, w) in got.iter().zip(want) {
        assert!((g - w).abs() <= 5e-7, "{g} vs {w}");
    }
}

#[test]
fn fk_out_of_limit_names_joint() {
    let out = run(&["fk", "--finger", "index", "--deg", "0", "0", "120", "80"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("PIP"));
}

#[test]
fn unknown_finger_is_validation_error() {
    assert_eq!(code(&["fk", "--finger", "sixth", "--deg", "0", "0", "0", "0"]), 2);
}

#[test]
fn ik_zero_pose() {
    let out = stdout(&["ik", "--finger", "index", "--mm", "99.5", "0", "0"]);
    assert_eq!(out.trim(), "0.000000 0.000000 0.000000 0.000000");
}

#[test]
fn ik_exit_codes() {
    assert_eq!(code(&["ik", "--finger", "index", "--mm", "200", "0", "0"]), 3);
    assert_eq!(code(&["ik", "--finger", "index", "--mm", "0", "0", "50"]), 4);
}

#[test]
fn fk_output_feeds_ik() {
    let fk = stdout(&["fk", "--finger", "index", "--deg", "-10", "35", "60", "40"]);
    let p: Vec<&str> = fk.lines().next().unwrap().split(' ').collect();
    let ik = stdout(&["ik", "--finger", "index", "--mm", p[0], p[1], p[2]]);
    let angles: Vec<f64> = ik.split_whitespace().map(|v| v.parse().unwrap()).collect();
    for (g, w) in angles.iter().zip([-10.0, 35.0, 60.0, 40.0]) {
        assert!((g - w).abs() < 1e-4, "{angles:?}");
    }
}

#[test]
fn tendon_profile_excursion() {
    let rows = csv_rows(&stdout(&["--format", "csv", "tendon-profile", "--finger", "index", "--step", "1"]));
    assert_eq!(rows.len(), 111);
    let excursion = rows.last().unwrap()[1] - rows[0][1];
    assert!((excursion + 16.86).abs() <= 0.05, "{excursion}");
    assert!(rows[..=90].windows(2).all(|w| w[1][2] > w[0][2]));
}

#[test]
fn tendon_profile_coarse_step_has_two_rows() {
    let rows = csv_rows(&stdout(&["--format", "csv", "tendon-profile", "--step", "500"]));
    assert_eq!(rows.len(), 2);
    assert_eq!((rows[0][0], rows[1][0]), (0.0, 110.0));
}

#[test]
fn tendon_profile_rejects_bad_input() {
    assert_eq!(code(&["tendon-profile", "--joint", "BOGUS"]), 2);
    assert_eq!(code(&["tendon-profile", "--step", "0"]), 2);
}

#[test]
fn tendon_profile_golden() {
    golden("profile_index_pip_5deg.csv", &stdout(&["--format", "csv", "tendon-profile", "--step", "5"]));
}

#[test]
fn simulate_flex_runs_to_full_stroke() {
    let script = data("flex.txt");
    let rows = csv_rows(&stdout(&["--format", "csv", "simulate", "--script", script.to_str().unwrap()]));
    let last = rows.last().unwrap();
    assert!((last[0] - 17.09).abs() <= 0.01, "{}", last[0]);
    assert_eq!(last[5], 20.0);
    for col in 1..=4 {
        assert!(rows.windows(2).all(|w| w[1][col] >= w[0][col]));
    }
}

#[test]
fn simulate_sma_only_while_extending() {
    let script = data("flex_extend.txt");
    let text = stdout(&["--format", "csv", "simulate", "--script", script.to_str().unwrap()]);
    let rows = csv_rows(&text);
    for r in &rows {
        if r[6] == 1.0 {
            assert!(r[0] > 20.0 && r[0] <= 40.0, "sma powered at t = {}", r[0]);
        }
        if r[0] <= 20.0 || r[0] > 40.0 {
            assert_eq!(r[6], 0.0, "t = {}", r[0]);
        }
    }
    assert!(rows.iter().any(|r| r[6] == 1.0));
    golden("simulate_flex_extend.csv", &text);
}

#[test]
fn simulate_reports_script_line() {
    let script = data("bad.txt");
    let out = run(&["simulate", "--script", script.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(5));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn simulate_missing_script_is_io_error() {
    assert_eq!(code(&["simulate", "--script", "/nonexistent/script.txt"]), 5);
}

#[test]
fn check_allocation() {
    assert_eq!(stdout(&["check", "allocation"]).trim(), "32 actuators: 17 SMA, 15 motor — OK");
}

#[test]
fn check_gestures() {
    assert_eq!(stdout(&["check", "gestures"]).lines().last(), Some("32/32 feasible"));
}

#[test]
fn check_grasps() {
    let out = stdout(&["check", "grasps"]);
    assert!(out.contains("Schlesinger 5/6 demonstrated (hook untested), Cutkosky 9/16"), "{out}");
}

#[test]
fn sweep_is_seed_deterministic() {
    let a = stdout(&["--seed", "7", "sweep", "--count", "50"]);
    assert_eq!(a, stdout(&["--seed", "7", "sweep", "--count", "50"]));
    assert_ne!(a, stdout(&["--seed", "8", "sweep", "--count", "50"]));
}

#[test]
fn workspace_is_byte_stable() {
    let args = ["--format", "csv", "workspace", "--grid", "4"];
    let a = stdout(&args);
    assert_eq!(a, stdout(&args));
    golden("workspace_grid4.csv", &a);
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("profile.csv");
    let out = run(&["--format", "csv", "--output", path.to_str().unwrap(), "tendon-profile", "--step", "5"]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(
        std::fs::read_to_string(&path).unwrap(),
        stdout(&["--format", "csv", "tendon-profile", "--step", "5"])
    );
}

#[test]
fn spec_flag_round_trips_dump() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("hand.json");
    std::fs::write(&path, stdout(&["dump", "spec"])).unwrap();
    let spec = path.to_str().unwrap();
    assert_eq!(
        stdout(&["--spec", spec, "fk", "--finger", "index", "--deg", "5", "20", "30", "20"]),
        stdout(&["fk", "--finger", "index", "--deg", "5", "20", "30", "20"])
    );
}

#[test]
fn malformed_spec_is_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("hand.json");
    std::fs::write(&path, "{ \"fingers\": ").unwrap();
    assert_eq!(code(&["--spec", path.to_str().unwrap(), "check", "allocation"]), 5);
}

#[test]
fn invalid_spec_is_validation_error() {
    let text = stdout(&["dump", "spec"]).replacen("47.0", "-47.0", 1);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("hand.json");
    std::fs::write(&path, text).unwrap();
    assert_eq!(code(&["--spec", path.to_str().unwrap(), "check", "allocation"]), 2);
}

#[test]
fn check_kapandji_exit_follows_score() {
    let out = run(&["check", "kapandji"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let line = text.lines().find(|l| l.starts_with("Kapandji score")).unwrap();
    let full = line.contains(" 10/10 ");
    assert_eq!(out.status.code(), Some(if full { 0 } else { 1 }), "{line}");
    let loose = stdout(&["check", "kapandji", "--tolerance", "1000"]);
    assert!(loose.contains("Kapandji score 10/10"));
    assert_eq!(code(&["check", "kapandji", "--tolerance", "-1"]), 2);
}

#[test]
fn check_gestures_from_file() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/gestures.json");
    let out = stdout(&["check", "gestures", "--gestures", path.to_str().unwrap()]);
    assert_eq!(out.lines().last(), Some("32/32 feasible"));
}
