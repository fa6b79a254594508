//! End-to-end tests of the `steklov` binary: flags, formats, exit codes,
//! output determinism, and the batch CSV error policy.

use std::f64::consts::PI;
use std::io::Write;
use std::process::{Command, Output};

fn steklov_bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_steklov"));
    cmd.env_remove("STEKLOV_TOL");
    cmd
}

fn run(args: &[&str]) -> Output {
    steklov_bin().args(args).output().expect("binary runs")
}

fn stdout_str(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

fn json(output: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout_str(output)).expect("json output")
}

#[test]
fn warp_constant_curvature_reports_first_zero() {
    let out = run(&["warp", "--constant", "1", "--tmax", "4", "--format", "json"]);
    assert!(out.status.success());
    let value = json(&out);
    let zero = value["first_zero"].as_f64().expect("first zero present");
    assert!((zero - PI).abs() < 1e-9);
    assert!(value["samples"].as_array().unwrap().len() > 10);
}

#[test]
fn warp_profile_file_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("inner_equator.toml");
    let profile = steklov::case_profile(steklov::TorusCase::InnerEquator).unwrap();
    std::fs::write(&path, profile.to_toml_string()).unwrap();

    let out = run(&[
        "warp",
        "--profile",
        path.to_str().unwrap(),
        "--tmax",
        "1.5",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let value = json(&out);
    assert!(value["first_zero"].is_null());
    // f stays positive throughout.
    for sample in value["samples"].as_array().unwrap() {
        let t = sample["t"].as_f64().unwrap();
        let f = sample["f"].as_f64().unwrap();
        assert!(t <= 0.0 || f > 0.0);
    }
}

#[test]
fn warp_huge_curvature_truncates_at_tiny_zero_with_success() {
    let out = run(&[
        "warp",
        "--constant",
        "1e9",
        "--tmax",
        "1",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let zero = json(&out)["first_zero"].as_f64().expect("zero recorded");
    assert!((zero - PI / 1e9f64.sqrt()).abs() < 1e-9);
}

#[test]
fn steklov_examples_and_record_round_trip() {
    let out = run(&[
        "steklov",
        "--constant",
        "0",
        "--n",
        "2",
        "--r",
        "0.5",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let record: steklov::SteklovRecord = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert!((record.v1 - 2.0).abs() < 1e-9);
    assert_eq!(record.mode, 1);
    assert_eq!(record.n, 2);
    assert!(record.margin.is_none());

    let out = run(&[
        "steklov",
        "--constant",
        "1",
        "--n",
        "2",
        "--r",
        "1",
        "--format",
        "json",
    ]);
    let record: steklov::SteklovRecord = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert!((record.v1 - 1.1883951057781212).abs() < 1e-9);

    let out = run(&[
        "steklov",
        "--constant",
        "0",
        "--n",
        "5",
        "--r",
        "1",
        "--format",
        "json",
    ]);
    let record: steklov::SteklovRecord = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert!((record.v1 - 1.0).abs() < 1e-8);
}

#[test]
fn steklov_csv_has_stable_header() {
    let out = run(&["steklov", "--constant", "0", "--n", "3", "--r", "1"]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    assert!(text.starts_with("n,r,v1,mode,f_at_r,lambda1c_boundary,margin\n"));
}

#[test]
fn steklov_rejects_radius_past_first_zero_with_exit_4() {
    let out = run(&["steklov", "--constant", "4", "--n", "2", "--r", "1.6"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn missing_required_flag_is_a_usage_error() {
    let out = run(&["steklov", "--constant", "0", "--n", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn conflicting_profile_sources_exit_2() {
    let out = run(&["warp", "--constant", "1", "--case", "2", "--tmax", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn torus_outer_equator_margins_vanish() {
    let out = run(&[
        "torus",
        "--case",
        "1",
        "--rs",
        "0.3,0.6,0.9",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    for row in json(&out).as_array().unwrap() {
        assert!(row["margin"].as_f64().unwrap().abs() <= 1e-10);
    }
}

#[test]
fn torus_inner_equator_margin_positive() {
    let out = run(&["torus", "--case", "2", "--rs", "1.0", "--format", "json"]);
    assert!(out.status.success());
    let rows = json(&out);
    let row = &rows.as_array().unwrap()[0];
    assert!(row["margin"].as_f64().unwrap() > 0.0);
    assert!(row["v1_variable_bound"].as_f64().unwrap() < row["v1_escobar_bound"].as_f64().unwrap());
}

#[test]
fn torus_generic_point_margin_positive_below_breakpoint() {
    let out = run(&[
        "torus",
        "--case",
        "3",
        "--alpha",
        "1.5707963267948966",
        "--rs",
        "0.4",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let rows = json(&out);
    assert!(rows.as_array().unwrap()[0]["margin"].as_f64().unwrap() > 0.0);
}

#[test]
fn torus_default_grid_is_deterministic() {
    let a = run(&["torus", "--case", "2"]);
    let b = run(&["torus", "--case", "2"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    // 20 rows plus header.
    assert_eq!(stdout_str(&a).lines().count(), 21);
}

#[test]
fn wentzell_single_setting_values() {
    let out = run(&[
        "wentzell",
        "--n",
        "2",
        "--c",
        "1",
        "--K",
        "3",
        "--beta",
        "0",
        "--lambda1c",
        "2",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let rows = json(&out);
    let row = &rows.as_array().unwrap()[0];
    assert_eq!(row["lower"].as_f64().unwrap(), 0.5);
    assert!((row["upper"].as_f64().unwrap() - 1.0).abs() < 1e-14);

    let out = run(&[
        "wentzell",
        "--n",
        "2",
        "--c",
        "1",
        "--K",
        "3",
        "--beta",
        "0.7",
        "--lambda1c",
        "2",
        "--format",
        "json",
    ]);
    let rows = json(&out);
    let row = &rows.as_array().unwrap()[0];
    assert!((row["upper"].as_f64().unwrap() - 2.4).abs() < 1e-12);
}

#[test]
fn wentzell_single_invalid_radicand_exits_5() {
    let out = run(&[
        "wentzell",
        "--n",
        "2",
        "--c",
        "1",
        "--K",
        "3",
        "--beta",
        "0",
        "--lambda1c",
        "1.9",
    ]);
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn wentzell_batch_flags_bad_rows_but_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("settings.csv");
    let mut file = std::fs::File::create(&path).unwrap();
    writeln!(file, "n,lambda1c,c,K,beta").unwrap();
    writeln!(file, "2,2.0,1.0,3.0,0.0").unwrap();
    writeln!(file, "2,1.9,1.0,3.0,0.0").unwrap(); // violates the radicand
    writeln!(file, "2,3.0,1.0,3.0,1.0").unwrap();
    drop(file);

    let out = run(&["wentzell", "--batch", path.to_str().unwrap()]);
    assert!(out.status.success(), "one bad row must not fail the batch");
    let text = stdout_str(&out);
    assert!(text.starts_with("n,lambda1c,c,K,beta,lower,upper,gap,valid\n"));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[2].ends_with(",false"));
    assert!(lines[2].contains(",,")); // empty upper/gap fields
    assert!(lines[1].ends_with(",true"));
}

#[test]
fn wentzell_batch_all_invalid_exits_5() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    std::fs::write(&path, "n,lambda1c,c,K,beta\n2,1.9,1.0,3.0,0.0\n").unwrap();
    let out = run(&["wentzell", "--batch", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn tolerance_env_var_is_honored_and_validated() {
    let out = steklov_bin()
        .env("STEKLOV_TOL", "1e-8")
        .args([
            "steklov",
            "--constant",
            "0",
            "--n",
            "2",
            "--r",
            "1",
            "--format",
            "json",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());

    let out = steklov_bin()
        .env("STEKLOV_TOL", "not-a-number")
        .args(["steklov", "--constant", "0", "--n", "2", "--r", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn plot_data_is_whitespace_columns() {
    let out = run(&[
        "warp",
        "--constant",
        "0",
        "--tmax",
        "1",
        "--format",
        "plot-data",
    ]);
    assert!(out.status.success());
    for line in stdout_str(&out).lines() {
        assert_eq!(line.split_whitespace().count(), 3);
    }
}

#[test]
fn output_file_flag_writes_the_table() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let out = run(&[
        "torus",
        "--case",
        "1",
        "--rs",
        "0.5",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("r,v1_variable_bound,v1_escobar_bound,margin\n"));
}
