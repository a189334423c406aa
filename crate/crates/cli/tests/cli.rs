use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use serde_json::Value;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_puncture-metric"));
    cmd.env_remove("PUNCTURE_METRIC_PRECISION");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    assert!(o.status.success(), "stderr: {}", stderr(o));
    serde_json::from_str(&stdout(o)).expect("valid json")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("puncture-metric-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn strings(v: &Value) -> Vec<&str> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_str().unwrap())
        .collect()
}

#[test]
fn lambda_coefficients() {
    let v = json(&run(&[
        "coeffs", "--N", "2", "--c1", "16", "--c2", "-128", "--order", "6",
    ]));
    assert_eq!(&strings(&v["b"])[..3], ["1/16", "1/32", "21/1024"]);
    assert_eq!(
        strings(&v["c"]),
        ["16", "-128", "704", "-3072", "11488", "-38400"]
    );
    assert_eq!(v["level_N"], 2);
    assert_eq!(v["order"], 6);
}

#[test]
fn gamma3_coefficients() {
    let v = json(&run(&[
        "coeffs", "--N", "3", "--c1", "1", "--c2", "3", "--order", "4",
    ]));
    assert_eq!(strings(&v["c"])[2], "9");
    assert_eq!(&strings(&v["b"])[..3], ["1", "-3", "9"]);
}

#[test]
fn zero_c1_is_rejected() {
    let o = run(&[
        "coeffs", "--N", "2", "--c1", "0", "--c2", "1", "--order", "3",
    ]);
    assert!(!o.status.success());
    let err: Value = serde_json::from_str(stderr(&o).trim()).unwrap();
    assert_eq!(err["error"]["message"], "c1 must be nonzero");
    assert_eq!(err["error"]["kind"], "zero-c1");
}

#[test]
fn bad_arguments_give_error_objects() {
    for args in [
        vec!["coeffs", "--N", "7", "--c1", "1", "--c2", "0"],
        vec!["coeffs", "--N", "2", "--c1", "1/0", "--c2", "0"],
        vec!["metric", "--example", "lambda"],
        vec!["metric", "--example", "lambda", "--re", "5"],
        vec![
            "metric",
            "--example",
            "lambda",
            "--re",
            "1e-3",
            "--v-norm",
            "-1",
        ],
        vec!["metric", "--example", "lambda", "--re", "1e-3", "--M", "40"],
        vec!["coeffs", "--bogus"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let err: Value = serde_json::from_str(stderr(&o).trim()).expect("error object");
        assert!(err["error"]["kind"].is_string(), "{args:?}");
    }
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec![
            "coeffs", "--N", "5", "--c1", "3/7", "--c2", "-2", "--order", "8",
        ],
        vec!["metric", "--example", "gamma3", "--grid", "--format", "csv"],
        vec![
            "radius",
            "--example",
            "lambda",
            "--re",
            "1e-3",
            "--im",
            "2e-4",
            "--precision",
            "extended",
        ],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn coefficient_files_round_trip() {
    let path = scratch("lambda.json");
    let written = run(&[
        "coeffs", "--N", "2", "--c1", "16", "--c2", "-128", "--order", "12",
    ]);
    assert!(written.status.success());
    fs::write(&path, &written.stdout).unwrap();
    let file = path.to_str().unwrap();

    let again = run(&["coeffs", "--coeffs-file", file]);
    assert_eq!(again.stdout, written.stdout);

    let from_file = json(&run(&[
        "metric",
        "--coeffs-file",
        file,
        "--re",
        "1e-3",
        "--im",
        "-4e-4",
    ]));
    let built_in = json(&run(&[
        "metric",
        "--example",
        "lambda",
        "--order",
        "12",
        "--re",
        "1e-3",
        "--im",
        "-4e-4",
    ]));
    assert_eq!(from_file, built_in);
}

#[test]
fn grid_csv() {
    let o = run(&["metric", "--example", "lambda", "--grid", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("re,im,chi,order"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 256);
    for r in &rows {
        let modulus = r[0].hypot(r[1]);
        assert!((1e-4 * (1.0 - 1e-12)..=1e-2 * (1.0 + 1e-12)).contains(&modulus));
        assert!(r[2].is_finite() && r[2] > 0.0);
        assert_eq!(r[3], 6.0);
    }
    // radius-major: chi decreases as |p| grows
    assert!(rows[0][2] > rows[255][2]);
}

#[test]
fn grid_json_matches_csv() {
    let csv = stdout(&run(&[
        "metric",
        "--example",
        "gamma3",
        "--grid",
        "--format",
        "csv",
        "--M",
        "4",
    ]));
    let js = json(&run(&[
        "metric",
        "--example",
        "gamma3",
        "--grid",
        "--M",
        "4",
    ]));
    let points = js["points"].as_array().unwrap();
    for (line, pt) in csv.lines().skip(1).zip(points) {
        let chi: f64 = line.split(',').nth(2).unwrap().parse().unwrap();
        assert_eq!(chi, pt["chi"].as_f64().unwrap());
    }
}

#[test]
fn zero_tangent_vector() {
    let v = json(&run(&[
        "metric",
        "--example",
        "lambda",
        "--re",
        "1e-3",
        "--v-norm",
        "0",
    ]));
    assert_eq!(v["chi"], 0.0);
}

#[test]
fn single_point_metric() {
    let v = json(&run(&["metric", "--example", "lambda", "--re", "1e-3"]));
    let chi = v["chi"].as_f64().unwrap();
    let direct = v["direct"].as_f64().unwrap();
    assert!(chi > 0.0 && ((chi - direct) / direct).abs() < 1e-12);
    assert_eq!(v["terms"].as_array().unwrap().len(), 6);
    assert_eq!(v["precision"], "double");
}

#[test]
fn precision_from_environment() {
    let o = bin()
        .env("PUNCTURE_METRIC_PRECISION", "extended")
        .args(["metric", "--example", "lambda", "--re", "1e-4"])
        .output()
        .unwrap();
    let v = json(&o);
    assert_eq!(v["precision"], "extended");
    // 32 significant digits
    let text = v["chi_text"].as_str().unwrap();
    assert_eq!(text.split('e').next().unwrap().len(), 33);
}

#[test]
fn radius_bound() {
    let v = json(&run(&[
        "radius",
        "--example",
        "lambda",
        "--re",
        "1e-3",
        "--M",
        "4",
    ]));
    assert!(v["relative_gap"].as_f64().unwrap() < 1e-6);
    assert!(v["bound"].as_f64().unwrap() < v["leading_term"].as_f64().unwrap());
}

#[test]
fn verify_passes_on_built_ins() {
    let o = run(&["verify"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text
        .lines()
        .any(|l| l.starts_with("PASS") && l.contains("expansion vs direct")));
    assert!(!text.contains("FAIL"));
}

#[test]
fn verify_names_corrupted_invariant() {
    let path = scratch("corrupt.json");
    let good = json(&run(&["example", "lambda", "--order", "8"]));
    let mut bad = good.clone();
    bad["b"][4] = Value::from("6257/524289");
    fs::write(&path, serde_json::to_string_pretty(&bad).unwrap()).unwrap();
    let file = path.to_str().unwrap();

    let o = run(&["verify", "--coeffs-file", file]);
    assert_eq!(o.status.code(), Some(1));
    assert!(
        stderr(&o).contains("composition c(b(x)) = x"),
        "{}",
        stderr(&o)
    );
    assert!(stdout(&o)
        .lines()
        .any(|l| l.starts_with("FAIL") && l.contains("composition")));

    let js = json_any(&run(&["verify", "--coeffs-file", file, "--format", "json"]));
    assert_eq!(js["passed"], false);
    assert!(strings(&js["failed"]).contains(&"Newton reversion reproduces b"));

    // evaluation refuses inconsistent data
    let o = run(&["metric", "--coeffs-file", file, "--re", "1e-3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("invalid-covering-data"));
}

fn json_any(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).expect("valid json")
}

#[test]
fn verify_at_order_twenty_is_fast() {
    let start = Instant::now();
    let o = run(&["verify", "--order", "20"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(start.elapsed() < Duration::from_secs(60));
}

#[test]
fn user_supplied_series() {
    let v = json(&run(&["coeffs", "--c", "2,-1/3,5", "--scale-k", "4"]));
    assert_eq!(v["level_N"], "user-supplied");
    assert_eq!(v["scale_k"], "4");
    assert_eq!(strings(&v["b"])[0], "1/2");
}

#[test]
fn example_listing() {
    let v = json(&run(&["example"]));
    let names: Vec<&str> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["name"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["lambda", "gamma3"]);
}
