use std::process::{Command, Output};

use serde_json::Value;

fn epspect(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_epspect")).args(args).env_remove("EPSPECT_TOL").output().expect("spawn")
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn spectrum_two_sites() {
    let v = stdout_json(&epspect(&["spectrum", "--n", "2", "--u", "0", "--r", "1"]));
    let ev = v["eigenvalues"].as_array().unwrap();
    let re: Vec<f64> = ev.iter().map(|p| p[0].as_f64().unwrap()).collect();
    assert!((re[0] + 1.0).abs() < 1e-12 && (re[1] - 1.0).abs() < 1e-12);
    assert!(ev.iter().all(|p| p[1].as_f64().unwrap().abs() < 1e-12));
    assert_eq!(v["n_real"], 2);
}

#[test]
fn ep_locate_three_sites() {
    let v = stdout_json(&epspect(&["ep", "locate", "--n", "3", "--format", "json"]));
    let certs = v.as_array().unwrap();
    assert_eq!(certs.len(), 2);
    let mut us: Vec<f64> = certs.iter().map(|c| c["u_star"].as_f64().unwrap()).collect();
    us.sort_by(f64::total_cmp);
    assert!((us[0] + 0.3002831061).abs() < 1e-9);
    assert!((us[1] - 0.3002831061).abs() < 1e-9);
}

#[test]
fn sturmian_table_check() {
    let out = epspect(&["sturmian", "--n", "9", "--check-table"]);
    let v = stdout_json(&out);
    assert_eq!(v["checks"]["table"], "PASS");
}

#[test]
fn charpoly_csv_is_exact() {
    let out = epspect(&["--format", "csv", "charpoly", "--n", "3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "power,coefficient");
    // E^3 - E at u = 0, r = 0
    assert_eq!(&lines[1..], &["0,0", "1,-1", "2,0", "3,1"]);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(epspect(&["spectrum", "--n", "2"]).status.code(), Some(1));
    assert_eq!(epspect(&["nonsense"]).status.code(), Some(1));
    assert_eq!(epspect(&["--format", "xml", "spectrum"]).status.code(), Some(1));
    assert_eq!(epspect(&["spectrum", "--n", "1", "--u", "0", "--r", "0"]).status.code(), Some(1));
    assert_eq!(epspect(&["--help"]).status.code(), Some(0));
}

#[test]
fn computation_errors_exit_two_with_record() {
    let out = epspect(&["ep", "locate", "--n", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let rec: Value = serde_json::from_slice(&out.stderr).expect("json error record");
    assert_eq!(rec["error"], "EpLine");
    assert!(rec["message"].as_str().unwrap().contains("E = u"));

    let out = epspect(&["ep", "certify", "--n", "3", "--u", "0", "--e", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let rec: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(rec["error"].is_string());
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.csv");
    let out = epspect(&["--format", "csv", "--out", path.to_str().unwrap(), "robin", "--alpha", "1", "--beta", "1", "--h", "1"]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let row: Vec<f64> = text.lines().nth(1).unwrap().split(',').map(|s| s.parse().unwrap()).collect();
    // z = i / ((1 + i) + i)
    assert!((row[0] - 0.4).abs() < 1e-15 && (row[1] - 0.2).abs() < 1e-15);
}

#[test]
fn sweep_is_independent_of_jobs() {
    let base = ["--format", "csv", "sweep", "--n", "7", "--swept", "u", "--lo", "-0.6", "--hi", "0.6", "--count", "61"];
    let one = epspect(&[&["--jobs", "1"], &base[..]].concat());
    let four = epspect(&[&["--jobs", "4"], &base[..]].concat());
    assert!(one.status.success() && four.status.success());
    assert_eq!(one.stdout, four.stdout);
    let text = String::from_utf8(one.stdout).unwrap();
    assert!(text.starts_with("param,re_E1,im_E1,"));
    assert_eq!(text.lines().count(), 62);
}

#[test]
fn sweep_from_json_spec() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    std::fs::write(
        &spec,
        r#"{"n": 5, "swept": "u", "fixed": 0.0, "grid": {"lo": -1.0, "hi": 1.0, "count": 41}}"#,
    )
    .unwrap();
    let plot = dir.path().join("plot.gp");
    let v = stdout_json(&epspect(&[
        "sweep",
        "--spec",
        spec.to_str().unwrap(),
        "--plot-script",
        plot.to_str().unwrap(),
    ]));
    assert_eq!(v["reality_intervals"].as_array().unwrap().len(), 1);
    assert!(std::fs::read_to_string(plot).unwrap().contains("plot "));
}

#[test]
fn env_tolerance_is_honoured() {
    let run = |tol: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_epspect"));
        cmd.args(["spectrum", "--n", "5", "--u", "0.6", "--r", "0"]).env_remove("EPSPECT_TOL");
        if let Some(t) = tol {
            cmd.env("EPSPECT_TOL", t);
        }
        stdout_json(&cmd.output().unwrap())["n_real"].as_u64().unwrap()
    };
    assert_eq!(run(None), 3);
    assert_eq!(run(Some("10")), 5);
}

#[test]
fn metric_and_dyson() {
    let v = stdout_json(&epspect(&["metric", "--n", "4", "--u", "0.1", "--r", "0.8"]));
    assert!(v["dyson"].is_object());
    let out = epspect(&["metric", "--n", "5", "--u", "0.5", "--r", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let rec: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(rec["error"], "NoPositiveSolution");
}
