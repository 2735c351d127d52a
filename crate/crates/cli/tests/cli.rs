use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn mlsi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mlsi")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn classify_holds_at_the_boundary() {
    let o = mlsi(&["mlsi", "classify", "--measure", r#"{"family":"power_law","p":1.5}"#, "--q", "3"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = stdout_json(&o);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["kind"], "classify");
    assert_eq!(v["report"]["verdict"], Value::Bool(true));
    assert!(v["hypotheses"].as_array().unwrap().iter().all(|h| h["holds"] == true));
}

#[test]
fn double_exp_poincare_bracket() {
    let o = mlsi(&["poincare", "--measure", r#"{"family":"double_exp"}"#]);
    assert_eq!(code(&o), 0);
    let r = &stdout_json(&o)["report"];
    assert!((r["lower_bound"].as_f64().unwrap() - 1.0).abs() < 1e-8);
    assert!((r["upper_bound"].as_f64().unwrap() - 4.0).abs() < 1e-8);
}

#[test]
fn missing_file_names_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("absent-measure.json");
    let o = mlsi(&["poincare", "--measure", path.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("absent-measure.json"), "{err}");
}

#[test]
fn measure_from_file_and_malformed_json() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("gauss.json");
    fs::write(&good, r#"{"family":"gaussian"}"#).unwrap();
    assert_eq!(code(&mlsi(&["poincare", "--measure", good.to_str().unwrap()])), 0);

    let bad = dir.path().join("broken.json");
    fs::write(&bad, r#"{"family": "gaussian""#).unwrap();
    let o = mlsi(&["poincare", "--measure", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("malformed JSON") && err.contains("broken.json"), "{err}");
}

#[test]
fn unknown_family_lists_supported_ones() {
    let o = mlsi(&["poincare", "--measure", r#"{"family":"cauchy"}"#]);
    assert_eq!(code(&o), 1);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("cauchy") && err.contains("power_law") && err.contains("double_exp"), "{err}");
}

#[test]
fn inapplicable_verdict_exits_two() {
    let o = mlsi(&["mlsi", "classify", "--measure", r#"{"family":"power_law","p":0.8}"#, "--q", "2"]);
    assert_eq!(code(&o), 2);
    assert_eq!(stdout_json(&o)["report"]["verdict"], "inapplicable");
}

#[test]
fn infinite_constant_blocks_simulation() {
    let o = mlsi(&[
        "concentration", "simulate", "--measure", r#"{"family":"double_exp"}"#, "--q", "3", "--samples", "1000",
    ]);
    assert_eq!(code(&o), 2);
}

fn strip_metadata(mut v: Value) -> String {
    v.as_object_mut().unwrap().remove("metadata");
    serde_json::to_string(&v).unwrap()
}

#[test]
fn reports_are_deterministic_apart_from_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let runs: Vec<String> = (0..2)
        .map(|i| {
            let p = dir.path().join(format!("run{i}.json"));
            let o = mlsi(&[
                "oracle", "mlsi", "--measure", r#"{"family":"gaussian"}"#, "--q", "2", "--samples", "40",
                "--seed", "9", "--json", p.to_str().unwrap(),
            ]);
            assert_eq!(code(&o), 0);
            let v = read_json(&p);
            assert!(v["metadata"]["timestamp"].is_string());
            strip_metadata(v)
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
}

#[test]
fn csv_curve_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("bound.csv");
    let json = dir.path().join("bound.json");
    let o = mlsi(&[
        "concentration", "bound", "--q", "3", "--kappa", "2", "--grid-size", "10",
        "--csv", csv.to_str().unwrap(), "--json", json.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("r,bound"));
    assert_eq!(lines.count(), 11);
    assert_eq!(read_json(&json)["kind"], "concentration_bound");
}

#[test]
fn thread_cap_is_validated() {
    let run = |val: &str| {
        Command::new(env!("CARGO_BIN_EXE_mlsi"))
            .env("MLSI_THREADS", val)
            .args(["poincare", "--measure", r#"{"family":"gaussian"}"#])
            .output()
            .unwrap()
    };
    let one = run("1");
    assert_eq!(code(&one), 0);
    assert_eq!(stdout_json(&one)["metadata"]["threads"], 1);
    assert_eq!(code(&run("0")), 1);
}

#[test]
fn bench_writes_summary_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bench");
    let o = mlsi(&["bench", "--quick", "--only", "3", "--out-dir", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stdout).contains("[PASS]  3"));
    let summary = fs::read_to_string(out.join("summary.csv")).unwrap();
    let row = |m: &str, i: &str| {
        summary
            .lines()
            .find(|l| l.starts_with(&format!("{m},{i},")))
            .unwrap_or_else(|| panic!("no row for {m} {i}"))
            .to_string()
    };
    let finite: Vec<String> = row("power_law(p=1.5)", "H_3").split(',').map(String::from).collect();
    assert_eq!(finite[2], "true");
    let (lo, hi): (f64, f64) = (finite[3].parse().unwrap(), finite[4].parse().unwrap());
    assert!(lo > 0.0 && lo < hi && hi.is_finite());
    assert!(row("power_law(p=1.2)", "H_2").contains(",false,"));
    assert_eq!(read_json(&out.join("report.json"))["kind"], "bench");
}
