use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dephrasure"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Data rows of a CSV output, skipping the provenance line and header.
fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

#[test]
fn regions_start_at_one_half() {
    let out = run(&["regions", "--p-range", "0:0.5:11"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("# {"));
    let (header, rows) = csv_rows(&text);
    assert_eq!(header, ["p", "g", "j", "k"]);
    assert_eq!(rows.len(), 11);
    assert_eq!(rows[0], vec![0.0, 0.5, 0.5, 0.5]);
    assert_eq!(rows[10], vec![0.5, 0.0, 0.0, 0.0]);
}

#[test]
fn sweep_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let paths = [dir.path().join("a.csv"), dir.path().join("b.csv")];
    for path in &paths {
        let out = run(&[
            "sweep",
            "--quantity",
            "separation",
            "--p-range",
            "0.05:0.2:7",
            "--q-range",
            "0:0.5:9",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let read = |p: &Path| std::fs::read_to_string(p).unwrap();
    let a = read(&paths[0]);
    let b = read(&paths[1]).replace("b.csv", "a.csv");
    assert_eq!(a, b);
    let (header, rows) = csv_rows(&a);
    assert_eq!(header, ["p", "q", "private_lb", "single_ci"]);
    assert_eq!(rows.len(), 63);
    assert!(
        rows.windows(2).all(|w| (w[0][0], w[0][1]) < (w[1][0], w[1][1])),
        "p-major order"
    );
}

#[test]
fn zero_contour_follows_g() {
    let steps = 101;
    let out = run(&[
        "sweep",
        "--quantity",
        "regions",
        "--p-range",
        "0.05:0.45:5",
        "--q-range",
        "0:0.5:101",
    ]);
    assert!(out.status.success());
    let (_, rows) = csv_rows(&stdout(&out));
    for column in rows.chunks(steps) {
        let g = column[0][3];
        let first = column.iter().find(|r| r[2] <= 0.0).unwrap();
        assert!((first[1] - g).abs() <= 0.5 / (steps - 1) as f64, "{first:?}");
    }
}

#[test]
fn diagonal_rates_near_threshold() {
    let out = run(&["diagonal", "--p-range", "0.118:0.1202:5"]);
    assert!(out.status.success());
    let (header, rows) = csv_rows(&stdout(&out));
    assert_eq!(header, ["p", "q", "rep1", "rep2", "rep3", "rep4", "rep5"]);
    for row in &rows {
        assert!(row[2] < 1e-5);
        assert!(row[3..].iter().all(|&r| r > row[2]), "{row:?}");
    }

    let out = run(&[
        "diagonal",
        "--p-range",
        "0.1225:0.13:4",
        "--codes",
        "single,rep2,rep5,private",
    ]);
    let (_, rows) = csv_rows(&stdout(&out));
    assert!(rows.iter().flat_map(|r| &r[2..]).all(|&v| v <= 1e-6));
}

#[test]
fn private_bound_separates_on_diagonal() {
    let out = run(&[
        "diagonal",
        "--p-range",
        "0.08:0.12:9",
        "--codes",
        "private,single",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let json: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["provenance"]["command"], "diagonal");
    let rows = json["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 9);
    for row in rows {
        assert!(
            row["private"].as_f64().unwrap() > row["single"].as_f64().unwrap(),
            "{row}"
        );
    }
}

#[test]
fn verify_suites_pass() {
    for suite in ["oracle", "thresholds", "compci", "antideg"] {
        let out = run(&["verify", "--suite", suite]);
        assert_eq!(out.status.code(), Some(0), "{suite}: {}", stdout(&out));
        let json: Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(json["report"]["passed"], true);
        assert!(!json["report"]["checks"].as_array().unwrap().is_empty());
    }
}

#[test]
fn verify_failure_exits_one() {
    let out = run(&["verify", "--suite", "oracle", "--tol", "0"]);
    assert_eq!(out.status.code(), Some(1));
    let json: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["report"]["passed"], false);
}

#[test]
fn optimize_is_deterministic_and_beats_repetition() {
    let args = ["optimize", "--p", "0.11", "--q", "0.33", "--n", "2", "--seed", "5"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let full: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(full["amplitudes"].as_array().unwrap().len(), 16);
    assert_eq!(full["config"]["seed"], 5);
    let rep = run(&[
        "optimize",
        "--p",
        "0.11",
        "--q",
        "0.33",
        "--n",
        "2",
        "--kind",
        "repetition",
    ]);
    let rep: Value = serde_json::from_slice(&rep.stdout).unwrap();
    assert!(full["value"].as_f64().unwrap() >= rep["value"].as_f64().unwrap() - 1e-6);
}

#[test]
fn single_use_optimum_is_single_letter() {
    let opt = run(&["optimize", "--p", "0.2", "--q", "0.1", "--n", "1"]);
    let opt: Value = serde_json::from_slice(&opt.stdout).unwrap();
    let sweep = run(&[
        "sweep",
        "--quantity",
        "single-ci",
        "--p-range",
        "0.2:0.3:2",
        "--q-range",
        "0.1:0.2:2",
    ]);
    let (_, rows) = csv_rows(&stdout(&sweep));
    assert!((opt["value"].as_f64().unwrap() - rows[0][2]).abs() < 1e-6);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["sweep", "--quantity", "nope"][..],
        &["sweep", "--quantity", "single-ci", "--p-range", "0:1:1"],
        &[
            "sweep",
            "--quantity",
            "single-ci",
            "--p-range",
            "0:0.5:3",
            "--diagonal-slope",
            "3",
        ],
        &["regions", "--p-range", "0:0.8:3"],
        &["diagonal", "--codes", "rep9"],
        &["optimize", "--p", "0.1", "--q", "0.1", "--n", "5"],
        &["regions", "--out", "/nonexistent/dir/out.csv"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}
