//! End-to-end runs of the `groupcut` binary: outputs, files and exit codes.

use std::io::Write;
use std::process::{Command, Output, Stdio};

use groupcut::finite::{gom, md2};
use groupcut::rational::rat;
use groupcut::torus::{gmi, identity, torus_md2};

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_groupcut"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(v: &impl serde::Serialize) -> String {
    serde_json::to_string(v).unwrap()
}

#[test]
fn check_finite_and_circle() {
    let o = run(&["check"], &json(&gom(5, 2).unwrap()));
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["is_minimal"], true);

    let bad = r#"{"q": 5, "b": 4, "values": ["0", "1", "1", "1", "1"]}"#;
    let o = run(&["check", "-"], bad);
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).contains("symmetry") || stdout(&o).contains("Symmetry"));

    let o = run(&["check"], &json(&torus_md2(&rat(1, 3)).unwrap()));
    assert_eq!(code(&o), 0);
}

#[test]
fn check_csv_lists_violations() {
    let bad = r#"{"q": 3, "b": 2, "values": ["0", "1", "1"]}"#;
    let o = run(&["--format", "csv", "check"], bad);
    assert_eq!(code(&o), 2);
    let out = stdout(&o);
    assert!(out.starts_with("kind,witness,amount"));
    assert!(out.lines().count() > 1);
}

#[test]
fn input_errors_exit_3() {
    assert_eq!(code(&run(&["check"], "not json")), 3);
    assert_eq!(code(&run(&["check"], r#"{"q": 5}"#)), 3);
    assert_eq!(code(&run(&["check", "/no/such/file.json"], "")), 3);
    assert_eq!(code(&run(&["frobnicate"], "")), 3);
    assert_eq!(code(&run(&["--tolerance", "-1", "check"], &json(&gom(5, 2).unwrap()))), 3);
    let negative = r#"{"q": 3, "b": 1, "values": ["0", "-1", "1"]}"#;
    assert_eq!(code(&run(&["check"], negative)), 3);
    assert_eq!(code(&run(&["--help"], "")), 0);
}

#[test]
fn rearrange_outputs() {
    let o = run(&["rearrange"], &json(&gom(5, 2).unwrap()));
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["b"], 4);
    assert_eq!(v["values"], serde_json::json!(["0", "1/3", "1/2", "2/3", "1"]));

    let o = run(&["rearrange"], &json(&gmi(&rat(1, 3)).unwrap()));
    assert_eq!(code(&o), 0);
    let h: groupcut::torus::PwlTorusFunction = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(h, identity());

    let o = run(&["rearrange", "--tilde"], &json(&torus_md2(&rat(2, 5)).unwrap()));
    assert_eq!(code(&o), 0);

    let o = run(&["--format", "csv", "rearrange"], &json(&md2(5, 1).unwrap()));
    assert_eq!(stdout(&o).lines().next(), Some("x,value"));

    assert_eq!(code(&run(&["rearrange", "--tilde"], &json(&gom(5, 2).unwrap()))), 3);
}

#[test]
fn optimize_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("r.csv");
    let js = dir.path().join("r.json");
    let o = run(
        &[
            "optimize",
            "--primes",
            "3,5,7",
            "--csv",
            csv.to_str().unwrap(),
            "--json",
            js.to_str().unwrap(),
            "--workers",
            "2",
        ],
        "",
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 2 + 4 + 6);
    assert!(rows.iter().all(|r| r.contains(",OK")));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&js).unwrap()).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 12);
}

#[test]
fn optimize_config_and_composite() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    std::fs::write(&cfg, "primes = [9, 5]\nb_policy = \"canonical\"\n").unwrap();
    let o = run(&["--format", "csv", "optimize", "--config", cfg.to_str().unwrap()], "");
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("SKIPPED_NOT_PRIME"));
    assert!(out.lines().nth(1).unwrap().starts_with("5,4,"));

    std::fs::write(&cfg, "primes = [5]\nbogus = 1\n").unwrap();
    assert_eq!(code(&run(&["optimize", "--config", cfg.to_str().unwrap()], "")), 3);

    let o = run(&["optimize"], "");
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["rows"].as_array().unwrap().is_empty());
}

#[test]
fn integrate_circle_and_finite() {
    let o = run(&["integrate", "--p", "1,2,3"], &json(&torus_md2(&rat(1, 2)).unwrap()));
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    for l in v["lp"].as_array().unwrap() {
        assert!((l["norm"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    }
    let o = run(&["integrate"], &json(&identity()));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["integral_ln"].as_f64().unwrap() + 1.0).abs() < 1e-12);

    let o = run(&["--format", "csv", "integrate"], &json(&gom(5, 4).unwrap()));
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("volume_product,3/32"));
    assert_eq!(code(&run(&["integrate", "--p", "0"], &json(&identity()))), 3);
}

#[test]
fn experiments() {
    let o = run(&["experiment", "riemann", "--q", "5"], &json(&identity()));
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["dominates"], true);
    assert_eq!(v["product"], "3/32");
    assert_eq!(code(&run(&["experiment", "riemann", "--q", "6"], &json(&identity()))), 3);
    assert_eq!(
        code(&run(&["experiment", "riemann", "--q", "5"], &json(&gmi(&rat(1, 2)).unwrap()))),
        3
    );

    let o = run(&["--format", "csv", "experiment", "stirling", "--primes", "11,101"], "");
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().count(), 3);

    let o = run(&["experiment", "sublevel", "--levels", "4"], &json(&gmi(&rat(1, 2)).unwrap()));
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.starts_with("alpha,measure"));
    assert!(out.contains("1/2,1/2"));
}

#[test]
fn cutgen_from_row() {
    let dir = tempfile::tempdir().unwrap();
    let row = dir.path().join("row.json");
    std::fs::write(
        &row,
        r#"{"rhs": "1/2", "columns": [{"name": "x1", "frac": "1/4"}, {"name": "x2", "frac": "3/4"}]}"#,
    )
    .unwrap();
    let o = run(&["cutgen", "--row", row.to_str().unwrap()], &json(&gmi(&rat(1, 2)).unwrap()));
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let terms = v["terms"].as_array().unwrap();
    assert_eq!(terms[0]["coefficient"], "1/2");
    assert_eq!(terms[1]["coefficient"], "1/2");

    let o = run(&["cutgen", "--row", row.to_str().unwrap()], &json(&gmi(&rat(1, 3)).unwrap()));
    assert_eq!(code(&o), 3);
}
