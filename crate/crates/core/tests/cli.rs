use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn wsegre(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wsegre")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let o = wsegre(&full);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn write_tmp(name: &str, text: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn segre_examples() {
    let o = wsegre(&[
        "segre",
        "--dim",
        "1",
        "--summand",
        "rank=1,weight=1,segre=1,-2",
        "--summand",
        "rank=1,weight=2,segre=1,-2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "1/2 - 3/2·H");

    let o = wsegre(&["segre", "--dim", "2", "--summand", "rank=2,weight=1,segre=1,-3,6"]);
    assert_eq!(stdout(&o).trim(), "1 - 3·H + 6·H^2");

    let v = json(&["segre", "--dim", "2", "--summand", "rank=2,weight=1,chern=1,3,3"]);
    let coeffs: Vec<(String, String)> = v["result"]["coeffs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| (c["num"].as_str().unwrap().to_string(), c["den"].as_str().unwrap().to_string()))
        .collect();
    let expected = [("1", "1"), ("-3", "1"), ("6", "1")].map(|(a, b)| (a.to_string(), b.to_string()));
    assert_eq!(coeffs, expected);
}

#[test]
fn malformed_summand_is_a_usage_error() {
    for bad in
        ["rank=1,weight=0,segre=1", "rank=1,segre=1,-2", "weight=1,rank=1,segre=2,1", "rank=1,weight=1,segre=1,x"]
    {
        let o = wsegre(&["segre", "--dim", "1", "--summand", bad]);
        assert_eq!(o.status.code(), Some(1), "{bad}");
        assert!(!stderr(&o).is_empty());
    }
}

#[test]
fn bound_example_and_json_shape() {
    let o = wsegre(&["bound", "--n", "2", "--k", "1", "--kd-n", "9", "--neg-dn", "-1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("  5  "), "{}", stdout(&o));

    let v = json(&["bound", "--n", "2", "--k", "1", "--kd-n", "9", "--neg-dn", "-1"]);
    assert_eq!(v["schema"], "wsegre/1");
    assert_eq!(v["command"], "bound");
    assert_eq!(v["inputs"]["kd_n"]["num"], "9");
    assert_eq!(v["inputs"]["neg_dn"]["num"], "-1");
    let value = &v["rows"][0]["value"];
    assert_eq!((value["num"].as_str(), value["den"].as_str()), (Some("5"), Some("1")));
    assert_eq!(value["approx"].as_f64(), Some(5.0));
}

#[test]
fn geometry_file_matches_flags_byte_for_byte() {
    let path = write_tmp("ball.geom", "# test surface\nn = 2\nkd_n = 9/1\nneg_dn = -1\ncomponents = 1\n");
    let path = path.to_str().unwrap();
    let from_flags = wsegre(&[
        "--format", "json", "bound", "--n", "2", "--kd-n", "9/1", "--neg-dn", "-1", "--k", "1", "--k-max", "4",
    ]);
    let from_file = wsegre(&["--format", "json", "bound", "--geometry", path, "--k", "1", "--k-max", "4"]);
    assert_eq!(from_flags.status.code(), Some(0));
    assert_eq!(from_flags.stdout, from_file.stdout);

    let overridden = wsegre(&["--format", "json", "bound", "--geometry", path, "--neg-dn", "0", "--k", "1"]);
    let v: Value = serde_json::from_slice(&overridden.stdout).unwrap();
    assert_eq!(v["inputs"]["neg_dn"]["num"], "0");

    let bad = write_tmp("bad.geom", "n = 2\ndegree = 3\n");
    let o = wsegre(&["bound", "--geometry", bad.to_str().unwrap(), "--k", "1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn warnings_go_to_stderr_and_json() {
    let o = wsegre(&["--format", "json", "bound", "--n", "2", "--k", "1", "--kd-n", "9", "--neg-dn", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("warning"));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["result"]["warnings"].as_array().unwrap().len(), 1);
}

#[test]
fn csv_has_header_and_one_row_per_point() {
    let o = wsegre(&["--format", "csv", "ranks", "--n", "1", "--k", "2", "--m", "0", "--m-max", "4"]);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,k,m,num,den,approx");
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[5], "1,2,4,3,1,3");

    let o = wsegre(&["--format", "csv", "volume", "--n", "2", "--kd-n", "9", "--k", "1", "--k-max", "2"]);
    assert_eq!(stdout(&o), "n,k,num,den,approx\n2,1,6,1,6\n2,2,3,1,3\n");
}

#[test]
fn ranks_and_boundary() {
    let v = json(&["ranks", "--n", "1", "--k", "2", "--m", "4"]);
    assert_eq!(v["rows"][0]["value"]["num"], "3");
    let v = json(&["boundary", "--n", "2", "--neg-dn", "-1", "--components", "1", "--k", "1", "--m", "2"]);
    assert_eq!(v["rows"][0]["value"]["num"], "3");
    assert_eq!(v["rows"][0]["m"], 2);
}

#[test]
fn threshold_commands() {
    let o = wsegre(&["threshold", "--n", "6"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("41534"));

    let o = wsegre(&["threshold", "--n", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("n >= 4"));

    let o = wsegre(&["threshold", "--n", "4"]);
    assert_eq!(o.status.code(), Some(1));

    let v = json(&["threshold", "--n", "4", "--neg-dn", "-1/49"]);
    assert!((v["result"]["log_k_threshold"].as_f64().unwrap() - (1.0 - 0.577_215_664_901_532_9)).abs() < 1e-12);
    assert_eq!(v["result"]["k_min_approx"], 2);
}

#[test]
fn table1_has_footnote() {
    let o = wsegre(&["table1"]);
    let text = stdout(&o);
    assert!(text.contains("49"));
    assert!(text.contains("prints 5"));
    let v = json(&["table1"]);
    let rows = v["result"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[0]["coefficient"], "49");
    assert_eq!(rows[0]["published_coefficient"], 5);
}

#[test]
fn missing_flags_and_float_input_are_usage_errors() {
    assert_eq!(wsegre(&["bound", "--n", "2", "--k", "1", "--kd-n", "9"]).status.code(), Some(1));
    assert_eq!(wsegre(&["volume", "--n", "2", "--k", "1", "--kd-n", "1.5"]).status.code(), Some(1));
    assert_eq!(wsegre(&["volume", "--n", "2", "--kd-n", "9"]).status.code(), Some(1));
    assert_eq!(wsegre(&["--version"]).status.code(), Some(0));
}

#[test]
fn verify_exit_codes() {
    let o = wsegre(&["verify", "--suite", "identities"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).lines().all(|l| l.starts_with("PASS")));

    let o = wsegre(&["verify", "--suite", "identities", "--mutate", "whitney-prefactor"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("FAILED"));

    let a = wsegre(&["--format", "json", "verify", "--suite", "identities"]);
    let b = wsegre(&["--format", "json", "verify", "--suite", "identities"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_fast_runs_every_suite() {
    let start = std::time::Instant::now();
    let o = wsegre(&["verify", "--fast"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(start.elapsed().as_secs() < 60);
    assert!(stdout(&o).lines().count() > 10);
}
