use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use universal_sharing::bounds::{entropy_lp, format_solution, solve_float};
use universal_sharing::structures::universal_normalized;

fn unishare(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_unishare"))
        .args(args)
        .current_dir(dir)
        .env_remove("UNISHARE_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn table_rows() {
    let dir = tempfile::tempdir().unwrap();
    let o = unishare(dir.path(), &["table", "--n", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,max_f,argmax,ne_margin,sequence_bound,lower_bound");
    assert!(lines[1].starts_with("2,1,1,") && lines[1].ends_with(",1"));
    let row4: Vec<&str> = lines[3].split(',').collect();
    assert_eq!((row4[0], row4[1], row4[5]), ("4", "11/6", "7/4"));
}

#[test]
fn table_margins_positive() {
    let dir = tempfile::tempdir().unwrap();
    let o = unishare(dir.path(), &["table", "1000", "--cap-lp", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 1000);
    for line in text.lines().skip(1) {
        let margin: f64 = line.split(',').nth(3).unwrap().parse().unwrap();
        assert!(margin > 0.0, "{line}");
    }
}

#[test]
fn build_verify_deal_reconstruct() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = unishare(d, &["build", "--n", "3", "--out", "s3.json"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("3/2"));
    let o = unishare(d, &["verify", "--scheme", "s3.json", "--n", "3", "--brute-force"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("\"perfect\": true"));

    unishare(d, &["deal", "--scheme", "s3.json", "--secret", "10", "--seed", "42", "--out", "a.json"]);
    unishare(d, &["deal", "--scheme", "s3.json", "--secret", "10", "--seed", "42", "--out", "b.json"]);
    assert_eq!(fs::read(d.join("a.json")).unwrap(), fs::read(d.join("b.json")).unwrap());

    let o = unishare(d, &["reconstruct", "--scheme", "s3.json", "--shares", "a.json"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("\"secret\": \"10\""));

    // flip one bit of one share
    let text = fs::read_to_string(d.join("a.json")).unwrap();
    let mut t: serde_json::Value = serde_json::from_str(&text).unwrap();
    let bits = t["shares"][2]["bits"].as_str().unwrap().to_string();
    let flipped: String =
        bits.chars().enumerate().map(|(i, c)| if i == 0 { if c == '0' { '1' } else { '0' } } else { c }).collect();
    t["shares"][2]["bits"] = serde_json::Value::String(flipped);
    fs::write(d.join("bad.json"), t.to_string()).unwrap();
    let o = unishare(d, &["reconstruct", "--scheme", "s3.json", "--shares", "bad.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not consistent"));
}

#[test]
fn verify_fails_against_wrong_structure() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    unishare(d, &["build", "--n", "2", "--out", "s2.json"]);
    fs::write(d.join("pair.json"), r#"{"m": 2, "minimal_sets": [[0, 1]]}"#).unwrap();
    let o = unishare(d, &["verify", "--scheme", "s2.json", "--structure", "pair.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("\"perfect\": false"));
}

#[test]
fn bounds_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = unishare(d, &["lp", "--universal", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("\"exact\": \"3/2\""));

    let o = unishare(d, &["lower-bound", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["lower_bound"], "7/4");
    assert_eq!(report["upper_bound"], "11/6");
    assert_eq!(report["schema_version"], 1);

    let o = unishare(d, &["cert", "--sequence", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("\"certificate_bound\": \"4/3\""));

    let o = unishare(d, &["cert", "--theorem7", "5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("base-qualified"));

    fs::write(d.join("s.json"), r#"{"m": 4, "minimal_sets": [[0, 2], [1, 2, 3], [0, 1]]}"#).unwrap();
    fs::write(d.join("c.json"), r#"{"A0": [0, 1], "b": [2, 3], "C": [[0], [1]]}"#).unwrap();
    let o = unishare(d, &["cert", "--structure", "s.json", "--certificate", "c.json"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("\"certificate_bound\": \"1\""));
}

#[test]
fn lp_export_and_external_solution() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = unishare(d, &["lp", "--universal", "2", "--export", "u2.lp"]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(d.join("u2.lp")).unwrap();
    assert!(text.starts_with("\\") && text.contains("Subject To") && text.trim_end().ends_with("End"));
    let model = entropy_lp(&universal_normalized(2).unwrap()).unwrap();
    let sol = format_solution(&model, &solve_float(&model).unwrap().x);
    fs::write(d.join("u2.sol"), sol).unwrap();
    let o = unishare(d, &["lp", "--universal", "2", "--solution", "u2.sol"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("\"method\": \"external\""));
    fs::write(d.join("bad.sol"), "t 0\n").unwrap();
    let o = unishare(d, &["lp", "--universal", "2", "--solution", "bad.sol"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn exit_codes_and_out_dir() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(unishare(d, &["build", "9"]).status.code(), Some(3));
    assert_eq!(unishare(d, &["build", "3", "--cap-build", "99"]).status.code(), Some(3));
    assert_eq!(unishare(d, &["build", "3", "--cap-build", "2"]).status.code(), Some(3));
    assert_eq!(unishare(d, &["verify", "--scheme", "missing.json", "--n", "3"]).status.code(), Some(4));
    assert_eq!(unishare(d, &["table"]).status.code(), Some(2));

    let o = Command::new(env!("CARGO_BIN_EXE_unishare"))
        .args(["build", "2", "--out", "s2.json"])
        .current_dir(d)
        .env("UNISHARE_OUT_DIR", d.join("outputs"))
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(d.join("outputs/s2.json").exists());
}
