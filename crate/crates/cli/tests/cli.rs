use std::fs;
use std::process::{Command, Output};

fn pexc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pexc")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8")
}

const GL2_2: &str = r#"{
  "label": "GL2(2)",
  "field": {"p": 2, "degree": 1},
  "dim": 2,
  "generators": [[1, 1, 0, 1], [0, 1, 1, 0]]
}"#;

#[test]
fn natural_gl2_2_is_exceptional() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gl2.json");
    fs::write(&path, GL2_2).unwrap();
    let out = pexc(&["pexc", "--group", path.to_str().unwrap(), "--p", "2"]);
    assert_eq!(code(&out), 0);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["verdict"]["status"], "P_EXCEPTIONAL");
    assert_eq!(report["orbit_sizes"]["3"], 1);
    assert_eq!(report["transitive"], true);
    assert!(report.get("elapsed_ms").is_none());
}

#[test]
fn deleted_a5_has_an_even_orbit() {
    let out = pexc(&["pexc", "--builtin", "deleted:A5:2", "--p", "2"]);
    assert_eq!(code(&out), 1);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["verdict"]["status"], "BAD_ORBIT");
    assert_eq!(report["verdict"]["witness"]["size"], 10);
}

#[test]
fn c4_pair_builtin() {
    let out = pexc(&["orbits", "--builtin", "c4_pair:4", "--p", "2"]);
    assert_eq!(code(&out), 0);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["orbit_sizes"], serde_json::json!({"1": 1, "15": 2, "75": 3}));
}

#[test]
fn catalog_verify_single_entry() {
    let out = pexc(&["catalog", "verify", "--name", "M11_GL5_3"]);
    assert_eq!(code(&out), 0);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["passed"], true);
    assert_eq!(report["orbit_sizes"], serde_json::json!({"1": 1, "22": 1, "220": 1}));
}

#[test]
fn unknown_entry_is_a_usage_error() {
    let out = pexc(&["catalog", "verify", "--name", "unknown"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown"));
}

#[test]
fn missing_arguments_are_usage_errors() {
    assert_eq!(code(&pexc(&["pexc", "--p", "2"])), 2);
    assert_eq!(code(&pexc(&["catalog", "verify"])), 2);
    assert_eq!(code(&pexc(&["jordan", "--a", "2", "--b", "4", "--p", "3"])), 2);
}

#[test]
fn malformed_group_files_report_positions() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, "{\n  \"field\": {\"p\": 2, \"degree\": 1},\n  \"dim\": [\n}").unwrap();
    let out = pexc(&["orbits", "--group", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3, column 9"));
    fs::write(&path, r#"{"field": {"p": 2, "degree": 1}, "dim": 2, "generators": [[1, 1, 1, 1]]}"#).unwrap();
    let out = pexc(&["orbits", "--group", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("generator 0"));
}

#[test]
fn space_cap_names_the_flag() {
    let out = pexc(&["orbits", "--builtin", "c4_pair:8", "--max-vectors", "100"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("--max-vectors"));
}

#[test]
fn out_flag_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = pexc(&["jordan", "--a", "3", "--b", "5", "--p", "7", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["blocks"], serde_json::json!([7, 5, 3]));
}

#[test]
fn concealed_and_binom() {
    let d10 = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/data/perm/D10.json");
    let out = pexc(&["concealed", "--perm", d10, "--p", "2"]);
    assert_eq!(code(&out), 0);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["concealed"], true);
    let out = pexc(&["concealed", "--perm", "S5", "--p", "2"]);
    assert_eq!(code(&out), 1);
    let out = pexc(&["binom", "--n", "8", "--k", "4", "--p", "3"]);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["valuation"], 0);
}

#[test]
fn timing_is_opt_in_and_reports_are_deterministic() {
    let a = pexc(&["orbits", "--builtin", "X312_D12_GL3_4", "--seed", "3"]);
    let b = pexc(&["orbits", "--builtin", "X312_D12_GL3_4", "--seed", "3"]);
    assert_eq!(a.stdout, b.stdout);
    let timed = pexc(&["orbits", "--builtin", "X312_D12_GL3_4", "--timing"]);
    let report: serde_json::Value = serde_json::from_str(&stdout(&timed)).unwrap();
    assert!(report["elapsed_ms"].is_u64());
}

#[test]
fn table_output() {
    let out = pexc(&["--format", "table", "catalog", "list"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).lines().any(|l| l.starts_with("M23_GL11_2 ")));
}
