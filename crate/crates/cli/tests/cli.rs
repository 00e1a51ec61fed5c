//! End-to-end tests against the compiled binary: exit codes, report shape,
//! determinism across thread counts, and config-file behavior.

use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_prym-verify"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn without_timing(mut v: Value) -> Value {
    v.as_object_mut().expect("report object").remove("timing");
    v
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).expect("test file writes");
}

#[test]
fn traces_field_sweep_has_five_passing_rows() {
    let out = run(&["verify-traces", "--p", "7", "--lambda", "all"]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    let rows = report["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    assert!(rows.iter().all(|r| r["pass"] == Value::Bool(true)));
    assert!(rows.iter().all(|r| r["id"] == "traces/additivity"));
    assert_eq!(report["summary"]["failed"], 0);
    // the human summary goes to stderr when the report goes to stdout
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("suite=traces rows=5 passed=5 failed=0"));
}

#[test]
fn single_lambda_selects_one_row() {
    let out = run(&["verify-traces", "--p", "7", "--lambda", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["rows"].as_array().unwrap().len(), 1);
    assert_eq!(report["rows"][0]["inputs"], "lambda=0003 q=0007");
}

#[test]
fn bounds_explicit_inputs_make_a_single_row() {
    let out = run(&["bounds", "--g", "1", "--degk", "1", "--h", "1", "--dimb", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    let rows = report["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["id"], "bounds/isogeny");
    assert_eq!(rows[0]["pass"], true);

    // missing one of the four flags is a configuration error
    let out = run(&["bounds", "--g", "1", "--degk", "1", "--h", "1"]);
    assert_eq!(out.status.code(), Some(2));

    // the auxiliary-prime constant appends a second row with a level tag
    let out = run(&[
        "bounds", "--g", "1", "--degk", "1", "--h", "1", "--dimb", "1", "--snowden", "2,3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    let rows = report["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    let snowden = rows.iter().find(|r| r["id"] == "bounds/snowden").unwrap();
    assert!(snowden["detail"].as_str().unwrap().contains("level=1"));
}

#[test]
fn empty_selection_is_a_config_error() {
    // 11 is not 1 mod 6, so no suite row mentions it
    let out = run(&["verify-charsums", "--p", "11"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("config error"));
}

#[test]
fn unknown_config_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    write(&conf, "# comment\nzeta = 3\n");
    let out = run(&["all", "--config", conf.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown config key"));
}

#[test]
fn config_supplies_defaults_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    write(&conf, "p = 7\nlambda = all\n");
    let from_config = run(&["verify-traces", "--config", conf.to_str().unwrap()]);
    assert_eq!(from_config.status.code(), Some(0));
    assert_eq!(stdout_json(&from_config)["rows"].as_array().unwrap().len(), 5);

    let overridden =
        run(&["verify-traces", "--config", conf.to_str().unwrap(), "--lambda", "3"]);
    assert_eq!(overridden.status.code(), Some(0));
    assert_eq!(stdout_json(&overridden)["rows"].as_array().unwrap().len(), 1);
}

#[test]
fn reports_are_identical_across_thread_counts() {
    let a = run(&["verify-ca", "--jobs", "1"]);
    let b = run(&["verify-ca", "--jobs", "8"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(b.status.code(), Some(0));
    assert_eq!(without_timing(stdout_json(&a)), without_timing(stdout_json(&b)));
}

#[test]
fn out_flag_routes_report_to_file_and_summary_to_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = run(&["verify-ca", "--a", "1", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.ends_with('\n'));
    let report: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(report["schema"], 1);
    // the --a filter keeps only the rows for that parameter value
    let rows = report["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r["inputs"].as_str().unwrap().starts_with("a=1 ")));
    assert!(String::from_utf8_lossy(&out.stdout).contains("suite=ca rows=3"));
}

#[test]
fn calibrate_persists_once_then_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    write(&conf, "# defaults\nsamples = 5\n");

    let first = run(&["calibrate", "--config", conf.to_str().unwrap()]);
    assert_eq!(first.status.code(), Some(0));
    let text = std::fs::read_to_string(&conf).unwrap();
    assert!(text.starts_with("# defaults\nsamples = 5\n"), "other lines survive");
    assert!(text.contains("trace_unit = 0"));
    assert!(text.contains("period_twist = 0"));
    assert!(text.contains("qm_twist = 0"));

    let second = run(&["calibrate", "--config", conf.to_str().unwrap()]);
    assert_eq!(second.status.code(), Some(0));
    let report = stdout_json(&second);
    let row = report["rows"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["id"] == "calibrate/persisted")
        .expect("rerun re-verifies the stored values");
    assert_eq!(row["pass"], true);
    assert!(row["detail"].as_str().unwrap().starts_with("stored="));
    // the file is unchanged by the verifying rerun
    assert_eq!(std::fs::read_to_string(&conf).unwrap(), text);

    // a tampered stored value is a failing check, not a silent rewrite
    write(&conf, &text.replace("trace_unit = 0", "trace_unit = 3"));
    let tampered = run(&["calibrate", "--config", conf.to_str().unwrap()]);
    assert_eq!(tampered.status.code(), Some(1));
    assert!(std::fs::read_to_string(&conf).unwrap().contains("trace_unit = 3"));
}

#[test]
fn dickson_classifies_generators_from_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let gens = dir.path().join("sl2.json");
    write(&gens, "[[1,1,0,1],[0,-1,1,0]]");
    let out = run(&["dickson", "--q", "25", "--gens", gens.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["rows"][0]["id"], "dickson/classify");
    assert!(report["rows"][0]["detail"].as_str().unwrap().contains("contains-SL2(5)"));

    // a singular generator is bad input, not a failing check
    write(&gens, "[[1,1,0,0]]");
    let out = run(&["dickson", "--q", "5", "--gens", gens.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["dickson", "--gens", gens.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "the ring must be named");
}

#[test]
fn faltings_serre_runs_an_instance_file() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("instance.json");
    write(
        &spec,
        r#"{
  "d": 2,
  "generator_pairs": [
    [[1,1,0,1], [1,1,0,1]],
    [[0,-1,1,0], [0,-1,1,0]]
  ],
  "frob_words": [[1], [2], [1,2], [2,1,1]]
}"#,
    );
    let out = run(&["faltings-serre", "--ring", "F5", "--spec", spec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    let ids: Vec<&str> =
        report["rows"].as_array().unwrap().iter().map(|r| r["id"].as_str().unwrap()).collect();
    assert!(ids.contains(&"faltings-serre/span"));
    assert!(ids.contains(&"faltings-serre/trace-conclusion"));
    assert_eq!(report["summary"]["failed"], 0);

    // a word letter outside the generator list is bad input
    write(&spec, r#"{"generator_pairs": [[[1,1,0,1],[1,1,0,1]]], "frob_words": [[5]]}"#);
    let out = run(&["faltings-serre", "--ring", "F5", "--spec", spec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}
