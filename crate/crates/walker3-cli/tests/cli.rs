//! End-to-end tests of the binary: exit codes, report stability, file
//! handling.

use std::io::Write;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_walker3"))
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn write_temp(content: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(content.as_bytes()).unwrap();
    f
}

#[test]
fn list_names_all_examples() {
    let o = run(&["list", "--format", "text"]);
    assert_eq!(code(&o), 0);
    let names: Vec<&str> = std::str::from_utf8(&o.stdout).unwrap().lines().collect();
    assert_eq!(names.len(), 8);
    assert!(names.contains(&"ex-E1") && names.contains(&"ex-fin"));
}

#[test]
fn check_passing_fixture() {
    let o = run(&["check", &fixture("ex-E1.json"), "--samples", "16"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["checks"]["ry"]["overall"], "pass");
    assert_eq!(v["checks"]["ry"]["components"]["33"]["kind"], "proved_zero");
}

#[test]
fn check_failing_fixture() {
    // the final worked example keeps genuinely nonzero residual
    // components; a plain check on it fails by design
    let o = run(&["check", &fixture("ex-fin.json"), "--quiet"]);
    assert_eq!(code(&o), 1);
    assert!(o.stdout.is_empty());
}

#[test]
fn check_missing_file() {
    let o = run(&["check", "definitely-missing.json"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn schema_violations_are_input_errors() {
    let bad = write_temp(r#"{"name":"x","epsilon":1,"beta":1,"lambda":0,"mu":0,"f":"0",
        "field":{"vector":["0","0","0"]},"checks":["ry"],"surprise":true}"#);
    let o = run(&["check", bad.path().to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    let bad = write_temp(r#"{"name":"x","epsilon":3,"beta":1,"lambda":0,"mu":0,"f":"0",
        "field":{"vector":["0","0","0"]},"checks":["ry"]}"#);
    assert_eq!(code(&run(&["check", bad.path().to_str().unwrap()])), 2);
    let bad = write_temp(r#"{"name":"x","epsilon":1,"beta":1,"lambda":0,"mu":0,"f":"x +",
        "field":{"vector":["0","0","0"]},"checks":["ry"]}"#);
    assert_eq!(code(&run(&["check", bad.path().to_str().unwrap()])), 2);
}

#[test]
fn free_mu_rejected_for_residual_checks_only() {
    let tpl = |checks: &str| {
        format!(
            r#"{{"name":"x","epsilon":1,"beta":1,"lambda":0,"mu":"free","f":"0",
               "field":{{"vector":["0","0","0"]}},"checks":[{checks}]}}"#
        )
    };
    let f = write_temp(&tpl("\"ry\""));
    assert_eq!(code(&run(&["check", f.path().to_str().unwrap()])), 2);
    let f = write_temp(&tpl("\"divergence\""));
    assert_eq!(code(&run(&["check", f.path().to_str().unwrap()])), 0);
}

#[test]
fn conditional_only_exit_code() {
    // an unspecified metric function leaves the residual conditional
    let f = write_temp(
        r#"{"name":"cond","epsilon":1,"beta":1,"lambda":0,"mu":0,"f":"h(x,y,z)",
           "field":{"vector":["0","0","0"]},"checks":["ry"]}"#,
    );
    let o = run(&["check", f.path().to_str().unwrap()]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["checks"]["ry"]["overall"], "conditional");
}

#[test]
fn usage_errors() {
    assert_eq!(code(&run(&["frobnicate"])), 64);
    assert_eq!(code(&run(&[])), 64);
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn reproduce_all_matches_and_is_deterministic() {
    let a = run(&["reproduce", "all"]);
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
    let b = run(&["reproduce", "all"]);
    assert_eq!(a.stdout, b.stdout, "reports differ between runs");
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["matched"], true);
    assert_eq!(v["entries"].as_array().unwrap().len(), 8);
}

#[test]
fn reproduce_single_and_unknown() {
    assert_eq!(code(&run(&["reproduce", "ex-C2", "--quiet"])), 0);
    assert_eq!(code(&run(&["reproduce", "ex-unknown"])), 2);
}

#[test]
fn seed_override_lands_in_report() {
    let o = run(&["check", &fixture("ex-E1.json"), "--seed", "7"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["sampling"]["seed"], 7);
}

#[test]
fn build_roundtrips_into_check() {
    let inputs = write_temp(
        r#"{"params":{"beta":1,"lambda":1,"mu":2,"epsilon":1},
            "inputs":{"a":"0","b":"y","c":"0","v":"0","xi":"x"}}"#,
    );
    let out = tempfile::NamedTempFile::new().unwrap();
    let o = run(&[
        "build",
        "t2",
        inputs.path().to_str().unwrap(),
        "--out",
        out.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.path()).unwrap()).unwrap();
    assert_eq!(doc["scenario"]["f"], "x^2");
    assert_eq!(doc["constraints"]["13"], "0");
    let o = run(&["check", out.path().to_str().unwrap(), "--quiet"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn build_rejects_unknown_family_and_bad_case() {
    let inputs = write_temp(r#"{"params":{"beta":0,"lambda":0,"mu":0,"epsilon":1},"inputs":{}}"#);
    assert_eq!(code(&run(&["build", "nope", inputs.path().to_str().unwrap()])), 2);
    assert_eq!(code(&run(&["build", "tt", inputs.path().to_str().unwrap()])), 2);
}

#[test]
fn fixtures_match_catalog() {
    // the shipped fixtures are exactly the catalog scenarios
    for entry in walker3::families::catalog() {
        let path = fixture(&format!("{}.json", entry.name()));
        let text = std::fs::read_to_string(&path).unwrap();
        let expected = serde_json::to_value(walker3_cli::scenario_io::from_scenario(
            &entry.scenario,
        ))
        .unwrap();
        let on_disk: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(on_disk, expected, "{path} drifted from the catalog");
    }
}
