//! Tests of the `e8lie` binary.

use std::process::Command;

fn e8lie(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_e8lie")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn schema() -> serde_json::Value {
    serde_json::from_str(include_str!("../schema/verification-report.v1.json")).unwrap()
}

/// Checks required keys and enumerations declared in the schema.
fn conforms(report: &serde_json::Value) {
    let s = schema();
    for k in s["required"].as_array().unwrap() {
        assert!(report.get(k.as_str().unwrap()).is_some(), "missing {k}");
    }
    let keys: Vec<&String> = report.as_object().unwrap().keys().collect();
    assert!(keys.iter().all(|k| s["properties"].get(k.as_str()).is_some()), "unexpected key in {keys:?}");
    let item = &s["properties"]["checks"]["items"];
    let sources = item["properties"]["expected"]["properties"]["source"]["enum"].as_array().unwrap();
    for c in report["checks"].as_array().unwrap() {
        for k in item["required"].as_array().unwrap() {
            assert!(c.get(k.as_str().unwrap()).is_some());
        }
        assert!(sources.contains(&c["expected"]["source"]));
        let n = c["criterion"].as_u64().unwrap();
        assert!((1..=9).contains(&n));
    }
}

#[test]
fn verify_a5a1_json() {
    let (code, out, _) = e8lie(&["verify", "a5a1", "--format", "json"]);
    assert_eq!(code, 0, "{out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    conforms(&v);
    let lambda = v["checks"].as_array().unwrap().iter().find(|c| c["check_id"] == "lambda").unwrap();
    assert_eq!(lambda["computed"], "-1/6");
    assert_eq!(v["totals"]["failed"], 0);
}

#[test]
fn verify_d5a1a2_reports_its_failures() {
    let (code, out, _) = e8lie(&["verify", "d5a1a2"]);
    assert_eq!(code, 1);
    assert!(out.contains("FAIL [6] lambda: computed -3/2 expected 3/2"));
    assert!(out.contains("PASS [7] lambda.R-unit"));
}

#[test]
fn verify_writes_to_a_file() {
    let dir = tempdir();
    let path = dir.join("a5a1.json");
    let (code, out, _) = e8lie(&["verify", "a5a1", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    conforms(&v);
}

#[test]
fn usage_errors() {
    assert_eq!(e8lie(&["verify", "bogus"]).0, 64);
    assert_eq!(e8lie(&["verify", "a5a1", "--format", "yaml"]).0, 64);
    assert_eq!(e8lie(&["table", "check", "partial"]).0, 64);
    assert_eq!(e8lie(&["--help"]).0, 0);
}

fn tempdir() -> std::path::PathBuf {
    let d = std::env::temp_dir().join(format!("e8lie-cli-{}-{:?}", std::process::id(), std::thread::current().id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

#[test]
fn table_export_import_round_trip() {
    let dir = tempdir();
    let path = dir.join("t.e8");
    let p = path.to_str().unwrap();
    assert_eq!(e8lie(&["table", "export", p]).0, 0);
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("E8 v1 extraspecial-height-desclex:plus\n"));
    let (code, out, _) = e8lie(&["table", "import", p]);
    assert_eq!(code, 0);
    assert!(out.contains("anchors: 24/24"));
    std::fs::write(&path, text.replacen("N 1 0 0 0 0 0 0 0", "N 1 0 0 0 0 0 0 1", 1)).unwrap();
    let (code, _, err) = e8lie(&["table", "import", p]);
    assert_eq!(code, 1);
    assert!(err.contains("error"));
}

#[test]
fn sampled_check_is_deterministic() {
    let a = e8lie(&["table", "check", "sampled", "--seed", "42", "--n", "2000"]);
    let b = e8lie(&["table", "check", "sampled", "--seed", "42", "--n", "2000"]);
    assert_eq!(a.0, 0);
    assert_eq!(a.1, b.1);
    assert!(a.1.contains("jacobi failures 0 invariance failures 0"));
}

#[test]
fn full_check_passes() {
    let (code, out, _) = e8lie(&["table", "check", "full"]);
    assert_eq!(code, 0);
    assert!(out.contains("jacobi: "));
    assert!(out.contains("invariance: 15252992 cases, 0 failures"));
}

#[test]
fn selftest_prints_nine_criteria() {
    let (_, out, _) = e8lie(&["selftest"]);
    let lines: Vec<&str> = out.lines().filter(|l| l.starts_with("PASS ") || l.starts_with("FAIL ")).collect();
    assert_eq!(lines.len(), 9);
    assert!(out.contains("A5+A1: lambda = -1/6, norm difference = -5/3"));
}

#[test]
fn selftest_with_conflicting_fixture_exits_2() {
    let dir = tempdir();
    let path = dir.join("bad.json");
    let mut v: serde_json::Value = serde_json::from_str(include_str!("../data/anchors.json")).unwrap();
    let mut dup = v["anchors"][0].clone();
    dup["id"] = "dup".into();
    dup["value"] = (-dup["value"].as_i64().unwrap()).into();
    v["anchors"].as_array_mut().unwrap().push(dup);
    std::fs::write(&path, v.to_string()).unwrap();
    let (code, _, err) = e8lie(&["--anchors", path.to_str().unwrap(), "selftest"]);
    assert_eq!(code, 2);
    assert!(err.contains("dup"));
    std::fs::write(&path, "{ not json").unwrap();
    assert_eq!(e8lie(&["--anchors", path.to_str().unwrap(), "selftest"]).0, 2);
}
