use std::process::{Command, Output};

fn wgalab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wgalab")).args(args).output().unwrap()
}

#[test]
fn exit_code_reflects_errors() {
    let ok = wgalab(&["classify", "--weight", "exp:0.7"]);
    assert!(ok.status.success());
    let report: serde_json::Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(report["results"]["verdict"], "not_regular");

    let bad = wgalab(&["classify", "--group", "ZxQ"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("position 2"));

    let missing = wgalab(&["radius"]);
    assert!(!missing.status.success());
    assert!(String::from_utf8_lossy(&missing.stderr).contains("--element"));
}

#[test]
fn radius_of_identity_is_one() {
    let out = wgalab(&["radius", "--weight", "poly:1", "--element", "[[[0], 1, 0]]"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["results"]["normlimit"]["estimate"], 1.0);
    assert_eq!(report["results"]["oracle"]["value"], 1.0);
}

#[test]
fn output_file_needs_force_to_overwrite() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ex.csv");
    let p = path.to_str().unwrap();
    assert!(wgalab(&["example-paper", "--format", "csv", "--out", p]).status.success());
    let first = std::fs::read(&path).unwrap();
    let again = wgalab(&["example-paper", "--format", "csv", "--out", p]);
    assert!(!again.status.success());
    assert!(String::from_utf8_lossy(&again.stderr).contains("--force"));
    assert!(wgalab(&["example-paper", "--format", "csv", "--out", p, "--force"]).status.success());
    assert_eq!(std::fs::read(&path).unwrap(), first);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"command": "classify", "weight": "poly:2.5"}"#).unwrap();
    let out = wgalab(&["--config", cfg.to_str().unwrap()]);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["results"]["verdict"], "regular_nonquasianalytic");

    let out = wgalab(&["--config", cfg.to_str().unwrap(), "--weight", "exp:ln2"]);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["results"]["verdict"], "not_regular");

    std::fs::write(&cfg, r#"{"command": "classify", "wieght": "poly:1"}"#).unwrap();
    assert!(!wgalab(&["--config", cfg.to_str().unwrap()]).status.success());
}

#[test]
fn separate_and_bochner_commands() {
    let out = wgalab(&[
        "separate",
        "--weight",
        "poly:1",
        "--exclude",
        r#"[{"free": [{"re": 1, "im": 0}]}, {"free": [{"re": 0, "im": 1}]}]"#,
        "--target",
        r#"{"free": [{"re": -1, "im": 0}]}"#,
    ]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report["results"]["max_abs_on_excluded"].as_f64().unwrap() < 1e-12);

    let refused = wgalab(&["separate", "--weight", "exp:0.5", "--target", r#"{"free": [{"angle": 0}]}"#]);
    assert!(!refused.status.success());

    let out = wgalab(&["bochner", "--measure", r#"[{"character": {"free": [{"re": 1, "im": 0}]}, "mass": -1}]"#]);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["results"]["psd"], false);
}
