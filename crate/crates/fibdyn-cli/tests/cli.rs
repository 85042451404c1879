//! End-to-end checks on the compiled binary: exit codes, JSON shape,
//! and byte-for-byte deterministic output.

use std::process::{Command, Output};

fn fibdyn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fibdyn"))
        .args(args)
        .env_remove("FIBDYN_WORKERS")
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is valid JSON")
}

#[test]
fn decompose_is_deterministic() {
    let args = ["decompose", "--m", "28", "--level", "10", "--source", "both"];
    let first = fibdyn(&args);
    assert!(first.status.success(), "{}", String::from_utf8_lossy(&first.stderr));
    for _ in 0..2 {
        let again = fibdyn(&args);
        assert!(again.status.success());
        assert_eq!(first.stdout, again.stdout, "output changed between runs");
    }
    let v = stdout_json(&first);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["command"], "decompose");
    assert_eq!(v["agreement"]["agree"], true);
    assert!(v["catalog"]["components"].as_array().is_some());
    assert!(v["engine"]["components"].as_array().is_some());
}

#[test]
fn decompose_catalog_only_and_text_format() {
    let out = fibdyn(&["decompose", "--m", "16", "--level", "6", "--source", "catalog"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert!(v.get("engine").is_none());
    assert!(v["catalog"]["components"].as_array().unwrap().len() >= 4);

    let text = fibdyn(&[
        "decompose", "--m", "16", "--level", "6", "--source", "catalog", "--format", "text",
    ]);
    assert!(text.status.success());
    assert!(!text.stdout.is_empty());
    assert!(serde_json::from_slice::<serde_json::Value>(&text.stdout).is_err());
}

#[test]
fn classify_reports_behaviors() {
    let out = fibdyn(&["classify", "--m", "14", "--level", "3"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    let cycles = v["cycles"].as_array().unwrap();
    assert!(cycles
        .iter()
        .any(|c| c["behavior"] == "StronglyGrows"));
}

#[test]
fn verify_single_suite() {
    let out = fibdyn(&["verify", "--suite", "gaussian"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["all_passed"], true);
}

#[test]
fn conjecture_walk() {
    let out = fibdyn(&["conjecture", "--case", "4", "--d", "0", "--max-level", "12"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    let entries = v["entries"].as_array().unwrap();
    assert!(entries.iter().all(|e| e["certified"] == true));
}

#[test]
fn bad_inputs_exit_2() {
    for args in [
        &["decompose", "--m", "1"][..],
        &["decompose", "--m", "16", "--level", "30"][..],
        &["conjecture", "--case", "5"][..],
        &["classify", "--m", "14", "--level", "0"][..],
    ] {
        let out = fibdyn(args);
        assert_eq!(out.status.code(), Some(2), "args {args:?}");
    }
}

#[test]
fn unresolved_cap_exits_4() {
    // the identity map (m = 2) never certifies a component, so every
    // cycle is still unresolved at the truncation level
    let out = fibdyn(&[
        "decompose", "--m", "2", "--level", "6", "--source", "engine",
        "--fail-on-unresolved", "0",
    ]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn workers_flag_keeps_output_stable() {
    let base = fibdyn(&["decompose", "--m", "44", "--level", "8"]);
    let solo = fibdyn(&["decompose", "--m", "44", "--level", "8", "--workers", "1"]);
    assert!(base.status.success() && solo.status.success());
    assert_eq!(base.stdout, solo.stdout);
}

#[test]
fn out_file_matches_stdout() {
    let dir = std::env::temp_dir().join("fibdyn-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let piped = fibdyn(&["classify", "--m", "16", "--level", "4"]);
    let towed = fibdyn(&[
        "classify", "--m", "16", "--level", "4", "--out",
        path.to_str().unwrap(),
    ]);
    assert!(piped.status.success() && towed.status.success());
    assert_eq!(std::fs::read(&path).unwrap(), piped.stdout);
}
