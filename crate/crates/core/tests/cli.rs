// Copyright 2026 The aqss Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! End-to-end runs of the `aqss` binary.

use std::io::Write;
use std::process::{Command, Output, Stdio};

use aqss::SchemeTree;

fn data(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn aqss(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aqss"))
        .args(args)
        .env_remove("AQSS_MAX_AMPLITUDES")
        .output()
        .unwrap()
}

fn json(output: &Output) -> serde_json::Value {
    serde_json::from_slice(&output.stdout).unwrap()
}

#[test]
fn verify_two_class_structure_passes() {
    let out = aqss(&["verify", &data("two_classes.aqss")]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&out);
    assert_eq!(report["overall"], true);
    assert_eq!(report["lambda"], 2);
    assert_eq!(report["resident_shares"], 1);
    assert_eq!(report["qudits"], 10);
    assert_eq!(report["p"], 3);
}

#[test]
fn verify_exit_status_matches_verdict() {
    for name in ["conventional.aqss", "named.aqss", "pairs.json"] {
        let out = aqss(&["verify", &data(name)]);
        let overall = json(&out)["overall"].as_bool().unwrap();
        assert_eq!(out.status.code(), Some(if overall { 0 } else { 2 }), "{name}");
    }
}

#[test]
fn human_verify_table() {
    let out = aqss(&["verify", &data("two_classes.aqss"), "--format", "human"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("ABC + dealer"));
    assert!(text.lines().last().unwrap().ends_with("PASS"));
}

#[test]
fn unsupported_class_exits_three() {
    let out = aqss(&["build", &data("fano.aqss")]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("{ABC, ADE, AFG, BDF, BEG, CDG, CEF}"));
}

#[test]
fn malformed_input_exits_one() {
    let out = aqss(&["check", "structure: AB, C D E,"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("column"));
    assert_eq!(aqss(&["check", "/nonexistent/input.aqss"]).status.code(), Some(1));
}

#[test]
fn amplitude_cap_from_environment_and_flag() {
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_aqss"));
        cmd.args(["verify", &data("two_classes.aqss"), "--mode", "full"]);
        if let Some(f) = flag {
            cmd.args(["--max-amplitudes", f]);
        }
        match env {
            Some(v) => cmd.env("AQSS_MAX_AMPLITUDES", v),
            None => cmd.env_remove("AQSS_MAX_AMPLITUDES"),
        };
        cmd.output().unwrap().status.code()
    };
    assert_eq!(run(Some("2048"), None), Some(4));
    assert_eq!(run(Some("2048"), Some("100000")), Some(0));
    assert_eq!(run(None, Some("2048")), Some(4));
    assert_eq!(run(Some("not-a-number"), None), Some(1));
    assert_eq!(run(None, Some("512")), Some(1));
}

#[test]
fn build_writes_a_loadable_tree() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tree.json");
    let out = aqss(&["build", &data("two_classes.aqss"), "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let tree = SchemeTree::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(tree.leaf_count(), 10);
}

#[test]
fn check_and_lambda_outputs() {
    let check = json(&aqss(&["check", &data("conventional.aqss"), "--format", "json"]));
    assert_eq!(check["conventional_qss_ok"], true);
    assert_eq!(check["normal_form"], serde_json::json!(["ABC", "ADE", "BDF"]));
    let lambda = json(&aqss(&["lambda", &data("three_classes.aqss"), "--format", "json"]));
    assert_eq!(lambda["lambda"], 3);
    let named = json(&aqss(&["lambda", &data("named.aqss"), "--format", "json"]));
    assert_eq!(
        named["classifications"][0],
        serde_json::json!([["{Alice, Bob}"], ["{Carol, Dave}"]])
    );
}

#[test]
fn simulate_reports_state_size() {
    let out = aqss(&["simulate", &data("two_classes.aqss"), "--format", "json"]);
    let summary = json(&out);
    assert_eq!(summary["total_qudits"], 16);
    assert_eq!(summary["environment_qudits"], 5);
    assert_eq!(
        aqss(&["simulate", &data("two_classes.aqss"), "--tolerance", "0.5"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn render_both_targets() {
    let scheme = aqss(&[
        "render",
        &data("two_classes.aqss"),
        "--what",
        "scheme",
        "--format",
        "dot",
    ]);
    let text = String::from_utf8(scheme.stdout).unwrap();
    assert!(text.contains("dealer (resident#0)"));
    assert_eq!(text.matches("->").count(), 15);
    let graph = aqss(&[
        "render",
        &data("two_classes.aqss"),
        "--what",
        "as-graph",
        "--format",
        "dot",
    ]);
    let text = String::from_utf8(graph.stdout).unwrap();
    assert!(text.contains("v0 -- v1;") && !text.contains("v2 --"));
}

#[test]
fn reads_stdin() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_aqss"))
        .args(["lambda", "-", "--format", "json"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"structure: AB, CD, EF\n")
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(json(&out)["lambda"], 3);
}
