use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Stdio};

use sbflag_core::fixtures::lemma_fixtures;
use serde_json::{json, Value};

fn sbflag(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_sbflag")).args(args).env_remove("SBFLAG_CONFIG").output().unwrap();
    let record = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)));
    (out.status.code().unwrap(), record)
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sbflag-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn class_index_record() {
    let (code, r) = sbflag(&["class-index", r#"{"v1":"1/4","v2":"3/4"}"#]);
    assert_eq!(code, 0);
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["command"], "class-index");
    assert_eq!(r["status"], "ok");
    assert_eq!(r["result"]["index"], 4);
    assert_eq!(r["result"]["period"], 4);
    assert_eq!(r["result"]["oracle_index"], 4);
}

#[test]
fn invalid_class_is_exit_2() {
    let (code, r) = sbflag(&["class-index", r#"{"v1":"1/4"}"#]);
    assert_eq!(code, 2);
    assert_eq!(r["status"], "error");
    assert_eq!(r["error"]["code"], "not-in-brauer-group");
}

#[test]
fn malformed_json_is_exit_2() {
    let (code, r) = sbflag(&["sb-index", "{not json"]);
    assert_eq!(code, 2);
    assert_eq!(r["error"]["code"], "malformed-input");
}

#[test]
fn sb_commands() {
    let (_, r) = sbflag(&["sb-index", r#"{"ind":12,"flags":[4,8]}"#]);
    assert_eq!(r["result"], json!({"index": 3, "generic_index": 4}));
    let (_, r) = sbflag(&["sb-bound", r#"{"ind":30,"flags":[6]}"#]);
    assert_eq!(r["result"]["exponent"], 1);
    let (_, r) = sbflag(&["sb-bound", r#"{"ind":16,"exp":2,"flags":[4]}"#]);
    assert_eq!(r["result"]["exponent"], 2);
    let (_, r) = sbflag(&["sb-rational-point", r#"{"ind":8,"flags":[2],"ind_over_l":2}"#]);
    assert_eq!(r["result"]["rational_point"], true);
    let (code, r) = sbflag(&["sb-bound", r#"{"ind":16,"flags":[4],"hypotheses":{"sb_p_vanishing":[6]}}"#]);
    assert_eq!((code, r["error"]["code"].as_str()), (2, Some("invalid-hypotheses")));
}

#[test]
fn payload_from_stdin() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_sbflag"))
        .arg("sb-generic-index")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(br#"{"ind":12,"flags":[4,8]}"#).unwrap();
    let out = child.wait_with_output().unwrap();
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["result"]["generic_index"], 4);
}

#[test]
fn local_ext_count() {
    let (code, r) =
        sbflag(&["local-ext-count", r#"{"descriptor":{"residue_char":5,"residue_size":5,"field_char":0},"p":2}"#]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["count"]["at_least"], 3);
    assert_eq!(r["result"]["catalog"].as_array().unwrap().len(), 3);
}

#[test]
fn construct_ext_from_fixture() {
    let f = &lemma_fixtures()[0];
    let payload = json!({ "class": f.class, "l0": f.l0, "l1": f.l1 }).to_string();
    let (code, r) = sbflag(&["construct-ext", &payload]);
    assert_eq!(code, 0, "{r}");
    assert_eq!(r["result"]["index_k"], 2);
}

#[test]
fn lemma_preconditions_exit_3() {
    let same = r#"{"degree":2,"local_data":{"v0":[2]}}"#;
    let payload = format!(r#"{{"class":{{"v0":"1/4","v1":"3/4"}},"l0":{same},"l1":{same}}}"#);
    let (code, r) = sbflag(&["construct-ext", &payload]);
    assert_eq!(code, 3);
    assert_eq!(r["error"]["code"], "lemma-preconditions-failed");
}

#[test]
fn power_extension_bounds() {
    let (code, r) = sbflag(&["construct-power-ext", r#"{"class":{"v0":"1/4","v1":"3/4"},"k":1}"#]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["index_after"], 2);
    let (code, r) = sbflag(&["construct-power-ext", r#"{"class":{"v0":"1/4","v1":"3/4"},"k":3}"#]);
    assert_eq!((code, r["error"]["code"].as_str()), (2, Some("invalid-target")));
}

#[test]
fn chain_round_trip_and_tamper() {
    let (code, r) = sbflag(&["chain", r#"{"fixture":"p3-m2-k1","l0":"L0","l1":"L2"}"#]);
    assert_eq!(code, 0);
    let mut chain = r["result"].clone();
    let path = scratch("chain.json", &chain.to_string());
    let (code, v) = sbflag(&["verify-chain", "--payload-file", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["valid"], true);

    chain["certificates"][0]["splitting_witness"]["declared_index"] = json!(9);
    let path = scratch("tampered.json", &chain.to_string());
    let (code, v) = sbflag(&["verify-chain", "--payload-file", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(v["status"], "fail");
    assert!(!v["result"]["diagnostics"].as_array().unwrap().is_empty());
}

#[test]
fn human_output() {
    let out = Command::new(env!("CARGO_BIN_EXE_sbflag"))
        .args(["--human", "sb-generic-index", r#"{"ind":12,"flags":[4,8]}"#])
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("status: ok"));
    assert!(text.contains("  generic_index: 4"));
}

#[test]
fn budget_over_ceiling_is_exit_5() {
    let (code, r) = sbflag(&["oracle-suite", "--max-places", "9"]);
    assert_eq!(code, 5);
    assert_eq!(r["status"], "budget-exceeded");
}

#[test]
fn dropped_rule_is_detected() {
    let (code, r) = sbflag(&["oracle-suite", "--drop-rule", "R2"]);
    assert_eq!(code, 1);
    assert_eq!(r["status"], "fail");
    let checks = r["result"]["checks"].as_array().unwrap();
    let torsion = checks.iter().find(|c| c["name"] == "torsion-rules").unwrap();
    assert_eq!(torsion["passed"], false);
    assert!(torsion["diagnostics"][0].as_str().unwrap().starts_with("rule-mismatch"));
}

#[test]
fn config_resolution() {
    let path = scratch("config.toml", "default_field_kind = \"local\"\n[budget]\nmax_index = 1\n");
    let payload = r#"{"ind":4,"flags":[2]}"#;
    let (_, plain) = sbflag(&["sb-bound", payload]);
    assert_eq!(plain["result"]["exponent"], 2);

    let (_, flagged) = sbflag(&["--config", path.to_str().unwrap(), "sb-bound", payload]);
    assert_eq!(flagged["result"]["exponent"], 1);

    let out = Command::new(env!("CARGO_BIN_EXE_sbflag"))
        .args(["sb-bound", payload])
        .env("SBFLAG_CONFIG", &path)
        .output()
        .unwrap();
    let from_env: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(from_env["result"]["exponent"], 1);

    let (_, r) = sbflag(&["--config", path.to_str().unwrap(), "class-index", r#"{"v1":"1/4","v2":"3/4"}"#]);
    assert!(r["result"].get("oracle_index").is_none());

    let bad = scratch("bad.toml", "colour = 3\n");
    let (code, _) = sbflag(&["--config", bad.to_str().unwrap(), "sb-index", payload]);
    assert_eq!(code, 2);
}
