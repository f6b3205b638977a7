use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ncgraph::channels::ChannelJson;
use serde_json::{json, Value};

const C5: &str = r#"{"n": 5, "edges": [[0,1],[1,2],[2,3],[3,4],[4,0]]}"#;

fn ncgraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncgraph"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn theta_of_c5() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "c5.json", C5);
    let out = ncgraph(&["theta", s(&g)]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["command"], "theta");
    assert_eq!(v["pass"], true);
    assert!(v["generated_unix"].is_u64());
    let theta = v["report"]["theta"].as_f64().unwrap();
    assert!((theta - 5f64.sqrt()).abs() < 1e-6, "{theta}");
}

#[test]
fn theta_witness_replays() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "c5.json", C5);
    let v = stdout_json(&ncgraph(&["theta", s(&g)]));
    let w = write(dir.path(), "w.json", &v["report"]["witness"].to_string());
    let out = ncgraph(&["verify", s(&w), s(&g)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));

    // claiming more than the witness shows is a failed check, not bad input
    let mut inflated = v["report"]["witness"].clone();
    inflated["value"] = json!(3.0);
    let w = write(dir.path(), "w2.json", &inflated.to_string());
    let out = ncgraph(&["verify", s(&w), s(&g)]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout_json(&out)["pass"], false);
}

#[test]
fn params_certificates_replay() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "c5.json", C5);
    let saved = dir.path().join("params.json");
    let out = ncgraph(&["--json", s(&saved), "params", s(&g)]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&saved).unwrap()).unwrap();
    assert_eq!(v, stdout_json(&out));
    assert_eq!(v["report"]["independence_number"], 2);
    let certs = v["report"]["report"]["certificates"].as_array().unwrap();
    assert!(!certs.is_empty());
    for (i, cert) in certs.iter().enumerate() {
        let f = write(dir.path(), &format!("cert{i}.json"), &cert.to_string());
        let out = ncgraph(&["verify", s(&f), s(&g)]);
        assert_eq!(code(&out), 0, "certificate {i}: {}", String::from_utf8_lossy(&out.stdout));
    }

    let mut forged = certs[0].clone();
    forged["value"] = json!(forged["value"].as_u64().unwrap() + 1);
    let f = write(dir.path(), "forged.json", &forged.to_string());
    assert_eq!(code(&ncgraph(&["verify", s(&f), s(&g)])), 1);
}

#[test]
fn channel_input_is_detected() {
    let dir = tempfile::tempdir().unwrap();
    let ch = ncgraph_cli::reproduce::s2_kraus_pair().unwrap();
    let text = serde_json::to_string(&ChannelJson::from(&ch)).unwrap();
    let f = write(dir.path(), "ch.json", &text);
    let out = ncgraph(&["--no-timestamp", "params", s(&f)]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["report"]["dim"], 3);
    assert!(v.get("generated_unix").is_none());

    let out = ncgraph(&["theta", s(&f)]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["report"]["kind"], "witness_lower_bound");
}

#[test]
fn bad_input_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let junk = write(dir.path(), "junk.json", "{not json");
    let unknown = write(dir.path(), "unknown.json", r#"{"colour": "blue"}"#);
    let bad_graph = write(dir.path(), "bad.json", r#"{"n": 2, "edges": [[0, 5]]}"#);
    let missing = dir.path().join("missing.json");
    for f in [&junk, &unknown, &bad_graph, &missing] {
        let out = ncgraph(&["theta", s(f)]);
        assert_eq!(code(&out), 2, "{}", f.display());
        assert!(out.stdout.is_empty());
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    }
    assert_eq!(code(&ncgraph(&["reproduce", "no-such-case"])), 2);
    assert_eq!(code(&ncgraph(&["--tol", "-1", "reproduce", "s2-example"])), 2);

    // a graph is not a certificate
    let g = write(dir.path(), "c5.json", C5);
    assert_eq!(code(&ncgraph(&["verify", s(&g), s(&g)])), 2);
}

#[test]
fn reproduce_list() {
    let out = ncgraph(&["reproduce", "--list"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    let ids: Vec<&str> = v["report"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["id"].as_str().unwrap())
        .collect();
    assert!(ids.contains(&"s2-example"));
    assert!(ids.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn reports_are_deterministic() {
    let args = ["--no-timestamp", "reproduce", "s2-example"];
    let a = ncgraph(&args);
    let b = ncgraph(&args);
    let seq = ncgraph(&["--sequential", "--no-timestamp", "reproduce", "s2-example"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, seq.stdout);
}

#[test]
fn out_of_scope_case_is_not_a_failure() {
    let out = ncgraph(&["--no-timestamp", "reproduce", "quantum-theta"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["report"]["cases"][0]["status"], "out-of-scope-noted");
    assert_eq!(v["report"]["out_of_scope"], 1);
}
