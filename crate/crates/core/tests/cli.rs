use std::path::PathBuf;

use logweight::cli::{run, Command, Format, RunConfig, EXIT_INVALID, EXIT_MISMATCH, EXIT_OK};
use serde_json::json;

fn bundled(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(format!("{name}.json"))
}

fn config(command: Command, scenario: PathBuf) -> RunConfig {
    RunConfig { scenario: Some(scenario), format: Format::Structured, ..RunConfig::new(command) }
}

fn temp_scenario(name: &str, body: &serde_json::Value) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("logweight-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(format!("{name}.json"));
    std::fs::write(&path, body.to_string()).unwrap();
    path
}

#[test]
fn compare_on_three_points() {
    let out = run(&config(Command::Compare, bundled("line-k3-q")));
    assert_eq!(out.code, EXIT_OK, "{}", out.rendered);
    let tracks = out.report["tracks"].as_array().unwrap();
    assert_eq!(tracks.len(), 1 + 2 + 2);
    assert!(tracks.iter().all(|t| t["match"] == json!(true)));
    assert_eq!(tracks[0]["graded"], json!([[0, 0, 1], [2, 1, 2]]));
}

#[test]
fn weights_on_the_f5_scenario() {
    let out = run(&config(Command::Weights, bundled("f5-conic-line")));
    assert_eq!(out.code, EXIT_OK);
    assert_eq!(out.report["grw0_compact"], json!([[2, 1]]));
}

#[test]
fn reports_are_deterministic() {
    let cfg = config(Command::Ss, bundled("line-k2-f3"));
    assert_eq!(run(&cfg).rendered, run(&cfg).rendered);
    let human = RunConfig { format: Format::Human, ..cfg };
    assert!(run(&human).rendered.contains("status: ok"));
}

#[test]
fn invalid_input_names_the_field() {
    let body = json!({"version": 1, "field": "F5", "mode": "explicit", "points": [0, 1, 1]});
    let out = run(&config(Command::Compare, temp_scenario("dup", &body)));
    assert_eq!(out.code, EXIT_INVALID);
    assert_eq!(out.report["error"]["path"], json!("points[2]"));

    let body = json!({"version": 1, "field": "F4", "mode": "explicit", "points": []});
    let out = run(&config(Command::Compare, temp_scenario("field", &body)));
    assert_eq!(out.code, EXIT_INVALID);
    assert_eq!(out.report["error"]["path"], json!("field"));

    let out = run(&RunConfig::new(Command::Weights));
    assert_eq!(out.code, EXIT_INVALID);
}

#[test]
fn failed_expectation_is_a_mismatch() {
    let mut body: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(bundled("triangle")).unwrap()).unwrap();
    body["expect"] = json!({"grw0_compact": [[1, 1]]});
    let out = run(&config(Command::DualComplex, temp_scenario("tri", &body)));
    assert_eq!(out.code, EXIT_MISMATCH);
    let diff = &out.report["mismatches"][0];
    assert_eq!(diff["left"], json!([[2, 1]]));
    assert_eq!(diff["right"], json!([[1, 1]]));
}

#[test]
fn selftest_passes_with_a_seed() {
    let out = run(&RunConfig { seed: 11, format: Format::Structured, ..RunConfig::new(Command::Selftest) });
    assert_eq!(out.code, EXIT_OK, "{}", out.rendered);
}
