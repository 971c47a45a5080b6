mod common;

use std::path::Path;
use std::process::{Command, Output};

use common::*;
use serde_json::Value;

fn gateway(cwd: &Path, args: &[&str]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_intent-gateway"));
    cmd.current_dir(cwd).args(args);
    for (k, _) in std::env::vars() {
        if k.starts_with("GATEWAY_") {
            cmd.env_remove(k);
        }
    }
    cmd.output().unwrap()
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn ingested() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    let manifest = fixture("manifest.txt");
    let out = gateway(dir.path(), &["ingest", "--manifest", manifest.to_str().unwrap(), "--out", "idx"]);
    stdout(&out);
    dir
}

#[test]
fn ingest_writes_both_indices() {
    let dir = ingested();
    assert!(dir.path().join("idx/intent.idx").is_file());
    assert!(dir.path().join("idx/vanilla.idx").is_file());
}

#[test]
fn translate_prints_the_structured_intent() {
    let dir = ingested();
    let out = stdout(&gateway(dir.path(), &["translate", VR_INTENT]));
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["structured"]["scenario_type"], "3K Cloud VR (Game)");
    assert_eq!(v["structured"]["kpis"], serde_json::to_value(&gt_vr().kpis).unwrap());
    assert!(v["duration_seconds"].as_f64().unwrap() > 0.0);

    let out = stdout(&gateway(dir.path(), &["translate", "--pipeline", "no_rag", VR_INTENT]));
    let v: Value = serde_json::from_str(&out).unwrap();
    assert!(v["free_text"].is_object());
}

#[test]
fn compare_prints_means_and_timing() {
    let dir = ingested();
    let dataset = fixture("dataset.jsonl");
    let out = stdout(&gateway(dir.path(), &["compare", "--dataset", dataset.to_str().unwrap()]));
    let header = out.lines().next().unwrap();
    assert!(header.contains("vanilla_rag") && header.contains("intent_rag") && header.contains("no_rag"), "{out}");
    let timing = out.lines().find(|l| l.starts_with("translation_time_seconds")).unwrap();
    let values: Vec<f64> = timing.split_whitespace().skip(1).map(|v| v.parse().unwrap()).collect();
    assert_eq!(values.len(), 3);
    assert!(values.iter().all(|v| *v > 0.0), "{timing}");
}

#[test]
fn evaluate_writes_json_and_csv() {
    let dir = ingested();
    let dataset = fixture("dataset.jsonl");
    let args = ["evaluate", "--dataset", dataset.to_str().unwrap(), "--out", "report.json", "--csv", "report.csv", "--pipelines", "intent_rag,no_rag"];
    stdout(&gateway(dir.path(), &args));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report["samples"].as_array().unwrap().len(), 4);
    let csv = std::fs::read_to_string(dir.path().join("report.csv")).unwrap();
    assert!(csv.starts_with("metric,intent_rag,no_rag\n"), "{csv}");
    assert_eq!(csv.lines().count(), 8);
}

#[test]
fn errors_exit_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let out = gateway(dir.path(), &["translate", "--index", "nope", "x"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error: "));

    let out = gateway(dir.path(), &["translate", "--pipeline", "bogus", "x"]);
    assert_eq!(out.status.code(), Some(2));

    let dir = ingested();
    let out = gateway(dir.path(), &["translate", "qqqq zzzz"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn config_file_is_honoured() {
    let dir = ingested();
    std::fs::rename(dir.path().join("idx"), dir.path().join("elsewhere")).unwrap();
    std::fs::write(dir.path().join("gw.toml"), "index_dir = \"elsewhere\"\n[pipeline]\nretrieve_k = 4\n").unwrap();
    let out = stdout(&gateway(dir.path(), &["--config", "gw.toml", "translate", "4K On Demand Video"]));
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["structured"]["kpis"], serde_json::to_value(&gt_4k().kpis).unwrap());

    std::fs::write(dir.path().join("bad.toml"), "[pipeline]\nretrieve_k = 1\nrerank_top = 3\n").unwrap();
    let out = gateway(dir.path(), &["--config", "bad.toml", "translate", "x"]);
    assert_eq!(out.status.code(), Some(1));
}
