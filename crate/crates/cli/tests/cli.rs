use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn kit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sandwich-kit"))
        .args(args)
        .env_remove("SANDWICH_KIT_BUDGET")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn analyze_json(args: &[&str]) -> (i32, Value) {
    let out = kit(&[&["analyze"], args].concat());
    let text = stdout(&out);
    let value = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}"));
    (code(&out), value)
}

fn lines(path: &Path) -> Vec<Value> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

#[test]
fn partial_maps_all_a_all_checks_pass() {
    let (c, r) = analyze_json(&["--kind", "partialmap", "--sizes", "2,2", "--i", "0", "--j", "1", "--checks", "all"]);
    assert_eq!(c, 0);
    let inst = r["instances"].as_array().unwrap();
    assert_eq!(inst.len(), 9);
    assert_eq!(r["violation_count"], 0);
    assert_eq!(r["config_hash"].as_str().unwrap().len(), 64);
    assert!(inst.iter().all(|x| x["checks"].as_u64().unwrap() > 0));
    assert!(inst.iter().all(|x| x["rank"]["sandwich_bound"].is_object()));
}

#[test]
fn idempotent_sandwich_gives_the_monoid_back() {
    // e = [12] in S_01 of full maps [2,2] is the identity map.
    let (c, r) = analyze_json(&["--kind", "fullmap", "--sizes", "2,2", "--i", "0", "--j", "1", "--a", "[12]", "--checks", "green"]);
    assert_eq!(c, 0);
    let inst = &r["instances"][0];
    assert_eq!(inst["a_payload"], "[12]");
    assert_eq!(inst["size"], 4);
    assert_eq!(inst["sandwich_regular"], true);
    assert_eq!(inst["regular_count"], 4);
    assert!(inst["frame"].is_null());
}

#[test]
fn injective_partial_maps_fall_in_the_inverse_case() {
    let (c, r) = analyze_json(&["--kind", "injpartial", "--sizes", "2,3", "--i", "0", "--j", "1", "--checks", "inverse"]);
    assert_eq!(c, 0);
    let inst = r["instances"].as_array().unwrap();
    assert_eq!(inst.len(), 13);
    assert!(inst.iter().all(|x| x["frame"]["inverse_case"] == true));
}

#[test]
fn index_and_payload_name_the_same_element() {
    let (_, by_payload) = analyze_json(&["--kind", "partialmap", "--sizes", "2,2", "--i", "0", "--j", "1", "--a", "[2-]", "--checks", "green"]);
    let index = by_payload["instances"][0]["a"].as_u64().unwrap().to_string();
    let (_, by_index) = analyze_json(&["--kind", "partialmap", "--sizes", "2,2", "--i", "0", "--j", "1", "--a", &index, "--checks", "green"]);
    assert_eq!(by_index["instances"][0]["a_payload"], "[2-]");
}

#[test]
fn config_file_round_trips_and_hash_ignores_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run.json");
    let o = kit(&["analyze", "--kind", "matf2", "--sizes", "1,2", "--i", "1", "--j", "0", "--checks", "green,psets", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let first: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let cfg = dir.path().join("config.json");
    let mut config = first["config"].clone();
    config["outputs"] = serde_json::json!({});
    std::fs::write(&cfg, config.to_string()).unwrap();
    let (c, second) = analyze_json(&["--config", cfg.to_str().unwrap()]);
    assert_eq!(c, 0);
    assert_eq!(first["config_hash"], second["config_hash"]);
    assert_eq!(first["instances"].as_array().unwrap().len(), second["instances"].as_array().unwrap().len());
}

#[test]
fn null_sandwich_eggbox_has_single_cells() {
    let o = kit(&["eggbox", "--kind", "partialmap", "--sizes", "2,2", "--i", "0", "--j", "1", "--a", "[--]", "--whole"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    // S_10 has 9 elements, each its own D-class with a single cell.
    assert_eq!(text.lines().filter(|l| l.starts_with("D-class ")).count(), 9);
    assert!(text.lines().filter(|l| l.starts_with('|')).all(|l| l.matches('|').count() == 2));
}

#[test]
fn eggbox_writes_dot_and_respects_the_layout_cap() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("e.dot");
    let o = kit(&["eggbox", "--kind", "fullmap", "--sizes", "3", "--a", "[123]", "--dot", dot.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(&dot).unwrap();
    assert!(text.starts_with("digraph eggbox"));
    assert!(text.contains("cluster_P0") && text.contains("cluster_W0"));
    let o = kit(&["eggbox", "--kind", "fullmap", "--sizes", "3", "--a", "[123]", "--layout-cap", "4"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn rank_table_and_budget_exit() {
    let o = kit(&["rank", "--kind", "fullmap", "--sizes", "2,2", "--i", "0", "--j", "1"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.starts_with("a "));
    assert_eq!(text.lines().count(), 5);
    let o = kit(&["analyze", "--kind", "fullmap", "--sizes", "3,3", "--i", "0", "--j", "1", "--checks", "rank", "--budget-rank-nodes", "1"]);
    assert_eq!(code(&o), 3);
    let r: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["budget_exhausted"], true);
    assert_eq!(r["violation_count"], 0);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&kit(&["analyze", "--kind", "partialmap", "--sizes", "2,2", "--i", "5", "--j", "0"])), 2);
    assert_eq!(code(&kit(&["analyze", "--kind", "bogus", "--sizes", "2"])), 2);
    assert_eq!(code(&kit(&["analyze", "--sizes", "2"])), 2);
    assert_eq!(code(&kit(&["analyze", "--kind", "fullmap", "--sizes", "2", "--checks", "greem"])), 2);
    assert_eq!(code(&kit(&["analyze", "--kind", "fullmap", "--sizes", "2", "--a", "[9]"])), 2);
    assert_eq!(code(&kit(&["analyze", "--kind", "fullmap", "--sizes", "2", "--profile", "huge"])), 2);
    assert_eq!(code(&kit(&["frobnicate"])), 2);
}

#[test]
fn element_cap_exits_3() {
    let o = kit(&["analyze", "--kind", "fullmap", "--sizes", "3", "--budget-elements", "10"]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn batch_resumes_without_duplicates() {
    let dir = tempfile::tempdir().unwrap();
    let log = dir.path().join("results.jsonl");
    let log_arg = log.to_str().unwrap();
    let sweep = || kit(&["batch", "--log", log_arg, "--kind", "injpartial", "--profile", "quick"]);
    assert_eq!(code(&sweep()), 0);
    let first = lines(&log);
    // Injective partial maps, sizes up to 2: one record per sandwich instance.
    assert_eq!(first.len(), 60);
    assert!(first.iter().all(|r| r["instances"].as_array().unwrap().len() == 1));
    assert!(first.iter().all(|r| r["config"]["scope"]["single"].is_object()));
    // Cut the last record short, as an interrupt would; it is redone.
    let mut text = std::fs::read_to_string(&log).unwrap();
    let last = text.trim_end().rfind('\n').unwrap();
    text.truncate(last + 20);
    std::fs::write(&log, &text).unwrap();
    let o = sweep();
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("\"completed\":1,\"skipped\":59"));
    let raw = std::fs::read_to_string(&log).unwrap();
    let parsed: Vec<Value> = raw.lines().filter_map(|l| serde_json::from_str(l).ok()).collect();
    let mut hashes: Vec<&str> = parsed.iter().map(|r| r["config_hash"].as_str().unwrap()).collect();
    assert_eq!(hashes.len(), 60);
    hashes.sort();
    hashes.dedup();
    assert_eq!(hashes.len(), 60);
    let before = std::fs::read_to_string(&log).unwrap();
    assert!(stdout(&sweep()).contains("\"completed\":0,\"skipped\":60"));
    assert_eq!(std::fs::read_to_string(&log).unwrap(), before);
}

#[test]
fn batch_with_tiny_rank_budget_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let log = dir.path().join("results.jsonl");
    let o = kit(&["batch", "--log", log.to_str().unwrap(), "--kind", "fullmap", "--checks", "rank", "--budget-rank-nodes", "1"]);
    assert_eq!(code(&o), 3);
    let records = lines(&log);
    assert!(records.iter().any(|r| r["budget_exhausted"] == true));
    assert!(records.iter().all(|r| r["violation_count"] == 0));
}
