use std::path::Path;

use serde_json::Value;

use super::{execute, Ctx, Execution, Global};

/// Runs with an explicit empty config so a stray `semicube.toml` in the
/// working directory cannot leak in.
fn semicube(args: &[&str], dir: &Path) -> Execution {
    let config = dir.join("empty.toml");
    if !config.exists() {
        std::fs::write(&config, "").unwrap();
    }
    let mut full = vec!["semicube", "--config", config.to_str().unwrap()];
    full.extend_from_slice(args);
    execute(full)
}

fn json(e: &Execution) -> Value {
    serde_json::from_str(&e.stdout).unwrap()
}

fn json_lines(e: &Execution) -> Vec<Value> {
    e.stdout.lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn interval_has_two_faces() {
    let dir = tempfile::tempdir().unwrap();
    let o = semicube(&["cube", "hom", "--from", "0", "--to", "1", "--json"], dir.path());
    assert_eq!(o.code, 0);
    assert_eq!(json(&o), serde_json::json!(["0>1:0", "0>1:1"]));
    let o = semicube(&["cube", "hom", "--from", "1", "--to", "2", "--plain"], dir.path());
    assert_eq!(o.stdout.lines().count(), 4);
}

#[test]
fn symmetric_hom_count() {
    let dir = tempfile::tempdir().unwrap();
    let o = semicube(&["cube", "hom", "--from", "1", "--to", "2"], dir.path());
    assert_eq!(o.stdout.lines().count(), 8);
}

#[test]
fn dr_at_degree_zero_has_one_object() {
    let dir = tempfile::tempdir().unwrap();
    let o = semicube(&["dr", "build", "--max-degree", "0", "--json"], dir.path());
    assert_eq!(o.code, 0);
    assert_eq!(json(&o)["objects"].as_array().unwrap().len(), 1);
}

#[test]
fn day_of_intervals_is_the_square() {
    let dir = tempfile::tempdir().unwrap();
    let o = semicube(&["presheaf", "day", "rep:I1", "rep:I1", "--json"], dir.path());
    assert_eq!(o.code, 0);
    assert_eq!(json(&o)["represented_by"], "I2");
}

#[test]
fn presheaf_files_are_read() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b.json");
    let o = semicube(&["presheaf", "boundary", "I2", "--json", "--out", path.to_str().unwrap()], dir.path());
    assert_eq!((o.code, o.stdout.as_str()), (0, ""));
    let o = semicube(&["presheaf", "skeleton", path.to_str().unwrap(), "--json"], dir.path());
    assert_eq!(json(&o)["cells"], 8);
    assert_eq!(json(&o)["verified"], true);
    let o = semicube(&["presheaf", "nat", "rep:I1", path.to_str().unwrap(), "--count"], dir.path());
    assert_eq!(o.stdout.trim(), "4");
}

#[test]
fn kan_extensions_along_p() {
    let dir = tempfile::tempdir().unwrap();
    let o = semicube(&["presheaf", "restrict", "rep:I1", "--max-degree", "1"], dir.path());
    assert_eq!(o.code, 0, "{}", o.stderr);
    let o = semicube(&["presheaf", "ran", "terminal", "--max-degree", "1", "--json"], dir.path());
    let levels = json(&o)["levels"].clone();
    assert_eq!(levels["I0"].as_array().unwrap().len(), 1);
    assert_eq!(levels["I1"].as_array().unwrap().len(), 1);
}

#[test]
fn suite_filter_runs_only_directness() {
    let dir = tempfile::tempdir().unwrap();
    let o = semicube(&["check", "all", "--suites", "directness", "--json"], dir.path());
    assert_eq!(o.code, 0);
    let lines = json_lines(&o);
    assert_eq!(lines.len(), 2);
    assert!(lines[0]["header"]["out_of_model"].is_array());
    assert_eq!(lines[1]["suite"], "directness");
    assert_eq!(lines[1]["verdict"], "pass");
}

#[test]
fn failing_suite_exits_one_with_a_replayable_descriptor() {
    let dir = tempfile::tempdir().unwrap();
    let o = semicube(&["check", "all", "--suites", "contractibility", "--json"], dir.path());
    assert_eq!(o.code, 1);
    let report = &json_lines(&o)[1];
    assert_eq!(report["verdict"], "fail");
    assert_eq!(report["descriptor"]["seed"], 42);
    assert_eq!(report["descriptor"]["max_degree"], 2);
    assert!(report["counterexample"].is_array());
}

#[test]
fn corrupted_dr_json_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let good = semicube(&["dr", "build", "--max-degree", "1", "--json"], dir.path());
    let path = dir.path().join("dr.json");
    std::fs::write(&path, &good.stdout[..good.stdout.len() / 2]).unwrap();
    let o = semicube(&["dr", "check-direct", path.to_str().unwrap()], dir.path());
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("parsing"), "{}", o.stderr);
}

#[test]
fn dr_json_round_trips_through_check_direct() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dr.json");
    let o = semicube(&["dr", "build", "--max-degree", "1", "--json", "--out", path.to_str().unwrap()], dir.path());
    assert_eq!(o.code, 0);
    let o = semicube(&["dr", "check-direct", path.to_str().unwrap()], dir.path());
    assert_eq!(o.code, 0, "{}", o.stdout);
    let o = semicube(&["dr", "hom", "--source", "[-1]->[-1]{}|id", "--target", "[-1]->[0]{}|id", "--input", path.to_str().unwrap()], dir.path());
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert!(!o.stdout.trim().is_empty());
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(semicube(&["cube", "hom", "--bogus"], dir.path()).code, 2);
    assert_eq!(semicube(&["check", "all", "--suites", "nope"], dir.path()).code, 2);
    assert_eq!(semicube(&["presheaf", "boundary", "I9"], dir.path()).code, 2);
    assert_eq!(semicube(&["--help"], dir.path()).code, 0);
}

#[test]
fn config_sets_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("semicube.toml");
    std::fs::write(&config, "max_degree = 1\nseed = 7\n[budget]\ncone_frames = 3\n").unwrap();
    let o = execute(["semicube", "--config", config.to_str().unwrap(), "check", "all", "--suites", "census", "--json"]);
    let header = &json_lines(&o)[0]["header"];
    assert_eq!(header["max_degree"], 1);
    assert_eq!(header["seed"], 7);
    std::fs::write(&config, "max_degre = 1\n").unwrap();
    assert_eq!(execute(["semicube", "--config", config.to_str().unwrap(), "cube", "hom", "--from", "0", "--to", "0"]).code, 2);
}

#[test]
fn environment_overrides_budgets() {
    std::env::set_var("SEMICUBE_BUDGET_PSTAR_RANDOM", "3");
    let global = Global { max_degree: None, seed: None, json: false, out: None, config: None };
    let ctx = Ctx::new(&global).unwrap();
    std::env::remove_var("SEMICUBE_BUDGET_PSTAR_RANDOM");
    assert_eq!(ctx.budget.pstar_random, 3);
}

#[test]
fn export_adjacency_lists_faces() {
    let dir = tempfile::tempdir().unwrap();
    let o = semicube(&["export", "cube-plain", "--format", "adjacency", "--max-degree", "1"], dir.path());
    assert_eq!(o.stdout, "I0\tI1=0>1:0\tI1=0>1:1\nI1\n");
}

#[test]
fn factor_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let o = semicube(&["cube", "factor", "2>3:+1,1,-2", "--json"], dir.path());
    let v = json(&o);
    let o = semicube(&["cube", "compose", v["w"].as_str().unwrap(), v["r(k)"].as_str().unwrap()], dir.path());
    assert_eq!(o.stdout.trim(), "2>3:+1,1,-2");
    let path = dir.path().join("f.json");
    std::fs::write(&path, r#"{"dom":0,"cod":1,"entries":[{"face":0}]}"#).unwrap();
    let o = semicube(&["cube", "compose", "1>1:-1", path.to_str().unwrap()], dir.path());
    assert_eq!(o.stdout.trim(), "0>1:1");
}

#[test]
fn frame_commands() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.json");
    let o = semicube(&["frame", "random", "--base-max", "2", "--pad-max", "1", "--json", "--out", path.to_str().unwrap()], dir.path());
    assert_eq!(o.code, 0);
    let o = semicube(&["frame", "cotensor", path.to_str().unwrap(), "boundary:I2", "--json"], dir.path());
    assert_eq!(json(&o)["bijection"], true);
    let o = semicube(&["frame", "gap", "I2", "--frame", path.to_str().unwrap(), "--json"], dir.path());
    assert_eq!(o.code, 0);
    assert_eq!(json(&o)["surjective"], true);
    let o = semicube(&["frame", "cone", "--points", "0,0", "--json"], dir.path());
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert_eq!(json(&o)["restricts"], true);
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["frame", "random", "--seed", "5", "--json"];
    assert_eq!(semicube(&args, dir.path()).stdout, semicube(&args, dir.path()).stdout);
}
