use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn toric(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toric")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let out = toric(args);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{args:?}: {e}\n{}", String::from_utf8_lossy(&out.stdout));
    });
    (v, out.status.code().unwrap())
}

#[test]
fn describe_projective_space() {
    let (v, code) = json(&["describe", "P3", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(
        (&v["rays"], &v["max_cones"], &v["aut_order"], &v["picard_rank"], &v["invariant_picard_rank"]),
        (&4.into(), &4.into(), &24.into(), &1.into(), &1.into())
    );
    let (v, _) = json(&["describe", "dP6", "--json"]);
    assert_eq!(v["aut_order"], 12);
    assert_eq!(v["fano"], true);
}

#[test]
fn frobenius_counts() {
    let (v, _) = json(&["frobenius", "P3", "--json"]);
    assert_eq!((v["count"].as_u64(), v["antinef_count"].as_u64()), (Some(4), Some(4)));
    let (v, _) = json(&["frobenius", "fano3-11", "--json"]);
    assert_eq!((v["count"].as_u64(), v["antinef_count"].as_u64()), (Some(9), Some(8)));
    let (v, code) = json(&["frobenius", "P1", "--method", "sweep", "--lmax", "3", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(v["max_level"], 3);
    assert_eq!(v["count"], 2);
}

#[test]
fn king_collection_is_stable_with_three_blocks() {
    let (v, code) = json(&["check", "dP6", "king", "--group", "full", "--strong", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(v["passed"], true);
    assert_eq!(v["group_order"], 12);
    assert_eq!(v["block_sizes"], serde_json::json!([1, 3, 2]));
}

#[test]
fn vn_collection_on_v4() {
    let (v, code) = json(&["check", "V4", "vn", "--group", "full", "--strong", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(v["group_order"], 240);
    assert_eq!(v["length"], 30);
    assert_eq!(v["k0"], 30);
}

#[test]
fn reversed_order_fails_with_witness() {
    let (v, code) = json(&["check", "P2", "beilinson-reversed", "--json"]);
    assert_eq!(code, 1);
    assert_eq!(v["exceptional"], false);
    let w = &v["failures"][0];
    assert_eq!((w["kind"].as_str(), w["i"].as_u64(), w["j"].as_u64()), (Some("backward"), Some(1), Some(0)));
    assert_eq!(w["dim"], 3);
}

#[test]
fn export_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["P2", "dP6", "fano3-11", "V2"] {
        let fan = toric(&["export", name]);
        assert!(fan.status.success());
        let path = dir.path().join(format!("{name}.json"));
        fs::write(&path, &fan.stdout).unwrap();
        let from_file = toric(&["describe", "--fan", path.to_str().unwrap(), "--json"]);
        let by_name = toric(&["describe", name, "--json"]);
        assert_eq!(from_file.stdout, by_name.stdout, "{name}");
    }
    let coll = toric(&["export", "dP6", "--collection", "king"]);
    let fan = toric(&["export", "dP6"]);
    let cpath = dir.path().join("king.json");
    let fpath = dir.path().join("dp6.json");
    fs::write(&cpath, &coll.stdout).unwrap();
    fs::write(&fpath, &fan.stdout).unwrap();
    let (v, code) = json(&[
        "check",
        cpath.to_str().unwrap(),
        "--fan",
        fpath.to_str().unwrap(),
        "--group",
        "full",
        "--strong",
        "--json",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["block_sizes"], serde_json::json!([1, 3, 2]));
}

#[test]
fn group_file_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let g = toric(&["group", "V2", "--vn-symmetric", "--json"]);
    let gv: Value = serde_json::from_slice(&g.stdout).unwrap();
    assert_eq!(gv["order"], 12);
    let path = dir.path().join("g.json");
    fs::write(&path, &g.stdout).unwrap();
    let (v, code) = json(&["check", "V2", "vn", "--group", path.to_str().unwrap(), "--strong", "--json"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["stable"], true);
}

#[test]
fn bad_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(toric(&["describe", "nope"]).status.code(), Some(2));
    assert_eq!(toric(&["frobenius"]).status.code(), Some(2));
    assert_eq!(toric(&["bogus"]).status.code(), Some(2));
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"rank\":1,\"rays\":[[2],[-1]],\"max_cones\":[[0],[1]]}").unwrap();
    assert_eq!(toric(&["describe", "--fan", bad.to_str().unwrap()]).status.code(), Some(2));
    fs::write(&bad, "not json").unwrap();
    let out = toric(&["describe", "--fan", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("malformed JSON"));
    let missing = dir.path().join("missing.json");
    assert_eq!(toric(&["describe", "--fan", missing.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn table1_reports_every_row() {
    let (v, _) = json(&["table1", "--json"]);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 18);
    let skipped: Vec<u64> =
        rows.iter().filter(|r| r["status"] == "SKIPPED").map(|r| r["row"].as_u64().unwrap()).collect();
    assert_eq!(skipped, [13, 14, 16, 18]);
    for r in rows.iter().filter(|r| r["status"] != "SKIPPED") {
        assert_eq!(r["status"], "PASS", "row {}: {} vs {}", r["row"], r["computed"], r["expected"]);
    }
}
