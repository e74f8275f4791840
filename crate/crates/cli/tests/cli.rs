use std::process::{Command, Output};

use serde_json::Value;

fn syzlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_syzlab")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn betti_seven_points_on_twisted_cubic() {
    let out = syzlab(&["betti", "--kind", "rational_normal", "--r", "3", "--d", "3", "--gamma", "7", "--prime", "101", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    let rows = doc["result"]["table"]["rows"].as_array().unwrap();
    let row2 = rows.iter().find(|r| r["j"] == 2).unwrap();
    assert_eq!(row2["b"], serde_json::json!([0, 3, 6, 3, 0]));
    let prov = &doc["provenance"];
    assert_eq!(prov["prime"], 101);
    assert_eq!(prov["seed"], 1);
    assert_eq!(prov["subcommand"], "betti");
    assert_eq!(prov["tool"], "syzlab");
    assert!(prov["version"].is_string());
}

#[test]
fn identical_argv_gives_identical_bytes() {
    let args = ["mrc", "--kind", "elliptic", "--r", "3", "--d", "5", "--gamma", "17", "--seed", "9"];
    let a = syzlab(&args);
    let b = syzlab(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["result"]["status"], "confirmed");
    assert_eq!(json(&a)["provenance"]["prime"], 1009);
}

#[test]
fn plan_example() {
    let out = syzlab(&["plan", "--g", "10", "--r", "3", "--d", "12"]);
    assert_eq!(out.status.code(), Some(0));
    let plan = &json(&out)["result"]["plan"];
    assert_eq!(plan["target"], serde_json::json!({"g": 10, "r": 3, "d": 12}));
    assert_eq!(plan["steps"][0], serde_json::json!({"d": 12, "g": 10, "eps": 4}));
    assert_eq!(plan["base"]["kind"], "rational_normal");
}

#[test]
fn plan_check_round_trips_through_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("plan.json");
    let out = syzlab(&["plan", "--g", "7", "--r", "4", "--d", "13"]);
    let plan = json(&out)["result"]["plan"].to_string();
    std::fs::write(&path, plan).unwrap();
    let check = syzlab(&["plan", "--check", path.to_str().unwrap()]);
    assert_eq!(check.status.code(), Some(0));

    std::fs::write(&path, r#"{"target":{"g":10,"r":3,"d":12},"steps":[],"base":{"kind":"elliptic","d":12,"attach":10}}"#).unwrap();
    assert_eq!(syzlab(&["plan", "--check", path.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn hk_twisted_cubic_in_characteristic_two() {
    let out = syzlab(&["hk", "--kind", "rational_normal", "--r", "3", "--d", "3", "--prime", "2", "--e-max", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let res = &json(&out)["result"];
    assert_eq!(res["records"][0]["hk"], 8);
    assert_eq!(res["ratios"][0], serde_json::json!({"num": 2, "den": 1}));
}

#[test]
fn csv_layout_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let out = syzlab(&[
        "betti", "--kind", "rational_normal", "--r", "3", "--d", "3", "--gamma", "7", "--prime", "101", "--format", "csv", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# syzlab"));
    assert_eq!(lines.next(), Some("j,0,1,2,3,4"));
    assert!(text.contains("\n2,0,3,6,3,0\n"));
    assert_eq!(syzlab(&["plan", "--g", "1", "--r", "3", "--d", "6", "--format", "csv"]).status.code(), Some(64));
}

#[test]
fn expected_table_mismatch_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("expected.json");
    let args = ["betti", "--kind", "rational_normal", "--r", "3", "--d", "3", "--gamma", "7", "--prime", "101"];
    let table = json(&syzlab(&args))["result"]["table"].clone();
    std::fs::write(&path, table.to_string()).unwrap();
    let mut with_expect = args.to_vec();
    with_expect.extend(["--expect", path.to_str().unwrap()]);
    assert_eq!(syzlab(&with_expect).status.code(), Some(0));

    let mut altered = table;
    altered["rows"][2]["b"][1] = 4.into();
    std::fs::write(&path, altered.to_string()).unwrap();
    let out = syzlab(&with_expect);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["result"]["diffs"][0]["expected"], 4);
}

#[test]
fn curve_document_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("curve.json");
    std::fs::write(&path, r#"{"kind":"elliptic","r":3,"d":4,"prime":1009,"seed":3}"#).unwrap();
    let out = syzlab(&["raynaud", "--curve", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["result"]["status"], "confirmed");
    assert_eq!(doc["provenance"]["seed"], 3);

    std::fs::write(&path, r#"{"kind":"elliptic","r":3,"d":4,"prime":1000}"#).unwrap();
    assert_eq!(syzlab(&["raynaud", "--curve", path.to_str().unwrap()]).status.code(), Some(64));
}

#[test]
fn audit_and_slope() {
    let out = syzlab(&["audit", "--r-max", "6"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["counterexamples"], serde_json::json!([]));

    let out = syzlab(&["slope", "--g", "2", "--r", "3", "--d", "6"]);
    let res = &json(&out)["result"];
    assert_eq!(res["stability"], "strictly_semistable");
    assert_eq!(res["corank1_quotient"]["degree"], 8);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sketch.json");
    std::fs::write(
        &path,
        r#"{"components":[{"name":"C","bundle":{"degree":7,"rank":2}},{"name":"R","bundle":{"degree":4,"rank":2}}],
            "nodes":[{"components":[0,1]}],
            "subsheaves":[{"pieces":[{"degree":2,"rank":1},{"degree":1,"rank":1}],"codims":[1]}]}"#,
    )
    .unwrap();
    let out = syzlab(&["slope", "--sketch", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let res = &json(&out)["result"];
    assert_eq!(res["ray_open_hypotheses"], true);
    assert_eq!(res["subsheaves"][0]["mu_adj"], serde_json::json!({"num": 2, "den": 1}));
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(syzlab(&[]).status.code(), Some(64));
    assert_eq!(syzlab(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(syzlab(&["betti", "--r", "3"]).status.code(), Some(64));
    assert_eq!(syzlab(&["betti", "--kind", "elliptic", "--r", "3", "--d", "4", "--gamma", "5", "--prime", "12"]).status.code(), Some(64));
    assert_eq!(syzlab(&["hk", "--kind", "rational_normal", "--r", "3", "--d", "3"]).status.code(), Some(64));
    assert_eq!(syzlab(&["--help"]).status.code(), Some(0));
}

#[test]
fn compute_errors_exit_one() {
    // rho(20, 3, 9) < 0.
    assert_eq!(syzlab(&["plan", "--g", "20", "--r", "3", "--d", "9"]).status.code(), Some(1));
    // Too few points for the prediction to apply.
    assert_eq!(syzlab(&["mrc", "--kind", "rational_normal", "--r", "3", "--d", "3", "--gamma", "2"]).status.code(), Some(1));
}
