use std::process::Command;

use delta_wb::{run, EXIT_DOMAIN, EXIT_OK, EXIT_USAGE};
use serde_json::Value;

fn json(args: &[&str]) -> (i32, Value) {
    let mut argv = vec!["delta-wb", "--json"];
    argv.extend_from_slice(args);
    let out = run(argv);
    let v = if out.stdout.is_empty() {
        Value::Null
    } else {
        serde_json::from_str(&out.stdout).unwrap()
    };
    (out.code, v)
}

#[test]
fn exact_delta_of_evens() {
    let (code, v) = json(&["delta", "--set", "periodic p=2 pos={0} neg={0}", "--mode", "exact"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["result"]["delta"], "periodic p=2 pos={0} neg={0}");
    assert_eq!(v["result"]["verdict"], "proven");
}

#[test]
fn windowed_delta_of_powers_with_offsets() {
    let (code, v) = json(&[
        "delta",
        "--set",
        "gen pow10_plus_n",
        "--mode",
        "window",
        "--window",
        "100000000",
        "--threshold",
        "10",
    ]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["result"]["delta"]["members"], serde_json::json!(["0"]));
    assert_eq!(v["parameters"]["window"]["source"], "flag");
    assert_eq!(v["parameters"]["threshold"]["value"], 10);
}

#[test]
fn usage_errors_exit_two_and_list_flags() {
    let out = run(["delta-wb", "delta", "--set", "gen pow10", "--frobnicate"]);
    assert_eq!(out.code, EXIT_USAGE);
    assert!(out.stderr.contains("--frobnicate"));
    assert!(out.stderr.contains("--mode"));
    assert!(out.stderr.contains("--window"));
    assert_eq!(run(["delta-wb", "teleport"]).code, EXIT_USAGE);
    assert_eq!(
        run(["delta-wb", "classify", "--set", "gen pow10", "--props", "tall"]).code,
        EXIT_USAGE
    );
}

#[test]
fn domain_errors_exit_one() {
    let (code, v) = json(&["delta", "--set", "periodic p=2 pos={5} neg={}"]);
    assert_eq!(code, EXIT_DOMAIN);
    assert_eq!(v["result"]["error"]["kind"], "Parse");
    assert!(v["result"]["error"]["message"]
        .as_str()
        .unwrap()
        .contains("residue out of range"));
    let (code, v) = json(&["delta", "--set", "finite {1,"]);
    assert_eq!(code, EXIT_DOMAIN);
    assert_eq!(v["result"]["error"]["kind"], "Parse");
    let (code, v) = json(&["delta-large", "--set", "periodic p=2 pos={0} neg={0}", "--cover", "0"]);
    assert_eq!(code, EXIT_DOMAIN);
    assert_eq!(v["result"]["error"]["kind"], "CoverNotEstablished");
}

#[test]
fn reports_are_byte_identical_across_runs_and_executors() {
    let args = [
        "delta-wb",
        "--json",
        "delta",
        "--set",
        "periodic p=6 pos={0,1,4} neg={2}",
        "--mode",
        "stabilized",
    ];
    let a = run(args);
    let b = run(args);
    let mut serial = args.to_vec();
    serial.push("--serial");
    let c = run(serial);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let text = run(args[..1].iter().chain(&args[2..]).copied().collect::<Vec<_>>());
    assert!(text.stdout.contains("result.delta.members: ["));
}

#[test]
fn cover_and_delta_large() {
    let (_, v) = json(&["cover", "--set", "periodic p=3 pos={0} neg={0}"]);
    assert_eq!(v["result"]["shifts"], serde_json::json!(["0", "-1", "1"]));
    assert_eq!(v["certificates"][0]["check"]["outcome"]["kind"], "covers");
    let (code, v) = json(&["delta-large", "--set", "periodic p=3 pos={0} neg={0}"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["result"]["cert"]["verdict"], "proven");
    let (_, v) = json(&[
        "delta-large",
        "--set",
        "periodic p=4 pos={0} neg={2}",
        "--via",
        "maximal",
    ]);
    assert_eq!(v["result"]["cert"]["size"], 4);
}

#[test]
fn partition_and_build() {
    let (code, v) = json(&[
        "partition",
        "--cover-set",
        "periodic p=1 pos={0} neg={0}",
        "--cover",
        "0",
        "--parts",
        "periodic p=2 pos={0} neg={0};periodic p=2 pos={1} neg={1}",
    ]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["result"]["cert"]["index"], 2);
    assert_eq!(v["result"]["cert"]["shifts"], serde_json::json!(["0", "1"]));
    assert_eq!(v["result"]["cert"]["bound"], "2");
    let (code, v) = json(&[
        "build-y",
        "--ambient",
        "periodic p=2 pos={1} neg={1}",
        "--target",
        "finite {0}",
        "--steps",
        "8",
    ]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["certificates"][0]["audit"]["status"], "passed");
    assert_eq!(v["certificates"][0]["audit"]["points"], 8);
    assert_eq!(v["result"]["build"]["placements"].as_array().unwrap().len(), 8);
}

#[test]
fn classify_reports_each_property() {
    let (code, v) = json(&[
        "classify",
        "--set",
        "periodic p=2 pos={0} neg={0}",
        "--x",
        "periodic p=2 pos={0} neg={0}",
    ]);
    assert_eq!(code, EXIT_OK);
    let p = &v["result"]["properties"];
    assert_eq!(p["sparse"]["search"]["found"], false);
    assert_eq!(p["sparse"]["propagation"]["differences_in_delta"]["holds"], true);
    assert_eq!(p["nabla_thin"]["verdict"], "refuted");
    assert_eq!(p["almost_p_small"]["verdict"], "refuted");
    assert_eq!(p["weakly_p_small"]["found"], false);
    let (_, a) = json(&["classify", "--corpus", "4", "--seed", "3", "--props", "nabla-thin"]);
    let (_, b) = json(&["classify", "--corpus", "4", "--seed", "3", "--props", "nabla-thin"]);
    assert_eq!(a, b);
    assert_eq!(a["result"]["sets"].as_array().unwrap().len(), 4);
}

#[test]
fn fixtures_reproduce_from_an_overridden_directory() {
    let dir = std::env::temp_dir().join(format!("delta-wb-fixtures-{}", std::process::id()));
    let bin = env!("CARGO_BIN_EXE_delta-wb");
    let missing = Command::new(bin)
        .args(["reproduce", "example-union"])
        .env("DELTA_WB_FIXTURES", &dir)
        .output()
        .unwrap();
    assert_eq!(missing.status.code(), Some(EXIT_DOMAIN));
    let bless = Command::new(bin)
        .args(["reproduce", "example-union", "--bless"])
        .env("DELTA_WB_FIXTURES", &dir)
        .output()
        .unwrap();
    assert_eq!(bless.status.code(), Some(EXIT_OK));
    let path = dir.join("example-union.json");
    let stored = std::fs::read_to_string(&path).unwrap();
    std::fs::write(&path, stored.replace("\"threshold\": 4", "\"threshold\": 5")).unwrap();
    let diff = Command::new(bin)
        .args(["--json", "reproduce", "example-union"])
        .env("DELTA_WB_FIXTURES", &dir)
        .output()
        .unwrap();
    assert_eq!(diff.status.code(), Some(EXIT_DOMAIN));
    let v: Value = serde_json::from_slice(&diff.stdout).unwrap();
    assert_eq!(v["result"]["status"], "mismatch");
    assert!(v["result"]["diff"][0].as_str().unwrap().contains("threshold"));
    std::fs::remove_dir_all(&dir).unwrap();
}
