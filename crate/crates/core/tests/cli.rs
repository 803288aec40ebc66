use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn thompson(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thompson"))
        .args(args)
        .env("THOMPSON_LOG", "warn")
        .output()
        .expect("binary runs")
}

fn report(args: &[&str]) -> (i32, Value) {
    let out = thompson(args);
    let code = out.status.code().expect("exited normally");
    let json = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not a report ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    });
    (code, json)
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_str().unwrap().to_string())
        .collect()
}

#[test]
fn eval_compose_invert() {
    let (code, r) = report(&["eval", "--map", "A", "--at", "1/2"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["value"], "1/4");
    assert_eq!(r["command"], "eval");

    let (_, r) = report(&["eval", "--word", "B A^-1", "--at", "1/4"]);
    assert_eq!(r["result"]["value"], "1/2");

    let (code, r) = report(&["compose", "--word", "A A^-1"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["identity"], true);
    assert_eq!(
        r["result"]["map"]["breakpoints"].as_array().unwrap().len(),
        2
    );

    let (code, r) = report(&["invert", "--map", "B"]);
    assert_eq!(code, 0);
    assert_eq!(r["verdicts"][0]["name"], "inverse_verified");
}

#[test]
fn member_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let third = write(
        dir.path(),
        "third.json",
        r#"{"breakpoints":[["0","0"],["1/3","1/9"],["1","1"]]}"#,
    );
    let (code, r) = report(&["member", "--map", &format!("@{third}"), "--n", "3"]);
    assert_eq!(code, 1);
    assert_eq!(r["result"]["verdict"], false);
    assert!(r["result"]["failure_reason"]
        .as_str()
        .unwrap()
        .contains("4/3"));

    let (code, r) = report(&["member", "--map", "A_{d,p}(1/3;1)", "--n", "3"]);
    assert_eq!(code, 0);
    assert_eq!(
        r["result"]["slope_exponents"],
        serde_json::json!([-1, 0, 1])
    );
}

#[test]
fn usage_and_parse_errors_exit_two() {
    for args in [
        &["eval", "--map", "A", "--at", "1/x"][..],
        &["eval", "--map", "A"],
        &["compose", "--word", "A^2"],
        &["eval", "--map", "Q", "--at", "1/2"],
        &["relations", "--n", "3"],
        &["parity", "--n", "2", "--d", "1/4", "--p", "2"],
        &["member", "--map", "@/nonexistent/map.json"],
        &["frobnicate"],
    ] {
        let out = thompson(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
    let out = thompson(&["compose", "--word", "A B^2"]);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("position 4"), "{err}");
}

#[test]
fn relations() {
    let (code, r) = report(&["relations", "--n", "2", "--max-index", "6"]);
    assert_eq!(code, 0);
    assert_eq!(r["verdicts"].as_array().unwrap().len(), 21 + 2);

    let (code, r) = report(&["relations", "--n", "2", "--max-index", "0"]);
    assert_eq!(code, 0);
    assert_eq!(
        r["result"]["presentation"]["relations"],
        serde_json::json!([])
    );

    let dir = tempfile::tempdir().unwrap();
    let seeds = write(
        dir.path(),
        "seeds.json",
        r#"{"n":2,"seeds":[
            {"breakpoints":[["0","0"],["1/2","1/4"],["3/4","1/2"],["1","1"]]},
            {"breakpoints":[["0","0"],["1/2","1/2"],["3/4","5/8"],["7/8","3/4"],["1","1"]]}
        ]}"#,
    );
    let (code, r) = report(&[
        "relations",
        "--n",
        "2",
        "--max-index",
        "3",
        "--seeds",
        &seeds,
    ]);
    assert_eq!(code, 0);
    assert_eq!(r["verdicts"].as_array().unwrap().len(), 6);
}

#[test]
fn graphing_commands() {
    let (code, r) = report(&["graphing", "cost"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["cost"], "1");

    let (code, r) = report(&["graphing", "express", "--x", "1/3", "--word", "B A"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["verified"], true);

    let (code, r) = report(&["graphing", "treeing", "--max-len", "7", "--jobs", "4"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["words_checked"], 117186);
    assert_eq!(
        r["result"]["words_with_fixed_interval"],
        serde_json::json!([])
    );

    let dir = tempfile::tempdir().unwrap();
    let identity = write(
        dir.path(),
        "identity.json",
        r#"{"n":2,"parts":[{"name":"id","domain":["0","1"],"map":{"breakpoints":[["0","0"],["1","1"]]}}]}"#,
    );
    let (code, r) = report(&["graphing", "--file", &identity, "treeing", "--max-len", "1"]);
    assert_eq!(code, 1);
    assert_eq!(r["result"]["treeing_consistent"], false);
}

#[test]
fn dynamics_commands() {
    let (code, r) = report(&["orbit", "--x", "1/2", "--n", "2", "--depth", "2"]);
    assert_eq!(code, 0);
    let points: Vec<String> = r["result"]["orbit"]["nodes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|n| n["point"].as_str().unwrap().to_string())
        .collect();
    for p in ["1/4", "3/4", "1/8", "7/8"] {
        assert!(
            points.contains(&p.to_string()),
            "{p} missing from {points:?}"
        );
    }

    let (code, r) = report(&["cocycle", "--x", "1/3", "--word", "A"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["rows"][0]["exponent"], 1);

    let (code, r) = report(&["cocycle", "--x", "2/7", "--depth", "3"]);
    assert_eq!(code, 0);
    assert!(r["result"]["rows"].as_array().unwrap().len() > 10);

    let (code, r) = report(&[
        "sn", "--x", "1/3", "--d", "1/4", "--p-from", "1", "--p-to", "20",
    ]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["points"].as_array().unwrap().len(), 20);

    let (code, r) = report(&[
        "parity",
        "--n",
        "3",
        "--d",
        "1/3",
        "--k",
        "1",
        "--p",
        "1",
        "--max-len",
        "5",
    ]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["zero_witnesses"], true);
    assert_eq!(
        r["result"]["certificates_agreeing"],
        r["result"]["words_tested"]
    );
    assert_eq!(
        strings(&r["result"]["alphabet"]),
        ["A_{d,p}(1/3;1)", "A_{d,p}(2/3;1)", "A_{d,p}(1/9;2)"]
    );

    let (code, r) = report(&["translate", "--from", "1/4", "--to", "1/2"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["witnesses"][0], serde_json::json!([["A", -1]]));
}

#[test]
fn reports_are_deterministic_and_persisted() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let args = [
        "--out",
        out.to_str().unwrap(),
        "orbit",
        "--x",
        "1/3",
        "--depth",
        "3",
    ];
    let first = thompson(&args);
    let second = thompson(&args);
    let strip = |bytes: &[u8]| {
        let mut v: Value = serde_json::from_slice(bytes).unwrap();
        v.as_object_mut().unwrap().remove("elapsed_seconds");
        v
    };
    assert_eq!(strip(&first.stdout), strip(&second.stdout));
    assert_eq!(std::fs::read(&out).unwrap(), second.stdout);
}

#[test]
fn decimal_flag_is_opt_in() {
    let (_, r) = report(&["eval", "--map", "A", "--at", "1/3"]);
    assert!(r.get("decimal_approximations").is_none());
    let (_, r) = report(&["--decimal", "eval", "--map", "A", "--at", "1/3"]);
    assert_eq!(r["result"]["value"], "1/6");
    let approx = r["decimal_approximations"]["1/6"].as_f64().unwrap();
    assert!((approx - 1.0 / 6.0).abs() < 1e-12);
}
