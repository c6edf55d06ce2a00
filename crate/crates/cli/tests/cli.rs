use std::path::PathBuf;

use discrim_cli::{run_command, CommandResult};
use serde_json::{json, Value};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> CommandResult {
    run_command(args)
}

fn ok(args: &[&str]) -> Value {
    let r = run(args);
    assert_eq!(r.code, 0, "{args:?}: {}", r.stderr);
    assert!(r.stdout.ends_with('\n'));
    serde_json::from_str(&r.stdout).unwrap()
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    let r = run(&["frobnicate"]);
    assert_eq!(r.code, 2);
    assert!(r.stdout.is_empty());
    assert_eq!(run(&[]).code, 2);
    assert_eq!(run(&["diff"]).code, 2);
}

#[test]
fn reproduce_worked_examples() {
    let r = run(&["reproduce", "example2"]);
    assert_eq!(r.stdout, "{\"bound\":45638,\"dim\":9}\n");
    let v = ok(&["reproduce", "table1"]);
    assert_eq!(v["grid"], json!([[0, 0, 0], [0, -16, -10]]));
    let r = run(&["reproduce", "table1"]);
    assert!(r.stderr.contains("-16"));
    assert!(run(&["--quiet", "reproduce", "table1"]).stderr.is_empty());
    assert_eq!(run(&["reproduce", "table9"]).code, 2);
}

#[test]
fn diff_on_integer_and_float_tables() {
    let f = data("table1.json");
    let v = ok(&["diff", "--function", &f, "--a", "0", "--b", "1"]);
    assert_eq!(
        v,
        json!({"cardinalities": [2, 3], "values": [0, 0, 0, 0, -16, -10]})
    );
    let r = run(&["diff", "--function", &f, "--a", "0", "--b", "1"]);
    assert!(r.stderr.contains("X0\\X1"));
    let v = ok(&["diff", "--function", &f, "--a", "0"]);
    assert_eq!(v["values"], json!([0, 0, 0, 4, -12, -6]));
    let v = ok(&["diff", "--function", &f, "--a", "", "--base", "1,2"]);
    assert_eq!(v["values"], json!([0, 0, 0, 0, 0, 0]));
    let v = ok(&["diff", "--function", &f, "--a", "1", "--base", "0,2"]);
    assert_eq!(v["values"], json!([-3, 3, 0, 7, -3, 0]));

    let g = data("table1_float.json");
    let v = ok(&["diff", "--function", &g, "--a", "0", "--b", "1"]);
    let vals: Vec<f64> = v["values"].as_array().unwrap().iter().map(num).collect();
    assert_eq!(vals, vec![0.0, 0.0, 0.0, 0.0, -16.5, -10.75]);
    assert!(run(&["diff", "--function", &g, "--a", "0", "--b", "1"])
        .stderr
        .contains("X0\\X1"));
}

#[test]
fn diff_input_errors() {
    let f = data("table1.json");
    assert_eq!(run(&["diff", "--function", &f, "--a", "2"]).code, 3);
    assert_eq!(run(&["diff", "--function", &f, "--a", "x"]).code, 3);
    assert_eq!(
        run(&["diff", "--function", &f, "--a", "0", "--base", "0,3"]).code,
        3
    );
    let r = run(&["diff", "--function", &data("bad_length.json"), "--a", "0"]);
    assert_eq!(r.code, 3);
    let r = run(&["diff", "--function", &data("truncated.json"), "--a", "0"]);
    assert_eq!(r.code, 3);
    assert!(
        r.stderr.contains("truncated.json") && r.stderr.contains("line"),
        "{}",
        r.stderr
    );
    let r = run(&["diff", "--function", &data("missing.json"), "--a", "0"]);
    assert_eq!(r.code, 3);
    assert!(r.stderr.contains("missing.json"));
}

#[test]
fn graph_commands() {
    let v = ok(&["cliques", "--graph", &data("cycle4.json")]);
    assert_eq!(v["cliques"], json!([[0, 1], [0, 3], [1, 2], [2, 3]]));
    assert_eq!(v["decomposable"], json!(false));
    assert!(v.get("clique_ordering").is_none());
    let v = ok(&["cliques", "--graph", &data("path3.json")]);
    assert_eq!(v["decomposable"], json!(true));
    assert_eq!(v["clique_ordering"].as_array().unwrap().len(), 2);

    let g = data("cycle4.json");
    let v = ok(&[
        "separates",
        "--graph",
        &g,
        "--a",
        "0",
        "--b",
        "2",
        "--d",
        "1,3",
    ]);
    assert_eq!(v, json!({"separates": true}));
    let v = ok(&[
        "separates",
        "--graph",
        &g,
        "--a",
        "0",
        "--b",
        "2",
        "--d",
        "1",
    ]);
    assert_eq!(v, json!({"separates": false}));
    assert_eq!(
        run(&["separates", "--graph", &g, "--a", "0", "--b", "0"]).code,
        3
    );

    let v = ok(&["moralize", "--dag", &data("dag.json")]);
    assert_eq!(
        v,
        json!({"n": 4, "edges": [[0, 1], [0, 2], [1, 2], [2, 3]]})
    );
}

#[test]
fn decompose_and_check_markov() {
    let f = data("cycle_f.json");
    let g = data("cycle4.json");
    let v = ok(&["decompose", "--function", &f]);
    let vars: Vec<Value> = v["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t["vars"].clone())
        .collect();
    assert_eq!(
        vars,
        vec![
            json!([]),
            json!([0]),
            json!([0, 1]),
            json!([0, 3]),
            json!([1, 2]),
            json!([2, 3])
        ]
    );
    let raw = ok(&["decompose", "--function", &f, "--raw"]);
    assert_eq!(raw["terms"].as_array().unwrap().len(), 16);
    let restricted = ok(&["decompose", "--function", &f, "--graph", &g]);
    assert_eq!(restricted["terms"], v["terms"]);

    let v = ok(&[
        "check-markov",
        "--function",
        &f,
        "--graph",
        &g,
        "--exhaustive",
    ]);
    assert_eq!(v["markov"], json!(true));
    assert_eq!(v["separation_check"], json!(true));
    assert_eq!(v["violations"], json!([]));

    let h = data("path_violation.json");
    let v = ok(&[
        "check-markov",
        "--function",
        &h,
        "--graph",
        &data("path3.json"),
    ]);
    assert_eq!(v["markov"], json!(false));
    assert_eq!(v["violations"], json!([{"pair": [0, 2], "max_abs": 1}]));
    let v = ok(&["decompose", "--function", &h]);
    assert_eq!(
        v["terms"],
        json!([{"vars": [0, 2], "values": [0, 0, 0, 1]}])
    );
    assert_eq!(
        run(&["check-markov", "--function", &h, "--graph", &g]).code,
        3
    );
}

#[test]
fn dimension_and_bound() {
    let g = data("cycle4.json");
    let v = ok(&["dim", "--graph", &g, "--cardinalities", "2,2,2,2"]);
    assert_eq!(v, json!({"dim": 9, "decomposable": false}));
    let v = ok(&["bound", "--graph", &g, "--cardinalities", "2,2,2,2"]);
    assert_eq!(v, json!({"bound": 45638, "cells": 16, "dim": 9}));
    let v = ok(&[
        "bound",
        "--graph",
        &data("edgeless2.json"),
        "--cardinalities",
        "2,2",
    ]);
    assert_eq!(v["bound"], json!(14));
    assert_eq!(
        run(&["dim", "--graph", &g, "--cardinalities", "2,2"]).code,
        3
    );
    assert_eq!(
        run(&["dim", "--graph", &g, "--cardinalities", "2,0,2,2"]).code,
        3
    );
}

#[test]
fn dimension_guard_is_a_math_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("complete3.json");
    std::fs::write(&path, r#"{"n":3,"edges":[[0,1],[0,2],[1,2]]}"#).unwrap();
    let r = run(&[
        "dim",
        "--graph",
        path.to_str().unwrap(),
        "--cardinalities",
        "200,200,200",
    ]);
    assert_eq!(r.code, 4, "{}", r.stderr);
}

#[test]
fn xor_scan_on_decisions_and_functions() {
    let v = ok(&["xor-scan", "--input", &data("xor2.json")]);
    let xors = v["xors"].as_array().unwrap();
    assert_eq!(xors.len(), 3);
    assert_eq!(xors[2]["vars"], json!([0, 1]));
    let v = ok(&[
        "xor-scan",
        "--input",
        &data("cycle_f.json"),
        "--max-order",
        "2",
    ]);
    for w in v["xors"].as_array().unwrap() {
        assert!(w["vars"].as_array().unwrap().len() <= 2);
    }
    let v = ok(&[
        "xor-scan",
        "--input",
        &data("xor2.json"),
        "--max-order",
        "0",
    ]);
    assert_eq!(v["xors"], json!([]));
    assert_eq!(
        run(&[
            "xor-scan",
            "--input",
            &data("xor2.json"),
            "--max-order",
            "3"
        ])
        .code,
        3
    );
}

#[test]
fn classifier_commands() {
    let m = data("model2.json");
    let v = ok(&["classify", "--model", &m, "--x", "0,0"]);
    assert_eq!(v["class"], json!(1));
    assert!((num(&v["f"]) - 2f64.ln()).abs() < 1e-15);
    let v = ok(&["classify", "--model", &m, "--x", "1,1"]);
    assert_eq!(v["class"], json!(-1));
    assert_eq!(run(&["classify", "--model", &m, "--x", "0,2"]).code, 3);
    let dead = data("model_dead.json");
    assert_eq!(run(&["classify", "--model", &dead, "--x", "1"]).code, 4);

    let v = ok(&["check-ci", "--model", &m, "--a", "0", "--b", "1"]);
    assert_eq!(v["holds"], json!(false));
    assert!(num(&v["toric_residual"]) > 0.1);
    let v = ok(&[
        "verify-markov",
        "--model",
        &m,
        "--graph",
        &data("edgeless2.json"),
    ]);
    assert_eq!(v, json!({"markov": false, "violations": [[0, 1]]}));
    let v = ok(&[
        "verify-markov",
        "--model",
        &m,
        "--graph",
        &data("complete2.json"),
    ]);
    assert_eq!(v["markov"], json!(true));
}

#[test]
fn build_round_trips_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("model.json");
    let out_s = out.to_str().unwrap();
    let f = data("f2.json");
    let r = run(&[
        "build",
        "--function",
        &f,
        "--g",
        &data("g2.json"),
        "--graph",
        &data("complete2.json"),
        "--output",
        out_s,
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    // Classifying every cell recovers f.
    let fvals = [0.5, -0.25, 1.0, 0.75];
    for (k, x) in ["0,0", "0,1", "1,0", "1,1"].iter().enumerate() {
        let v = ok(&["classify", "--model", out_s, "--x", x]);
        assert!((num(&v["f"]) - fvals[k]).abs() < 1e-12);
    }
    let v = ok(&[
        "verify-markov",
        "--model",
        out_s,
        "--graph",
        &data("complete2.json"),
    ]);
    assert_eq!(v["markov"], json!(true));
    // Saving what was loaded reproduces the bytes.
    let again = dir.path().join("again.json");
    let p = discrim_core::io::classifier_from_json(&text).unwrap();
    std::fs::write(
        &again,
        discrim_core::io::to_canonical_string(&discrim_core::io::classifier_to_json(&p).unwrap()),
    )
    .unwrap();
    assert_eq!(std::fs::read_to_string(&again).unwrap(), text);

    // f2 has an interaction, so the edgeless graph rejects it.
    let r = run(&[
        "build",
        "--function",
        &f,
        "--graph",
        &data("edgeless2.json"),
    ]);
    assert_eq!(r.code, 4);
}

#[test]
fn fit_ipf_from_csv() {
    let f = data("f2.json");
    let g = data("complete2.json");
    let v = ok(&[
        "fit-ipf",
        "--function",
        &f,
        "--graph",
        &g,
        "--data",
        &data("data4.csv"),
        "--trace",
    ]);
    assert_eq!(v["report"]["converged"], json!(true));
    assert_eq!(v["report"]["iterations"], json!(1));
    assert_eq!(v["report"]["loglik_trace"].as_array().unwrap().len(), 1);
    let p_plus: Vec<f64> = v["model"]["p_plus"]
        .as_array()
        .unwrap()
        .iter()
        .map(num)
        .collect();
    let p_minus: Vec<f64> = v["model"]["p_minus"]
        .as_array()
        .unwrap()
        .iter()
        .map(num)
        .collect();
    // Columns smoker (yes, no) and age (old, young); every cell seen once.
    for k in 0..4 {
        assert!((p_plus[k] + p_minus[k] - 0.25).abs() < 1e-14);
    }
    let v = ok(&[
        "fit-ipf",
        "--function",
        &f,
        "--graph",
        &g,
        "--data",
        &data("data4.csv"),
    ]);
    assert!(v["report"].get("loglik_trace").is_none());

    let v = ok(&[
        "fit-ipf",
        "--function",
        &f,
        "--graph",
        &g,
        "--data",
        &data("data01.csv"),
        "--class-col",
        "y",
        "--zero-one",
        "--tol",
        "1e-10",
        "--max-sweeps",
        "50",
    ]);
    assert_eq!(v["report"]["converged"], json!(true));
    let v = ok(&[
        "fit-ipf",
        "--function",
        &f,
        "--graph",
        &g,
        "--data",
        &data("data4.csv"),
        "--labels",
        &data("labels.json"),
    ]);
    assert_eq!(
        v["model"]["labels"],
        json!([["no", "yes"], ["young", "old"]])
    );
}

#[test]
fn fit_ipf_input_errors() {
    let f = data("f2.json");
    let g = data("complete2.json");
    let labels = data("labels.json");
    let r = run(&[
        "fit-ipf",
        "--function",
        &f,
        "--graph",
        &g,
        "--data",
        &data("data_unseen.csv"),
        "--labels",
        &labels,
    ]);
    assert_eq!(r.code, 3);
    assert!(
        r.stderr.contains("maybe") && r.stderr.contains("line 3"),
        "{}",
        r.stderr
    );
    let r = run(&[
        "fit-ipf",
        "--function",
        &f,
        "--graph",
        &g,
        "--data",
        &data("data01.csv"),
    ]);
    assert_eq!(r.code, 3);
    let r = run(&[
        "fit-ipf",
        "--function",
        &f,
        "--graph",
        &g,
        "--data",
        &data("data4.csv"),
        "--tol",
        "0",
    ]);
    assert_eq!(r.code, 3);
    let r = run(&[
        "fit-ipf",
        "--function",
        &f,
        "--graph",
        &data("edgeless2.json"),
        "--data",
        &data("data4.csv"),
    ]);
    assert_eq!(r.code, 4);
}

#[test]
fn binary_exit_codes() {
    let exe = env!("CARGO_BIN_EXE_discrim");
    let out = std::process::Command::new(exe)
        .args(["reproduce", "example2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "{\"bound\":45638,\"dim\":9}\n"
    );
    let out = std::process::Command::new(exe)
        .arg("nope")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let out = std::process::Command::new(exe)
        .args(["diff", "--function", &data("bad_length.json"), "--a", "0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn payloads_are_byte_stable() {
    let f = data("cycle_f.json");
    let a = run(&["decompose", "--function", &f]).stdout;
    let b = run(&["decompose", "--function", &f]).stdout;
    assert_eq!(a, b);
    let dir = tempfile::tempdir().unwrap();
    // A decomposition written, reloaded and written again is unchanged.
    let fac: discrim_core::Factorization = discrim_core::io::factorization_from_json(&a).unwrap();
    let again = discrim_core::io::to_canonical_string(
        &discrim_core::io::factorization_to_json(&fac).unwrap(),
    );
    assert_eq!(again, a);
    let path = dir.path().join("f.json");
    std::fs::write(&path, &a).unwrap();
}
