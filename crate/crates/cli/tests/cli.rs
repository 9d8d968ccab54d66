use std::process::{Command, Output};

use serde_json::{json, Value};
use wald_cli::{emit, Report, Row, SessionConfig};

fn run(bin: &str, args: &[&str]) -> Output {
    let path = match bin {
        "wald" => env!("CARGO_BIN_EXE_wald"),
        "hecke" => env!("CARGO_BIN_EXE_hecke"),
        _ => env!("CARGO_BIN_EXE_quadform"),
    };
    let mut cmd = Command::new(path);
    cmd.args(args);
    for (k, _) in std::env::vars() {
        if k.starts_with("WALD_") {
            cmd.env_remove(k);
        }
    }
    cmd.output().unwrap()
}

fn records(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

fn rows(out: &Output) -> Vec<Value> {
    records(out).into_iter().filter(|r| r["record"] == "row").collect()
}

#[test]
fn prop17_split_small() {
    let out = run("wald", &["verify-prop17", "--q", "3", "--kind", "split", "--dmax", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = rows(&out);
    assert_eq!(rows.len(), 10);
    for r in &rows {
        let (d, m) = (r["cell"]["d"].as_u64().unwrap(), r["cell"]["m"].as_u64().unwrap());
        assert_eq!(r["expected"], json!(d - m + 1));
        assert_eq!(r["pass"], json!(true));
        assert!(!r["provenance"].as_str().unwrap().is_empty());
    }
    let recs = records(&out);
    assert_eq!(recs[0]["record"], "header");
    assert_eq!(recs.last().unwrap()["passed"], 10);
}

#[test]
fn counts_campaign() {
    let out = run("wald", &["campaign", "counts", "--q", "3", "--dmax", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let got: Vec<Value> = rows(&out).iter().map(|r| r["computed"].clone()).collect();
    assert_eq!(got, vec![json!(4), json!(12), json!(36)]);
}

#[test]
fn isotropic_table() {
    for q in ["3", "5"] {
        let out = run("wald", &["isotropic", "--q", q]);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(rows(&out).len(), 5);
    }
}

#[test]
fn reports_do_not_depend_on_workers() {
    let base = ["--q", "3", "--kind", "ramified", "--seed", "11", "--D", "4", "--draws", "6"];
    let mut outputs = Vec::new();
    for workers in ["1", "3", "3"] {
        let mut args = vec!["ke"];
        args.extend(base);
        args.extend(["--workers", workers]);
        let out = run("wald", &args);
        assert_eq!(out.status.code(), Some(0));
        outputs.push(out.stdout);
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[1], outputs[2]);

    let q1 = run("wald", &["quadform-orbits", "--transforms", "20", "--seed", "5", "--workers", "1"]);
    let q4 = run("wald", &["quadform-orbits", "--transforms", "20", "--seed", "5", "--workers", "4"]);
    assert_eq!(q1.stdout, q4.stdout);
}

#[test]
fn seed_changes_draws() {
    let a = run("wald", &["ke", "--D", "3", "--draws", "2", "--seed", "1"]);
    let b = run("wald", &["ke", "--D", "3", "--draws", "2", "--seed", "2"]);
    assert_ne!(a.stdout, b.stdout);
    assert_eq!(records(&a)[0]["seed"], 1);
}

#[test]
fn config_errors_exit_2() {
    assert_eq!(run("wald", &["counts", "--q", "9"]).status.code(), Some(2));
    assert_eq!(run("wald", &["counts", "--workers", "0"]).status.code(), Some(2));
    assert_eq!(run("wald", &["ke", "--r", "2"]).status.code(), Some(2));
    assert_eq!(run("wald", &["campaign", "nope"]).status.code(), Some(2));
    let bad = run("quadform", &["classify", "--matrix", "[[1,2],[0,1]]"]);
    assert_eq!(bad.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&bad.stderr).unwrap();
    assert!(err["error"].is_string());
}

#[test]
fn env_overrides_flags() {
    let path = env!("CARGO_BIN_EXE_wald");
    let out = Command::new(path).args(["counts", "--dmax", "1"]).env("WALD_Q", "5").output().unwrap();
    let recs = records(&out);
    assert_eq!(recs[0]["q"], 5);
    assert_eq!(recs[1]["computed"], 6);
}

#[test]
fn csv_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.csv");
    let out = run("wald", &["counts", "--dmax", "2", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "campaign,cell,claim,expected,computed,pass,provenance,detail");
    assert_eq!(lines.count(), 2);
}

#[test]
fn wd_single_degree() {
    let out = run("wald", &["wd", "--d", "3", "--kind", "ramified", "--q", "3"]);
    let rows = rows(&out);
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["computed"]["support"], json!([0, 1, 2, 3]));
    assert!(rows[0]["detail"]["top_coefficient"].is_string());
}

#[test]
fn ke_explicit_parameters() {
    let out = run("wald", &["ke", "--D", "6", "--e1", "2/3", "--alpha", "5", "--beta", "7/2"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = rows(&out);
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["detail"]["e2"], "105/4");
}

#[test]
fn quadform_classify() {
    let cases = [
        ("[[0,1],[1,0]]", json!({"a": 0, "b": 0, "delta": "NonSquare", "cover": "SplitCover"})),
        ("[[1,0],[0,[0,1]]]", json!({"a": 1, "b": 0, "delta": "Square", "cover": "RamifiedCover"})),
        ("[[[0,1],[0,1]],[[0,1],{\"offset\":1,\"coeffs\":[1,1]}]]", json!({"a": 2, "b": 1, "delta": "Square", "cover": "RamifiedCover"})),
    ];
    for (m, expected) in cases {
        let out = run("quadform", &["classify", "--q", "3", "--matrix", m]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        let v: Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(v, expected, "{m}");
    }
    let out = run("quadform", &["classify", "--q", "3", "--matrix", "[[1,0],[0,1]]"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["cover"], "UnramifiedNonsplitCover");
    assert!(v["note"].is_string());
}

#[test]
fn hecke_convolve() {
    let out = run("hecke", &["convolve", "--q", "3", "--lhs", "(1,0)", "--rhs", "(1,0)"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let terms = v["product"]["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 2);
    assert_eq!(terms[0]["coweight"], json!({"a1": 1, "a2": 1}));
    assert_eq!(terms[0]["scalar"][0]["num_a"], "4");
    let sat = run("hecke", &["convolve", "--q", "3", "--lhs", "1,0", "--rhs", "2,0", "--satake"]);
    let v: Value = serde_json::from_slice(&sat.stdout).unwrap();
    assert_eq!(v["satake_coordinates"], json!({"(2,1)": "1", "(3,0)": "1"}));
}

#[test]
fn failing_rows_exit_1() {
    use clap::Parser;
    #[derive(Parser)]
    struct Wrap {
        #[command(flatten)]
        cfg: SessionConfig,
    }
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.ndjson");
    let cfg = Wrap::parse_from(["x", "--out", out.to_str().unwrap()]).cfg;
    let report = Report {
        header: json!({"campaign": "synthetic"}),
        rows: vec![Row::new(json!({"i": 0}), "one equals two", json!(1), json!(2), "derived oracle")],
    };
    assert_eq!(emit(&report, &cfg).unwrap(), 1);
    let text = std::fs::read_to_string(out).unwrap();
    assert!(text.lines().last().unwrap().contains("\"failed\":1"));
}
