use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spin-gpc"))
        .args(args)
        .env_remove("SPIN_GPC_CATALOG_DIR")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let out = run(&full);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stderr));
    });
    (v, out.status.code().unwrap())
}

fn exact(v: &Value) -> &str {
    v["exact"].as_str().expect("exact number")
}

#[test]
fn catalog_listing() {
    let (v, code) = json(&["catalog", "--setting", "4,7,2"]);
    assert_eq!(code, 0);
    assert_eq!(v["gpcs"].as_array().unwrap().len(), 10);
    let (all, _) = json(&["catalog"]);
    let names: Vec<&str> = all["settings"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["setting"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"(N=4, d=8, S=1)"));
    let out = run(&["catalog", "--setting", "9,9,1"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn external_catalog_directory() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("extra.gpc"), "setting 5 7 1\ngpc 2 1 1 0 0 0 0 0 leq\n").unwrap();
    std::fs::write(dir.path().join("ignored.txt"), "not a catalog").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_spin-gpc"))
        .args(["--format", "json", "catalog", "--setting", "5,7,1"])
        .env("SPIN_GPC_CATALOG_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["gpcs"].as_array().unwrap().len(), 1);
    assert_eq!(run(&["catalog", "--setting", "5,7,1"]).status.code(), Some(3));
}

#[test]
fn analyze_highest_weight_is_pinned_everywhere() {
    let (v, code) = json(&["analyze", &data("data/highest_4_4.txt")]);
    assert_eq!(code, 0);
    let gpcs = v["vectors"][0]["gpcs"].as_array().unwrap();
    assert_eq!(gpcs.len(), 4);
    for g in gpcs {
        assert_eq!(exact(&g["facet_distance"]), "0");
        assert_eq!(g["flag"], "PINNED");
    }
}

#[test]
fn analyze_borland_dennis_orbital_vector() {
    let (v, _) = json(&["analyze", &data("data/bd_orbital.txt")]);
    let gpcs = &v["vectors"][0]["gpcs"];
    assert_eq!(exact(&gpcs[0]["residual"]), "1");
    assert_eq!(exact(&gpcs[1]["residual"]), "3/100");
    assert_eq!(gpcs[1]["flag"], "NONE");
    let (v, _) = json(&["analyze", &data("data/bd_orbital.txt"), "--qp-tol", "0.05"]);
    assert_eq!(v["vectors"][0]["gpcs"][1]["flag"], "QUASIPINNED");
}

#[test]
fn malformed_input_reports_position() {
    let out = run(&["analyze", &data("data/malformed.txt")]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 4, column 13"), "{err}");
}

#[test]
fn truncation_sandwich_in_report() {
    let (v, _) = json(&["analyze", &data("data/synthetic_4_5.txt"), "--d-prime", "4"]);
    let row = &v["vectors"][0];
    let t = &row["truncation"][0];
    assert_eq!(t["status"], "OK");
    let f = |x: &Value| x["decimal"].as_f64().unwrap();
    let full = f(&row["f_min"]);
    assert!(0.0 <= f(&t["lower_bound"]));
    assert!(f(&t["lower_bound"]) <= full && full <= f(&t["upper_bound"]));
    assert_eq!(exact(&t["epsilon_prime"]), "3/20");
}

#[test]
fn qparam_golden() {
    for (args, golden) in [
        (vec!["qparam", "data/synthetic_4_5.txt"], "golden/qparam_synthetic_4_5.json"),
        (
            vec!["analyze", "data/synthetic_4_5.txt", "--d-prime", "4"],
            "golden/analyze_synthetic_4_5.json",
        ),
    ] {
        let mut full = vec!["--format".to_string(), "json".to_string(), args[0].to_string(), data(args[1])];
        full.extend(args[2..].iter().map(|s| s.to_string()));
        let out = Command::new(env!("CARGO_BIN_EXE_spin-gpc")).args(&full).output().unwrap();
        let expected = std::fs::read_to_string(data(golden)).unwrap();
        assert_eq!(String::from_utf8(out.stdout).unwrap(), expected, "{golden}");
    }
    let (v, _) = json(&["qparam", &data("data/synthetic_4_5.txt")]);
    let q = v["vectors"][0]["Q"].as_f64().unwrap();
    assert_eq!(format!("{q:.12}"), "0.602059991328");
}

#[test]
fn qparam_flags() {
    let (v, code) = json(&["qparam", &data("data/pinned_off_face.txt")]);
    assert_eq!(code, 0);
    assert_eq!(v["vectors"][0]["Q"], "+inf");
    let (v, _) = json(&["qparam", &data("data/on_face.txt")]);
    assert_eq!(v["vectors"][0]["Q"], "TRIVIALLY_PINNED");
    let (v, code) = json(&["qparam", &data("data/uncovered_4_8.txt")]);
    assert_eq!(code, 3);
    assert_eq!(v["status"], "NOT_APPLICABLE");
}

#[test]
fn selection_rules() {
    let weights = |v: &Value| -> Vec<Vec<u64>> {
        v.as_array()
            .unwrap()
            .iter()
            .map(|w| w["weight"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect())
            .collect()
    };
    let (v, _) = json(&["selection", "--setting", "3,3,1", "--gpc", "1,2"]);
    assert_eq!(weights(&v["gpcs"][0]["selected"]), vec![vec![2, 1, 0], vec![1, 0, 2]]);
    assert_eq!(v["gpcs"][0]["pinned_dimension"], 2);
    assert_eq!(weights(&v["joint"]["selected"]), vec![vec![2, 1, 0]]);
    assert_eq!(v["joint"]["pinned_dimension"], 1);
    let (v, _) = json(&["selection", "--setting", "4,4,0"]);
    assert_eq!(weights(&v["interior"]), vec![vec![1, 1, 1, 1]]);
    assert_eq!(v["lattice"].as_array().unwrap().len(), 19);
}

#[test]
fn sandbox_bd_table() {
    let (v, _) = json(&["sandbox", "bd", "--epsilon", "0.1"]);
    let r = &v["residuals"];
    assert_eq!(exact(&r["D"]), "0");
    assert_eq!(exact(&r["D2"]), "3/100");
    assert_eq!(exact(&r["X2"]), "1/100");
}

#[test]
fn sandbox_flow_csv() {
    let out = run(&["sandbox", "flow", "--setting", "3,3,1", "--seed", "5", "--record-every", "50"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,D,variance,delta,bound"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert!(rows.len() > 2);
    for r in &rows {
        assert!(r[4] + 1e-8 >= r[3]);
    }
    assert!(rows.last().unwrap()[1] <= 1e-10);
}

#[test]
fn sandbox_verify_variance() {
    let (v, code) = json(&["sandbox", "verify-variance", "--setting", "3,3,1", "--count", "4", "--gpc", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["checks"].as_array().unwrap().len(), 4);
    assert!(v["max_relative_residual"].as_f64().unwrap() < 1e-6);
    assert_eq!(run(&["sandbox", "rdm", "--setting", "3,7,1"]).status.code(), Some(4));
}

#[test]
fn output_is_deterministic() {
    let args = ["--format", "json", "qparam", &data("data/synthetic_4_5.txt")];
    let a = run(&args).stdout;
    let b = run(&args).stdout;
    assert_eq!(a, b);
}

/// Leaf tokens as the text renderer prints them.
fn leaves(v: &Value, out: &mut Vec<String>) {
    match v {
        Value::Object(m) if m.len() == 2 && m.contains_key("exact") && m.contains_key("decimal") => {
            out.push(format!("{} ({})", m["exact"].as_str().unwrap(), m["decimal"]));
        }
        Value::Object(m) => m.values().for_each(|x| leaves(x, out)),
        Value::Array(xs) => xs.iter().for_each(|x| leaves(x, out)),
        Value::String(s) => out.push(s.clone()),
        other => out.push(other.to_string()),
    }
}

#[test]
fn text_and_json_carry_the_same_numbers() {
    let cases: Vec<Vec<String>> = vec![
        vec!["analyze".into(), data("data/synthetic_4_5.txt"), "--d-prime".into(), "4".into()],
        vec!["qparam".into(), data("data/synthetic_4_5.txt")],
        vec!["selection".into(), "--setting".into(), "3,3,1".into()],
        vec!["sandbox".into(), "bd".into(), "--epsilon".into(), "1/100".into()],
    ];
    for args in cases {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let (v, _) = json(&args);
        let text = String::from_utf8(run(&args).stdout).unwrap();
        let mut tokens = Vec::new();
        leaves(&v, &mut tokens);
        let mut pos = 0;
        for t in tokens {
            let found = text[pos..].find(&t).unwrap_or_else(|| panic!("{args:?}: missing {t}"));
            pos += found + t.len();
        }
    }
}
