//! The binary end to end: outputs, exit codes and determinism.

use std::process::{Command, Output};

fn conewalk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_conewalk")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("json output")
}

#[test]
fn kreweras_excursions_of_length_three() {
    let o = conewalk(&["enumerate", "--model", "kreweras", "--region", "three-quadrant", "--n", "3", "--end", "0,0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "4");
}

#[test]
fn negative_endpoints_parse() {
    // a single W step
    let o = conewalk(&["enumerate", "--model", "kreweras", "--n", "1", "--end", "-1,0"]);
    assert_eq!(stdout(&o).trim(), "1");
}

#[test]
fn models_list_has_the_catalog() {
    let o = conewalk(&["models", "list"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let names: Vec<&str> = v.as_array().unwrap().iter().map(|m| m["name"].as_str().unwrap()).collect();
    assert_eq!(names.len(), 13);
    assert_eq!(names[0], "kreweras");
    assert!(names.contains(&"gessel-asymmetric"));
}

#[test]
fn count_table_as_csv_and_json() {
    let o = conewalk(&["enumerate", "--model", "simple", "--region", "quadrant", "--n", "2", "--format", "csv"]);
    let text = stdout(&o);
    assert!(text.starts_with("n,i,j,count\n0,0,0,1\n"));
    assert!(text.contains("2,0,0,2\n"));
    let o = conewalk(&["enumerate", "--model", "[[1,0],[-1,0],[0,1],[0,-1]]", "--region", "quadrant", "--n", "2"]);
    let v = json(&o);
    let rows = v["counts"].as_array().unwrap();
    assert_eq!(rows.len(), 7);
    assert_eq!(rows[3]["count"], "2");
}

#[test]
fn theorem_check_passes() {
    let o = conewalk(&["check", "theorem", "--id", "K-U", "--order", "18"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    for c in v.as_array().unwrap() {
        assert_eq!(c["status"], "pass");
        assert_eq!(c["order"], 18);
        assert!(c["residual_locus"].is_null());
    }
}

#[test]
fn failed_check_exits_one() {
    let o = conewalk(&["check", "invariants", "--model", "reverse-kreweras", "--pair", "three-quadrant", "--order", "6"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v[0]["status"], "fail");
    assert_eq!(v[0]["first_failure"]["i"], -3);
    let o = conewalk(&[
        "check", "invariants", "--model", "reverse-kreweras", "--pair", "three-quadrant", "--order", "6", "--pole-bound", "3",
    ]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn usage_errors_exit_two_and_name_the_choices() {
    let o = conewalk(&["enumerate", "--model", "nope", "--n", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("kreweras, reverse-kreweras"));
    let o = conewalk(&["check", "theorem", "--id", "K-X"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("K-U"));
    let o = conewalk(&["enumerate", "--model", "kreweras", "--region", "half-plane"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("three-quadrant"));
    let o = conewalk(&["series", "--model", "kreweras", "--select", "C(2,2)", "--order", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("U(x,0)"));
    let o = conewalk(&["check", "funceq", "--model", "kreweras", "--eq", "scarecrow"]);
    assert_eq!(o.status.code(), Some(2));
    let o = conewalk(&["harmonic", "--model", "m7"]);
    assert_eq!(o.status.code(), Some(2));
    let o = conewalk(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn series_output_uses_exact_rationals() {
    let o = conewalk(&["series", "--name", "V", "--order", "5"]);
    let v = json(&o);
    assert_eq!(v["coeffs"][0]["n"], 1);
    assert_eq!(v["coeffs"][0]["terms"][0]["q"], "2/1");
    let o = conewalk(&["series", "--model", "kreweras", "--select", "D0", "--order", "6"]);
    let v = json(&o);
    let c3 = v["coeffs"].as_array().unwrap().iter().find(|c| c["n"] == 3).unwrap();
    assert_eq!(c3["terms"][0]["q"], "4/1");
}

#[test]
fn funceq_reports() {
    let o = conewalk(&["check", "funceq", "--model", "m6", "--order", "8"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v.as_array().unwrap().len(), 5);
    assert_eq!(v[0]["check"], "funceq:kernel");
}

#[test]
fn harmonic_grid_json() {
    let o = conewalk(&["harmonic", "--model", "kreweras", "--imax", "3", "--prec", "30"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["model"], "kreweras");
    let h = v["values"].as_array().unwrap().iter().find(|e| e["i"] == -1 && e["j"] == 0).unwrap();
    assert_eq!(h["h"], "9");
}

#[test]
fn asymptotics_json() {
    let o = conewalk(&["asymptotics", "--model", "kreweras", "--target", "0,0", "--n", "120"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert!(v["rel_err"].as_f64().unwrap() < 0.15);
    assert!((v["paper_constant"].as_f64().unwrap() - 2.4184916290726215).abs() < 1e-12);
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = ["check", "invariants", "--model", "kreweras", "--order", "8"];
    let a = conewalk(&args);
    let b = conewalk(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), Some(0));
}

#[test]
fn output_flag_writes_a_file() {
    let path = std::env::temp_dir().join(format!("conewalk-{}.json", std::process::id()));
    let o = conewalk(&["models", "list", "--output", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert!(text.contains("\"double-kreweras\""));
}

#[test]
fn suite_runs_a_single_criterion() {
    let o = conewalk(&["suite", "--only", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["passed"], true);
    assert_eq!(v["criteria"][0]["name"], "square lemma");
    assert!(stderr(&o).contains("[PASS]"));
    let o = conewalk(&["suite", "--only", "12"]);
    assert_eq!(o.status.code(), Some(2));
}
