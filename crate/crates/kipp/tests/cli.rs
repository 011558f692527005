use std::path::PathBuf;
use std::process::{Command, Output};

use kipp::format::MatrixDocument;
use kipp::kipp_core::linalg::ComplexMatrix;

fn kipp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kipp")).args(args).output().expect("binary runs")
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(format!("{}.json", name))
        .display()
        .to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn write_doc(dir: &tempfile::TempDir, name: &str, m: &ComplexMatrix) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, MatrixDocument::from_matrix(m).to_json()).unwrap();
    p.display().to_string()
}

#[derive(serde::Deserialize)]
struct Row {
    theta: f64,
    branch: usize,
    lambda: f64,
    re: f64,
    im: f64,
}

fn rows(csv_text: &str) -> Vec<Row> {
    csv::Reader::from_reader(csv_text.as_bytes())
        .deserialize()
        .map(|r| r.unwrap())
        .collect()
}

#[test]
fn analyze_j2() {
    let o = kipp(&["analyze", &data("j2")]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.contains("circle center 0 radius 0.5\n"), "{}", s);
    assert!(s.contains("W(A) is a circular disk"));
}

#[test]
fn analyze_normal_matrix_has_no_circles() {
    let o = kipp(&["analyze", &data("diag123")]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.contains("no circles") && s.contains("not a partial isometry"), "{}", s);
}

#[test]
fn analyze_json_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = kipp(&["analyze", &data("example3"), "--project", "--json", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(stdout(&o), std::fs::read_to_string(&out).unwrap());
    assert_eq!(v["disk"], "circular-disk");
    assert_eq!(v["rank"], 3);
    assert_eq!(v["circles"].as_array().unwrap().len(), 1);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"n\": 2, \"entries\": [[[0,0]]]}").unwrap();
    let bad = bad.to_str().unwrap();
    assert_eq!(code(&kipp(&["analyze", bad])), 2);
    assert_eq!(code(&kipp(&["trace", bad])), 2);
    assert_eq!(code(&kipp(&["analyze", "/nonexistent/m.json"])), 2);
    assert_eq!(code(&kipp(&["trace", &data("j2"), "--steps", "4"])), 2);
    assert_eq!(code(&kipp(&["canon", &data("diag123")])), 3);
    assert_eq!(code(&kipp(&["canon", &data("j2")])), 3);
    assert_eq!(code(&kipp(&["fuzz", "--theorem", "no-such-check"])), 2);
    assert_eq!(code(&kipp(&["fuzz", "--trials", "0"])), 2);
    assert_eq!(code(&kipp(&["render", &data("j2"), "--out", "/nonexistent/dir/x.svg"])), 1);
    let nan = dir.path().join("nan.json");
    std::fs::write(&nan, "{\"n\": 1, \"entries\": [[[1e999, 0]]]}").unwrap();
    assert_eq!(code(&kipp(&["analyze", nan.to_str().unwrap()])), 2);
}

#[test]
fn canon_of_a_figure_recovers_its_parameters() {
    let o = kipp(&["canon", &data("figure1"), "--json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["kind"], "defect2");
    let b = v["form"]["b"].as_f64().unwrap();
    let h = v["form"]["h"].as_f64().unwrap();
    assert!((b - 0.2).abs() < 1e-12);
    assert!((h - (1.0f64 - 0.09).sqrt()).abs() < 1e-12);
}

#[test]
fn trace_j2_lies_on_half_circle() {
    let o = kipp(&["trace", &data("j2"), "--steps", "8"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.starts_with("theta,branch,lambda,re,im\n"));
    let r = rows(&s);
    assert_eq!(r.len(), 16);
    for row in &r {
        assert!((row.re * row.re + row.im * row.im - 0.25).abs() < 1e-8);
        assert!((row.lambda.abs() - 0.5).abs() < 1e-12);
    }
}

#[test]
fn trace_of_diagonal_projection_stays_on_its_eigenvalues() {
    let dir = tempfile::tempdir().unwrap();
    let m = ComplexMatrix::from_real_rows(&[&[0.0, 0.0], &[0.0, 1.0]]);
    let p = write_doc(&dir, "d.json", &m);
    let out = dir.path().join("c.csv");
    let o = kipp(&["trace", &p, "--steps", "16", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let r = rows(&std::fs::read_to_string(&out).unwrap());
    assert_eq!(r.len(), 32);
    for row in &r {
        let at0 = row.re.hypot(row.im) < 1e-12;
        let at1 = (row.re - 1.0).hypot(row.im) < 1e-12;
        assert!(at0 || at1, "theta {} branch {}: ({}, {})", row.theta, row.branch, row.re, row.im);
    }
}

#[test]
fn render_is_deterministic() {
    let a = kipp(&["render", &data("figure3"), "--steps", "256"]);
    let b = kipp(&["render", &data("figure3"), "--steps", "256"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let s = stdout(&a);
    assert!(s.contains("viewBox=\"-1.1 -1.1 2.2 2.2\""));
    assert_eq!(s.matches("<path id=\"branch-").count(), 6);
    // two detected circles in the dashed group
    let circles = &s[s.find("<g id=\"circles\"").unwrap()..];
    assert!(circles.contains("stroke-dasharray"));
    assert_eq!(circles.matches("<circle").count(), 2);
}

#[test]
fn render_j2_draws_its_circle() {
    let o = kipp(&["render", &data("j2"), "--steps", "64"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert_eq!(s.matches("<path id=\"branch-").count(), 2);
    assert!(s.contains("r=\"0.50000\""), "{}", s);
}

#[test]
fn fuzz_is_deterministic_and_passes() {
    let a = kipp(&["fuzz", "--seed", "7", "--trials", "10", "--json"]);
    let b = kipp(&["fuzz", "--seed", "7", "--trials", "10", "--json"]);
    assert_eq!(code(&a), 0, "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    let arr = v.as_array().unwrap();
    assert_eq!(arr.len(), kipp::verify::theorem_ids().len());
    for r in arr {
        for key in ["theoremId", "trials", "failures", "worstResidual", "witnesses", "acceptanceRate"] {
            assert!(r.get(key).is_some(), "missing {}", key);
        }
    }
}

#[test]
fn fuzz_single_check_reports_disk_counters() {
    let o = kipp(&["fuzz", "--theorem", "disk-criterion", "--trials", "20", "--json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let c = &v[0]["counters"];
    assert_eq!(c["crith-plus"], 20);
    assert_eq!(c["agree"], 20);
    assert!(c.get("dercond-holds").is_some());
}

#[test]
fn fuzz_list_names_every_check() {
    let o = kipp(&["fuzz", "--list"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().collect::<Vec<_>>(), kipp::verify::theorem_ids());
}

#[test]
fn paper_examples_output_is_stable() {
    let a = kipp(&["paper-examples"]);
    let b = kipp(&["paper-examples"]);
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("figure3"));
    // exit status mirrors the table
    let all_ok = stdout(&a).ends_with("all within tolerance\n");
    assert_eq!(code(&a), if all_ok { 0 } else { 1 });
}

#[test]
fn paper_examples_with_corrupted_data_fails() {
    let dir = tempfile::tempdir().unwrap();
    for (name, text) in kipp::data::BUNDLED {
        std::fs::write(dir.path().join(format!("{}.json", name)), text).unwrap();
    }
    // replace example 1 by J_2 (+) 0: its only circle has radius 1/2
    let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).direct_sum(&ComplexMatrix::zeros(4, 4));
    write_doc(&dir, "example1.json", &m);
    let o = kipp(&["paper-examples", "--data-dir", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("example1   radius       0.48             0.5"));
    // an unreadable document is a parse error
    std::fs::write(dir.path().join("figure2.json"), "not json").unwrap();
    let o = kipp(&["paper-examples", "--data-dir", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 2);
}
