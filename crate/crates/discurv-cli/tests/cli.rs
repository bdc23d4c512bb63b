// Copyright 2026 the Discurv Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn discurv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_discurv")).args(args).output().expect("spawn")
}

fn ok(args: &[&str]) -> Output {
    let out = discurv(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn read_json(p: &Path) -> Value {
    serde_json::from_slice(&std::fs::read(p).unwrap()).unwrap()
}

#[test]
fn generate_examples() {
    let dir = TempDir::new().unwrap();
    let clo = path(&dir, "clo.json");
    ok(&["generate", "clothoid", "--space", "E2", "--a", "0.1", "--n", "60", "-o", s(&clo)]);
    let doc = read_json(&clo);
    assert_eq!(doc["schema_version"], "1");
    assert_eq!(doc["vertices"].as_array().unwrap().len(), 60);

    let hc = path(&dir, "hc.json");
    ok(&["generate", "circle", "--space", "H2", "--kappa", "2", "--n", "40", "-o", s(&hc)]);
    let report = json(&ok(&["analyze", s(&hc)]));
    for k in report["kappa"].as_array().unwrap().iter().filter(|k| !k.is_null()) {
        assert!((k.as_f64().unwrap() - 2.0).abs() < 1e-9);
    }

    let el = path(&dir, "el.json");
    ok(&["generate", "elastic", "--xi", "2.1", "--eta", "0.3", "--k0", "0.8", "--n", "120", "-o", s(&el)]);
    let fit = &json(&ok(&["analyze", s(&el)]))["curvature_fit"];
    assert!(fit["delta"].as_f64().unwrap().abs() < 1e-9);
    assert!(fit["residual"].as_f64().unwrap() < 1e-9);
}

#[test]
fn generate_usage_errors() {
    assert_eq!(discurv(&["generate", "circle", "--n", "2"]).status.code(), Some(2));
    assert_eq!(discurv(&["generate", "spiral"]).status.code(), Some(2));
    assert_eq!(discurv(&["generate", "circle", "--space", "S2", "--eta", "3"]).status.code(), Some(2));
    assert_eq!(discurv(&["--tol", "-1", "generate", "circle"]).status.code(), Some(2));
}

#[test]
fn analyze_geodesic_and_csv() {
    let dir = TempDir::new().unwrap();
    let g = path(&dir, "g.json");
    ok(&["generate", "geodesic", "--space", "S2", "--n", "12", "-o", s(&g)]);
    let report = json(&ok(&["analyze", s(&g)]));
    assert_eq!(report["pass"], true);
    for k in report["kappa"].as_array().unwrap().iter().filter(|k| !k.is_null()) {
        assert!(k.as_f64().unwrap().abs() < 1e-12);
    }
    let csv = String::from_utf8(ok(&["analyze", "--csv", s(&g)]).stdout).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "vertex_index,kappa");
    assert_eq!(lines.len(), 11);
    assert!(lines[1].starts_with("1,"));
}

#[test]
fn corrupted_vertex_is_reported() {
    let dir = TempDir::new().unwrap();
    let c = path(&dir, "c.json");
    ok(&["generate", "circle", "--space", "S2", "--n", "12", "-o", s(&c)]);
    let mut doc = read_json(&c);
    doc["vertices"][5][0] = Value::from(0.9);
    std::fs::write(&c, serde_json::to_string(&doc).unwrap()).unwrap();
    let out = discurv(&["analyze", s(&c)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("vertex 5"), "{}", String::from_utf8_lossy(&out.stderr));

    std::fs::write(&c, "{ not json").unwrap();
    assert_eq!(discurv(&["analyze", s(&c)]).status.code(), Some(1));
    assert_eq!(discurv(&["analyze", s(&path(&dir, "missing.json"))]).status.code(), Some(3));
}

#[test]
fn certified_elastic_reports_line_directrix() {
    let dir = TempDir::new().unwrap();
    let el = path(&dir, "el.json");
    let cert = path(&dir, "cert.json");
    let seq = path(&dir, "seq.json");
    ok(&["generate", "elastic", "--n", "50", "-o", s(&el)]);
    let report = json(&ok(&["certify", s(&el), "-o", s(&cert), "--sequence", s(&seq)]));
    assert_eq!(report["n"], 2);
    assert_eq!(report["pass"], true);
    let analysis = json(&ok(&["analyze", s(&cert)]));
    assert_eq!(analysis["certificate"]["valid"], true);
    assert_eq!(analysis["directrix"]["kind"]["type"], "line");
    assert!(analysis["directrix"]["distance_residual"].as_f64().unwrap() < 1e-8);
    assert_eq!(read_json(&seq).as_array().unwrap().len(), 3);
}

#[test]
fn broken_certificate_fails_analysis() {
    let dir = TempDir::new().unwrap();
    let el = path(&dir, "el.json");
    let cert = path(&dir, "cert.json");
    ok(&["generate", "elastic", "--n", "30", "-o", s(&el)]);
    ok(&["certify", s(&el), "-o", s(&cert)]);
    let mut doc = read_json(&cert);
    let x = doc["certificate"]["polys"][7][1][0][1][0].as_f64().unwrap();
    doc["certificate"]["polys"][7][1][0][1][0] = Value::from(x + 0.1);
    std::fs::write(&cert, serde_json::to_string(&doc).unwrap()).unwrap();
    let out = discurv(&["analyze", s(&cert)]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["certificate"]["valid"], false);
}

#[test]
fn associated_transfers_certificate() {
    let dir = TempDir::new().unwrap();
    let el = path(&dir, "el.json");
    let sph = path(&dir, "s.json");
    ok(&["generate", "elastic", "--n", "40", "-o", s(&el)]);
    ok(&["transform", s(&el), "associated", "--lambda", "1", "-o", s(&sph)]);
    assert_eq!(read_json(&sph)["space_form"], "S2");
    let report = json(&ok(&["certify", s(&sph)]));
    assert_eq!(report["n"], 2);
    assert_eq!(report["pass"], true);
    assert_eq!(discurv(&["transform", s(&el), "associated", "--lambda", "1+1i"]).status.code(), Some(1));
    assert_eq!(discurv(&["transform", s(&el), "associated", "--lambda", "x"]).status.code(), Some(2));
}

#[test]
fn backlund_of_line_is_euler_loop() {
    let dir = TempDir::new().unwrap();
    let line = path(&dir, "line.json");
    let lp = path(&dir, "loop.json");
    ok(&["generate", "geodesic", "--eta", "0.2", "--n", "60", "-o", s(&line)]);
    ok(&["transform", s(&line), "backlund", "--init", "0", "0.5", "-o", s(&lp)]);
    let report = json(&ok(&["analyze", s(&lp)]));
    let ks: Vec<f64> = report["kappa"].as_array().unwrap().iter().filter_map(Value::as_f64).collect();
    assert!(ks.iter().any(|k| k.abs() > 1.0), "loop bends");
    let cert = json(&ok(&["certify", s(&lp)]));
    assert_eq!(cert["n"], 2);
    assert_eq!(cert["pass"], true);
    assert_eq!(discurv(&["transform", s(&line), "backlund", "--init", "0"]).status.code(), Some(2));
}

#[test]
fn flow_emits_isometric_copies() {
    let dir = TempDir::new().unwrap();
    let ce = path(&dir, "ce.json");
    let fl = path(&dir, "flow.json");
    ok(&["generate", "constrained-elastic", "--n", "40", "-o", s(&ce)]);
    let out = ok(&["transform", s(&ce), "flow", "--n", "3", "--steps", "10", "-o", s(&fl)]);
    assert_eq!(String::from_utf8_lossy(&out.stderr).matches("isometry residual").count(), 10);
    assert_eq!(read_json(&fl).as_array().unwrap().len(), 10);
}

#[test]
fn render_outputs() {
    let dir = TempDir::new().unwrap();
    let hc = path(&dir, "hc.json");
    let svg = path(&dir, "hc.svg");
    ok(&["generate", "circle", "--space", "H2", "--kappa", "2", "--n", "40", "-o", s(&hc)]);
    ok(&["render", s(&hc), "-o", s(&svg)]);
    let text = std::fs::read_to_string(&svg).unwrap();
    let disc = text.lines().find(|l| l.starts_with("<circle")).unwrap().to_string();
    let num = |key: &str| -> f64 {
        let at = disc.find(&format!("{key}=\"")).unwrap() + key.len() + 2;
        disc[at..].split('"').next().unwrap().parse().unwrap()
    };
    let (cx, cy, r) = (num("cx"), num("cy"), num("r"));
    let poly = text.lines().find(|l| l.starts_with("<polyline")).unwrap();
    let pts = poly.split('"').nth(1).unwrap();
    for p in pts.split(' ') {
        let (x, y) = p.split_once(',').unwrap();
        let (x, y): (f64, f64) = (x.parse().unwrap(), y.parse().unwrap());
        assert!((x - cx).hypot(y - cy) < r);
    }

    let el = path(&dir, "el.json");
    let seq = path(&dir, "seq.json");
    ok(&["generate", "constrained-elastic", "--n", "30", "-o", s(&el)]);
    ok(&["certify", s(&el), "--sequence", s(&seq)]);
    let out = path(&dir, "seq.svg");
    ok(&["render", s(&seq), "-o", s(&out)]);
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.matches("<polyline").count(), 4);
    assert!(text.contains("#e15759"));

    let e2 = path(&dir, "e2.json");
    ok(&["generate", "elastic", "--n", "40", "-o", s(&e2)]);
    let out2 = path(&dir, "e2.svg");
    ok(&["render", s(&e2), "--directrix", "--circles", "--tangents", "-o", s(&out2)]);
    assert!(std::fs::read_to_string(&out2).unwrap().contains("stroke-dasharray"));
}

#[test]
fn output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let a = path(&dir, "a.json");
    let b = path(&dir, "b.json");
    ok(&["generate", "constrained-elastic", "--space", "H2", "--n", "30", "-o", s(&a)]);
    ok(&["generate", "constrained-elastic", "--space", "H2", "--n", "30", "-o", s(&b)]);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ok(&["certify", s(&a)]).stdout, ok(&["certify", s(&b)]).stdout);
    let (sa, sb) = (path(&dir, "a.svg"), path(&dir, "b.svg"));
    ok(&["render", s(&a), "-o", s(&sa)]);
    ok(&["render", s(&b), "-o", s(&sb)]);
    assert_eq!(std::fs::read(&sa).unwrap(), std::fs::read(&sb).unwrap());
}
