use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn genpos(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_genpos")).args(args).env_remove("GENPOS_SEED").output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn document(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write_json(path: &Path, value: &Value) {
    std::fs::write(path, serde_json::to_string(value).unwrap()).unwrap();
}

fn ruling(theta: f64, t: f64) -> [[f64; 3]; 2] {
    let (s, c) = theta.sin_cos();
    [[c + t * s, s - t * c, -t], [c - t * s, s + t * c, t]]
}

#[test]
fn stratum_verify_agrees() {
    let out = genpos(&["stratum", "--m", "4", "--d", "2", "--n", "2", "--r", "1", "--verify", "--format", "table"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("value 3"));
    assert!(text.contains("oracle 3 3 3 3 3"));
    assert!(text.contains("AGREE"));
}

#[test]
fn stratum_infeasible_exits_2() {
    let out = genpos(&["stratum", "--m", "3", "--d", "2", "--n", "2", "--r", "0"]);
    assert_eq!(code(&out), 2);
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["feasible"], json!(false));
}

#[test]
fn stratum_affine_bound() {
    let doc = document(&genpos(&["stratum", "--affine", "--m", "3", "--d", "1", "--n", "1", "--r", "0"]));
    assert_eq!(doc["kind"], "stratum_report");
    assert_eq!(doc["value"]["dim"]["dim"], 3);
    assert_eq!(doc["value"]["kind"], "upper_bound");
}

#[test]
fn quadric_example_is_the_standard_hyperboloid() {
    let doc = document(&genpos(&["quadric", "--example"]));
    let c: Vec<f64> = doc["coefficients"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    let scale = c[0];
    let want = [1.0, 1.0, -1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -1.0];
    for (a, b) in c.iter().zip(want) {
        assert!((a / scale - b).abs() < 1e-9);
    }
    assert_eq!(doc["classification"], "one_sheet_hyperboloid");
}

#[test]
fn quadric_rejects_intersecting_lines() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("points.json");
    // A1..A4 collinear: the first two lines coincide.
    let points = json!([[0, 0, 0], [1, 0, 0], [2, 0, 0], [3, 0, 0], [0, 1, 1], [1, 2, 3]]);
    write_json(&path, &json!({ "kind": "points", "version": 1, "points": points }));
    assert_eq!(code(&genpos(&["quadric", "--input", path.to_str().unwrap()])), 2);
}

#[test]
fn quadric_random_batch() {
    let doc = document(&genpos(&["quadric", "--random", "100"]));
    assert_eq!(doc["successes"], 100);
    assert!(doc["max_residual"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn transversals_examples() {
    let doc = document(&genpos(&["transversals", "--example"]));
    assert_eq!(doc["count"], 2);
    assert_eq!(doc["lines"].as_array().unwrap().len(), 2);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("segments.json");
    let third = 2.0 * std::f64::consts::PI / 3.0;
    let base = [ruling(0.0, 4.0), ruling(third, 4.0), ruling(2.0 * third, 4.0)];
    let offset = [[0.0, 0.0, -3.0], [0.0, 0.0, 3.0]];
    write_json(&path, &json!({ "kind": "segments", "version": 1, "segments": [base[0], base[1], base[2], offset] }));
    let doc = document(&genpos(&["transversals", "--input", path.to_str().unwrap()]));
    assert_eq!(doc["count"], 0);

    // A fourth segment on a ruling of the same family meets infinitely many lines.
    let on_surface = ruling(1.0, 4.0);
    write_json(&path, &json!({ "kind": "segments", "version": 1, "segments": [base[0], base[1], base[2], on_surface] }));
    assert_eq!(code(&genpos(&["transversals", "--input", path.to_str().unwrap()])), 3);
}

#[test]
fn transversal_sweep_histogram() {
    let doc = document(&genpos(&["transversals", "--sweep", "1000", "--seed", "7"]));
    let h = &doc["histogram"];
    assert_eq!(h["more"], 0);
    let total: u64 = ["0", "1", "2"].iter().map(|k| h[k].as_u64().unwrap()).sum::<u64>() + doc["degenerate"].as_u64().unwrap();
    assert_eq!(total, 1000);
}

#[test]
fn perturb_examples() {
    let doc = document(&genpos(&["perturb", "--example", "a"]));
    assert_eq!(doc["sound"], true);
    assert_eq!(doc["certificate"]["bound"], 1);
    assert_eq!(doc["certificate"]["kind"], "certificate");
    assert_eq!(doc["spec"]["kind"], "plmap");

    let doc = document(&genpos(&["perturb", "--example", "d"]));
    assert_eq!(doc["certificate"]["bound"], 0);
    let counts = doc["certificate"]["transversal_counts"].as_array().unwrap();
    assert!(!counts.is_empty());
    assert!(counts.iter().all(|c| c.as_u64().unwrap() <= 2));
}

#[test]
fn perturb_exit_codes() {
    assert_eq!(code(&genpos(&["perturb", "--example", "a", "--case", "a", "--n", "2"])), 2);
    assert_eq!(code(&genpos(&["perturb", "--example", "c", "--case", "c", "--n", "2", "--d", "3"])), 2);
    // A relative threshold of 0.5 rejects every skew configuration.
    assert_eq!(code(&genpos(&["perturb", "--example", "a", "--tol", "5e8"])), 4);
}

#[test]
fn perturb_round_trip_and_side_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.json");
    let spec_out = dir.path().join("out.json");
    let cert = dir.path().join("cert.json");
    let emitted = genpos(&["perturb", "--example", "b", "--emit-input"]);
    std::fs::write(&input, &emitted.stdout).unwrap();
    let args = [
        "perturb",
        "--input",
        input.to_str().unwrap(),
        "--case",
        "b",
        "--n",
        "2",
        "--delta",
        "2",
        "--spec-out",
        spec_out.to_str().unwrap(),
        "--certificate",
        cert.to_str().unwrap(),
    ];
    let doc = document(&genpos(&args));
    let cert_doc: Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(cert_doc, doc["certificate"]);
    // The perturbed map is itself a valid input.
    let again = genpos(&["perturb", "--input", spec_out.to_str().unwrap(), "--case", "b", "--n", "2", "--delta", "2"]);
    assert_eq!(code(&again), 0);
}

#[test]
fn seed_comes_from_the_environment() {
    let base = genpos(&["transversals", "--sweep", "50"]).stdout;
    let env = Command::new(env!("CARGO_BIN_EXE_genpos"))
        .args(["transversals", "--sweep", "50"])
        .env("GENPOS_SEED", "99")
        .output()
        .unwrap();
    let explicit = genpos(&["transversals", "--sweep", "50", "--seed", "99"]).stdout;
    assert_eq!(env.stdout, explicit);
    let doc: Value = serde_json::from_slice(&base).unwrap();
    assert_eq!(doc["seed"], 0x5EED);
}

#[test]
fn export_quadric_mesh_and_lines() {
    let dir = tempfile::tempdir().unwrap();
    let quadric = dir.path().join("q.json");
    let lines = dir.path().join("lines.json");
    std::fs::write(&quadric, genpos(&["quadric", "--example"]).stdout).unwrap();
    std::fs::write(&lines, genpos(&["transversals", "--example"]).stdout).unwrap();

    let out = genpos(&["export", "--quadric", quadric.to_str().unwrap(), "--half-width", "2"]);
    assert_eq!(code(&out), 0);
    let obj = String::from_utf8(out.stdout).unwrap();
    let mut vertices = 0;
    for l in obj.lines().filter(|l| l.starts_with("v ")) {
        let v: Vec<f64> = l[2..].split_whitespace().map(|x| x.parse().unwrap()).collect();
        assert!((v[0] * v[0] + v[1] * v[1] - v[2] * v[2] - 1.0).abs() <= 1e-6);
        vertices += 1;
    }
    assert!(vertices > 100);
    assert!(obj.lines().any(|l| l.starts_with("f ")));

    let out = genpos(&["export", "--lines", lines.to_str().unwrap()]);
    let obj = String::from_utf8(out.stdout).unwrap();
    assert_eq!(obj.lines().filter(|l| l.starts_with("l ")).count(), 2);

    let empty = dir.path().join("empty.json");
    write_json(&empty, &json!({ "kind": "lines", "version": 1, "lines": [] }));
    let out = genpos(&["export", "--lines", empty.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().filter(|l| l.starts_with('l')).count(), 0);

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(code(&genpos(&["export", "--lines", bad.to_str().unwrap()])), 2);
    assert_eq!(code(&genpos(&["export", "--quadric", lines.to_str().unwrap()])), 2);
}

#[test]
fn skew_report_and_bridge() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("flats.json");
    let flats = json!([
        [[0, 0, 0], [1, 0, 0]],
        [[0, 1, 1], [0, 2, 1]],
        [[1, 0, 2], [1, 1, 3]],
    ]);
    write_json(&path, &json!({ "kind": "flats", "version": 1, "flats": flats }));
    let doc = document(&genpos(&["skew", "--input", path.to_str().unwrap(), "--bridge"]));
    assert!(doc["pairwise"].as_array().unwrap().iter().all(|p| p["skew"] == true));
    assert_eq!(doc["jointly_skew"], false);
    assert_eq!(doc["hull_dim"], 3);
    // Pairwise skew lines in R^3 only admit the whole space as bridge.
    assert_eq!(doc["bridge"]["dim"], 3);
}

#[test]
fn table_output_is_plain_text() {
    let out = genpos(&["transversals", "--example", "--format", "table"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("count 2\n"));
}
