use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn dpack(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dpack")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli").join(name);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn edge_set(doc: &Value) -> Vec<(u64, u64)> {
    let mut e: Vec<(u64, u64)> = doc["edges"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| {
            let (a, b) = (e[0].as_u64().unwrap(), e[1].as_u64().unwrap());
            (a.min(b), a.max(b))
        })
        .collect();
    e.sort_unstable();
    e
}

#[test]
fn lattice_tangency_matches_the_grid() {
    let dir = scratch("lattice");
    let lattice = dir.join("lattice.json");
    let grid = dir.join("grid.json");
    assert!(dpack(&["gen", "cubic-lattice", "--d", "2", "--side", "4", "--out", path_str(&lattice)]).status.success());
    assert!(dpack(&["gen", "grid", "--d", "2", "--side", "4", "--out", path_str(&grid)]).status.success());
    let tangency = json_of(&dpack(&["pack", "tangency", "--input", path_str(&lattice)]));
    let g: Value = serde_json::from_str(&std::fs::read_to_string(&grid).unwrap()).unwrap();
    assert_eq!(edge_set(&tangency), edge_set(&g));
    assert_eq!(edge_set(&g).len(), 24);
}

#[test]
fn path_modulus_is_one_over_n() {
    let dir = scratch("path");
    let p = dir.join("p5.json");
    assert!(dpack(&["gen", "path", "--n", "5", "--out", path_str(&p)]).status.success());
    let doc = json_of(&dpack(&["mod", "solve", "--input", path_str(&p), "--p", "2"]));
    assert_eq!(doc["format"], "dpack-modulus/1");
    assert!((doc["value"].as_f64().unwrap() - 0.2).abs() < 1e-6);
    assert_eq!(doc["converged"], true);
    for entry in doc["metric"].as_array().unwrap() {
        assert!((entry["m"].as_f64().unwrap() - 0.2).abs() < 1e-6);
    }
}

#[test]
fn unknown_subcommand_prints_usage_and_exits_one() {
    let out = dpack(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(dpack(&["--help"]).status.code(), Some(0));
    assert_eq!(dpack(&["--version"]).status.code(), Some(0));
}

#[test]
fn malformed_graph_reports_the_field() {
    let dir = scratch("malformed");
    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"format":"dpack-graph/1","vertices":[0,1],"edges":[[0,7]]}"#).unwrap();
    let out = dpack(&["graph", "hull", "--input", path_str(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("edges[0][1]"), "{err}");
}

#[test]
fn malformed_csv_reports_the_line() {
    let dir = scratch("malformed_csv");
    let bad = dir.join("bad.csv");
    std::fs::write(&bad, "id,x1,x2,r\n0,0,0,0.5\n1,1,zero,0.5\n").unwrap();
    let out = dpack(&["pack", "verify", "--input", path_str(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn packing_documents_round_trip_through_the_reader() {
    let dir = scratch("roundtrip");
    let a = dir.join("a.json");
    let b = dir.join("b.json");
    let csv = dir.join("a.csv");
    assert!(dpack(&["gen", "apollonian", "--depth", "2", "--out", path_str(&a)]).status.success());
    assert!(dpack(&["pack", "normalize", "--input", path_str(&a), "--id", "1", "--canonical", "--out", path_str(&b)]).status.success());
    assert!(dpack(&["gen", "apollonian", "--depth", "2", "--format", "csv", "--out", path_str(&csv)]).status.success());
    let from_json = json_of(&dpack(&["pack", "tangency", "--input", path_str(&a)]));
    let from_csv = json_of(&dpack(&["pack", "tangency", "--input", path_str(&csv)]));
    let normalized = json_of(&dpack(&["pack", "tangency", "--input", path_str(&b)]));
    assert_eq!(edge_set(&from_json), edge_set(&from_csv));
    assert_eq!(edge_set(&from_json), edge_set(&normalized));
}

#[test]
fn graph_documents_round_trip_through_the_reader() {
    let dir = scratch("graph_roundtrip");
    let t = dir.join("tree.json");
    assert!(dpack(&["gen", "tree", "--k", "3", "--depth", "3", "--out", path_str(&t)]).status.success());
    let ball = json_of(&dpack(&["graph", "ball", "--input", path_str(&t), "--radius", "3"]));
    let original: Value = serde_json::from_str(&std::fs::read_to_string(&t).unwrap()).unwrap();
    assert_eq!(edge_set(&ball).len(), edge_set(&original).len());
    let b = dir.join("ball.json");
    std::fs::write(&b, serde_json::to_string(&ball).unwrap()).unwrap();
    let d = json_of(&dpack(&["graph", "bs-distance", "--a", path_str(&t), "--b", path_str(&b)]));
    assert_eq!(d["kind"], "isomorphic");
    assert_eq!(d["value"].as_f64().unwrap(), 0.0);
}

#[test]
fn canonical_output_is_byte_identical() {
    let dir = scratch("canonical");
    let g = dir.join("grid.json");
    assert!(dpack(&["gen", "grid", "--d", "2", "--side", "7", "--out", path_str(&g)]).status.success());
    let args = ["--canonical", "flow", "verify", "--input", path_str(&g)];
    let (a, b) = (dpack(&args), dpack(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let doc = json_of(&a);
    assert!(doc["run"].get("timestamp").is_none());
    assert_eq!(doc["all_pass"], true);
}

#[test]
fn random_generators_need_a_seed_and_honour_it() {
    assert_eq!(dpack(&["gen", "random-packing", "--d", "2", "--n", "10"]).status.code(), Some(1));
    let args = ["--seed", "11", "--canonical", "gen", "random-packing", "--d", "2", "--n", "10"];
    let (a, b) = (dpack(&args), dpack(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let other = dpack(&["--seed", "12", "--canonical", "gen", "random-packing", "--d", "2", "--n", "10"]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn certificate_check_is_sound_on_a_box() {
    let dir = scratch("certificate");
    let g = dir.join("grid.json");
    assert!(dpack(&["gen", "grid", "--d", "2", "--side", "9", "--out", path_str(&g)]).status.success());
    let doc = json_of(&dpack(&["mod", "certificate", "--input", path_str(&g), "--n", "3", "--check"]));
    assert_eq!(doc["check"]["sound"], true);
    assert!(doc["bound"].as_f64().unwrap() > 0.0);
}

#[test]
fn probe_writes_the_plot_table() {
    let dir = scratch("probe");
    let g = dir.join("grid.json");
    let plot = dir.join("plot.csv");
    assert!(dpack(&["gen", "grid", "--d", "2", "--side", "9", "--out", path_str(&g)]).status.success());
    let doc = json_of(&dpack(&[
        "--plot-csv",
        path_str(&plot),
        "mod",
        "probe",
        "--input",
        path_str(&g),
        "--radii",
        "1,2,3",
    ]));
    assert_eq!(doc["monotone"], true);
    assert_eq!(doc["root"], 40);
    let table = std::fs::read_to_string(&plot).unwrap();
    let lines: Vec<&str> = table.lines().collect();
    assert_eq!(lines[0], "radius,value,lower_bound");
    assert_eq!(lines.len(), 4);
}

#[test]
fn overlapping_packing_fails_verification_with_exit_three() {
    let dir = scratch("overlap");
    let bad = dir.join("overlap.csv");
    std::fs::write(&bad, "id,x1,x2,r\n0,0,0,1\n1,1,0,1\n").unwrap();
    assert_eq!(dpack(&["pack", "verify", "--input", path_str(&bad)]).status.code(), Some(3));
}
