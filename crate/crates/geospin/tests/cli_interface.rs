//! End-to-end checks of the `geospin` binary: exit-code contract, output
//! determinism, manifest handling, sweeps and plot data.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_geospin"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn tmp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("geospin-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn list_manifolds_names_the_zoo() {
    let out = run(&["list-manifolds"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for name in [
        "euclidean",
        "sphere",
        "poincare-half-plane",
        "poincare-disk",
        "flat-torus",
        "warped-product",
    ] {
        assert!(text.contains(name), "missing {name} in:\n{text}");
    }
}

#[test]
fn unknown_flag_and_subcommand_exit_2() {
    assert_eq!(run(&["list-manifolds", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&[]).status.code(), Some(2));
}

#[test]
fn spectrum_example_emits_unit_imaginary_pair() {
    let out = run(&[
        "spectrum",
        "--manifold",
        "poincare-half-plane",
        "--point",
        "0,1",
        "--velocity",
        "1,0",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let eig = json["eig_W"].as_array().unwrap();
    assert_eq!(eig[0]["im"].as_f64().unwrap(), -1.0);
    assert_eq!(eig[1]["im"].as_f64().unwrap(), 1.0);
    let lambda = json["lambda_re"].as_array().unwrap();
    assert_eq!(lambda[0]["re"].as_f64().unwrap(), -1.0);
    assert_eq!(lambda[1]["re"].as_f64().unwrap(), 1.0);
    assert_eq!(json["W"][0][1].as_f64().unwrap(), -1.0);
}

#[test]
fn geodesic_csv_has_frozen_columns_and_endpoint() {
    let out = run(&[
        "geodesic",
        "--manifold",
        "euclidean",
        "--dim",
        "2",
        "--point",
        "0,0",
        "--velocity",
        "1,0",
        "--t-end",
        "1",
        "--h",
        "0.125",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "t,x,y,v_x,v_y,speed,w_r");
    let last = text.lines().last().unwrap();
    assert_eq!(last, "1,1,0,1,0,1,0");
}

#[test]
fn geodesic_runs_are_byte_identical() {
    let args = [
        "geodesic",
        "--manifold",
        "poincare-half-plane",
        "--point",
        "0,1",
        "--velocity",
        "1,0",
        "--t-end",
        "1",
        "--h",
        "0.01",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn sweep_merges_in_input_order() {
    let out = run(&[
        "geodesic",
        "--manifold",
        "euclidean",
        "--point",
        "0,0",
        "--velocity",
        "1,0",
        "--sweep",
        "0,1;1,1",
        "--t-end",
        "0.5",
        "--h",
        "0.25",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("sweep,t,"));
    let sweeps: Vec<&str> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap())
        .collect();
    let mut sorted = sweeps.clone();
    sorted.sort();
    assert_eq!(sweeps, sorted, "sweep blocks out of order");
    assert!(sweeps.contains(&"0") && sweeps.contains(&"2"));
}

#[test]
fn domain_exit_is_a_computational_failure() {
    let out = run(&[
        "geodesic",
        "--manifold",
        "flat-torus",
        "--point",
        "3,3",
        "--velocity",
        "1,0",
        "--t-end",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("left the chart domain"));
}

#[test]
fn asymmetric_manifest_loads_with_named_entry_and_exit_1() {
    let dir = tmp_dir("manifest");
    let path = dir.join("bad.json");
    std::fs::write(
        &path,
        r#"{
            "name": "bad",
            "dimension": 2,
            "coordinates": ["x", "y"],
            "metric": [["1", "x"], ["y", "1"]]
        }"#,
    )
    .unwrap();
    let out = run(&["christoffel", "--manifest", path.to_str().unwrap(), "--point", "0,0"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("(0,1)"), "stderr: {err}");
}

#[test]
fn valid_manifest_round_trips_through_christoffel() {
    let dir = tmp_dir("roundtrip");
    let path = dir.join("halfplane.json");
    std::fs::write(
        &path,
        r#"{
            "name": "halfplane",
            "dimension": 2,
            "coordinates": ["x", "y"],
            "metric": [["1/y^2", "0"], ["0", "1/y^2"]],
            "domain": ["y > 0"]
        }"#,
    )
    .unwrap();
    let out = run(&["christoffel", "--manifest", path.to_str().unwrap(), "--point", "0,2"]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["gamma"][0][0][1].as_f64().unwrap(), -0.5);
    assert_eq!(json["log_volume_gradient"][1].as_f64().unwrap(), -1.0);
}

#[test]
fn ricci_flow_csv_and_summary() {
    let dir = tmp_dir("flow");
    let csv_path = dir.join("flow.csv");
    let out = run(&[
        "ricci-flow",
        "--manifold",
        "sphere",
        "--t-end",
        "1",
        "--h",
        "0.001",
        "--output",
        csv_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    assert!(csv.starts_with("t,c,R,w_r,residual\n"));
    assert!(csv.lines().nth(1).unwrap().starts_with("0,1,2,-2,"));
    // pass/fail summary goes to stderr as JSON
    let summary: serde_json::Value =
        serde_json::from_str(&String::from_utf8_lossy(&out.stderr)).unwrap();
    assert_eq!(summary["corollary"]["pass"].as_bool(), Some(true));
    let t_ext = summary["extinction"].as_f64().unwrap();
    assert!((t_ext - 0.5).abs() < 1e-6);
}

#[test]
fn plot_data_files_are_two_column() {
    let dir = tmp_dir("plot");
    let prefix = dir.join("run");
    let out = run(&[
        "geodesic",
        "--manifold",
        "poincare-half-plane",
        "--point",
        "0,1",
        "--velocity",
        "1,0",
        "--t-end",
        "0.2",
        "--h",
        "0.05",
        "--plot-data",
        prefix.to_str().unwrap(),
        "--output",
        dir.join("run.csv").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    for suffix in ["path", "speed", "wr"] {
        let text = std::fs::read_to_string(dir.join(format!("run.{suffix}.dat"))).unwrap();
        for line in text.lines() {
            assert_eq!(line.split_whitespace().count(), 2, "{suffix}: {line}");
        }
    }
}

#[test]
fn verify_filter_restricts_report() {
    let out = run(&["verify", "--seed", "42", "--only", "corollary"]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let checks = json["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    for c in checks {
        assert!(c["name"].as_str().unwrap().contains("corollary"));
    }
}

#[test]
fn bad_point_syntax_is_a_usage_error() {
    let out = run(&[
        "christoffel",
        "--manifold",
        "euclidean",
        "--point",
        "zero,0",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_manifold_is_a_computational_failure() {
    let out = run(&["christoffel", "--manifold", "mobius", "--point", "0,0"]);
    assert_eq!(out.status.code(), Some(1));
}
