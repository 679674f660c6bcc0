use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rbf-shape"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn data_lines(csv: &str) -> Vec<&str> {
    csv.lines().filter(|l| !l.starts_with('#')).collect()
}

const DELTA: &str = "0.03333333333333333";

#[test]
fn constants_for_demo_configs() {
    let doc = json(&[
        "constants",
        "--n",
        "1",
        "--beta",
        "1",
        "--b0",
        "1",
        "--sigma",
        "1",
    ]);
    assert_eq!(doc["branch"], "c");
    assert_eq!(doc["delta0_const"], 0.25);
    assert_eq!(doc["C"], 8.0);
    assert_eq!(doc["artifact"]["name"], "rbf-shape");

    let doc = json(&["constants", "--n", "2", "--beta=-1", "--delta", DELTA]);
    assert_eq!(doc["branch"], "b");
    assert_eq!(doc["config"]["l"], 2);
    assert_eq!(doc["case"], "2");

    let doc = json(&["constants", "--n", "1", "--beta=-1", "--delta", DELTA]);
    assert_eq!(doc["case"], "3");
    let lp = doc["lambda_prime"].as_f64().unwrap();
    assert!((lp - (2f64 / 3.0).powf(1.0 / 24.0)).abs() < 1e-15);
}

#[test]
fn points_csv_layout() {
    let out = run(&["points", "--n", "2", "--l", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# rbf-shape "));
    assert!(text.contains("# config: {"));
    let rows = data_lines(&text);
    assert_eq!(rows[0], "index,x1,x2,k1,k2,k3");
    assert_eq!(rows.len(), 7);
    assert_eq!(rows[6], "5,0.0000000000000000e0,1.0000000000000000e0,0,0,2");
}

#[test]
fn points_scaled_by_delta() {
    let doc = json(&[
        "points",
        "--n",
        "2",
        "--beta=-1",
        "--delta",
        DELTA,
        "--format",
        "json",
    ]);
    assert_eq!(doc["count"], 6);
    let d = doc["config"]["diameter"].as_f64().unwrap();
    assert!((d - 1.0 / 12.0).abs() < 1e-15);
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.display().to_string()
}

#[test]
fn fit_from_csv() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "nodes.csv", "# two nodes\nx1,y\n0,1\n1,0\n");
    let doc = json(&["fit", "--beta=-1", "--c", "1", "--input", &input]);
    let coeffs: Vec<f64> = doc["coeffs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    let sp = std::f64::consts::PI.sqrt();
    assert!((coeffs[0] - 2.0 / sp).abs() < 1e-12);
    assert!((coeffs[1] + 2f64.sqrt() / sp).abs() < 1e-12);
    assert_eq!(doc["m"], 0);
    assert!(doc["poly_coeffs"].as_array().unwrap().is_empty());
    assert!(doc["cond_estimate"].as_f64().unwrap() > 1.0);
}

#[test]
fn fit_reads_lattice_degree_from_k_columns() {
    let dir = tempfile::tempdir().unwrap();
    // degree-1 lattice on a triangle carries linear data exactly under beta = 3
    let body = "index,x1,x2,k1,k2,k3,y\n0,0,0,1,0,0,0.5\n1,1,0,0,1,0,1.5\n2,0,1,0,0,1,2.5\n";
    let input = write(dir.path(), "lattice.csv", body);
    let doc = json(&["fit", "--beta", "3", "--c", "1", "--input", &input]);
    assert_eq!(doc["config"]["l"], 1);
    assert_eq!(doc["m"], 2);
    for c in doc["coeffs"].as_array().unwrap() {
        assert!(c.as_f64().unwrap().abs() < 1e-9);
    }
    let p: Vec<f64> = doc["poly_coeffs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    assert_eq!(p.len(), 3);
    assert!((p[0] - 0.5).abs() < 1e-9);
}

#[test]
fn fit_rejects_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "bad.csv", "x1,y\n0,abc\n");
    let out = run(&["fit", "--beta=-1", "--c", "1", "--input", &input]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&[
        "fit",
        "--beta=-1",
        "--c",
        "1",
        "--input",
        "/nonexistent/file.csv",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn mn_curve_with_svg() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("mn.svg");
    let csv = dir.path().join("mn.csv");
    let out = run(&[
        "mn-curve",
        "--n",
        "1",
        "--beta=-1",
        "--l",
        "2",
        "--points",
        "11",
        "--c-min",
        "0.01",
        "--c-max",
        "100",
        "--svg",
        svg.to_str().unwrap(),
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.contains("# case: 3"));
    let rows = data_lines(&text);
    assert_eq!(rows[0], "c,mn_value");
    // 11 grid points, c = 1 is on the grid and appears once per side
    assert_eq!(rows.len(), 1 + 12);
    let picture = std::fs::read_to_string(&svg).unwrap();
    assert!(picture.contains("<polyline") && picture.contains("<circle"));
}

#[test]
fn optimal_c_reports_case_and_bound() {
    let doc = json(&["optimal-c", "--n", "2", "--beta=-1", "--delta", DELTA]);
    assert_eq!(doc["case"], "2");
    assert_eq!(doc["optimal_c"], 5.0);
    assert!(doc["bound_rhs_per_unit_norm"].as_f64().unwrap() > 0.0);

    let doc = json(&[
        "optimal-c",
        "--n",
        "1",
        "--beta",
        "6.5",
        "--l",
        "1",
        "--c-min",
        "0.2",
        "--c-max",
        "10",
    ]);
    assert_eq!(doc["boundary_optimum"], true);
    assert_eq!(doc["optimal_c"], 0.2);
}

#[test]
fn verify_bound_holds_and_zero_data() {
    let doc = json(&[
        "verify-bound",
        "--n",
        "2",
        "--beta=-1",
        "--delta",
        DELTA,
        "--c",
        "5",
    ]);
    let run0 = &doc["runs"][0];
    assert_eq!(run0["holds"], true);
    assert!(run0["ratio"].as_f64().unwrap() <= 1.0);
    assert!(run0["cond_estimate"].is_number());
    assert!(run0["node_residual"].is_number());

    let doc = json(&[
        "verify-bound",
        "--n",
        "2",
        "--beta=-1",
        "--delta",
        DELTA,
        "--c",
        "5",
        "--amplitude",
        "0",
    ]);
    let run0 = &doc["runs"][0];
    assert_eq!(run0["empirical_max_error"], 0.0);
    assert_eq!(run0["bound_rhs"], 0.0);
    assert_eq!(run0["holds"], true);
}

#[test]
fn verify_bound_multiquadric() {
    let doc = json(&[
        "verify-bound",
        "--n",
        "1",
        "--beta",
        "1",
        "--delta",
        DELTA,
        "--c",
        "0.5,1,2",
    ]);
    for r in doc["runs"].as_array().unwrap() {
        if r["status"] == "ok" {
            assert_eq!(r["holds"], true, "{r}");
        }
    }
}

#[test]
fn exit_codes() {
    // even nonnegative integer exponent
    assert_eq!(
        run(&["constants", "--n", "2", "--beta", "2"]).status.code(),
        Some(2)
    );
    // gap between the inverse multiquadric hypotheses
    assert_eq!(
        run(&["optimal-c", "--n", "1", "--beta=-0.5", "--l", "2"])
            .status
            .code(),
        Some(3)
    );
    // conditioning failure marks the run inconclusive
    let out = run(&[
        "verify-bound",
        "--n",
        "2",
        "--beta=-1",
        "--delta",
        DELTA,
        "--c",
        "1000",
    ]);
    assert_eq!(out.status.code(), Some(4));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["runs"][0]["status"], "inconclusive");
    assert!(doc["runs"][0]["holds"].is_null());
    // missing flags and out-of-range overrides
    assert_eq!(
        run(&["mn-curve", "--n", "2", "--beta=-1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&[
            "verify-bound",
            "--n",
            "2",
            "--beta=-1",
            "--delta",
            DELTA,
            "--c",
            "1",
            "--l",
            "9"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        run(&[
            "verify-bound",
            "--n",
            "2",
            "--beta=-1",
            "--delta",
            DELTA,
            "--c",
            "1",
            "--sigma0",
            "1"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        run(&[
            "sweep",
            "--n",
            "2",
            "--beta=-1",
            "--delta",
            DELTA,
            "--grid-degree",
            "4"
        ])
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn sweep_columns_and_gaps() {
    let out = run(&[
        "sweep",
        "--n",
        "2",
        "--beta=-1",
        "--delta",
        DELTA,
        "--points",
        "25",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows = data_lines(&text);
    assert_eq!(rows[0], "c,empirical_max_error,bound_rhs,mn_value");
    assert_eq!(rows.len(), 26);
    for row in &rows[1..] {
        assert_eq!(row.split(',').count(), 4);
    }
    // tiny c fits fine, huge c is numerically singular and left blank
    assert!(!rows[1].split(',').nth(1).unwrap().is_empty());
    assert!(rows[25].split(',').nth(1).unwrap().is_empty());
}

#[test]
fn json_sweep_is_parseable() {
    let doc = json(&[
        "sweep",
        "--n",
        "1",
        "--beta=-1",
        "--delta",
        DELTA,
        "--points",
        "5",
        "--format",
        "json",
    ]);
    assert_eq!(doc["rows"].as_array().unwrap().len(), 5);
    assert_eq!(doc["case"], "3");
}
