use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const TABLE_A: &str = "[[0,3],[1,0],[0,0],[0,1]]";
const TABLE_B: &str = "[[7,0],[0,-2],[1,0]]";

fn trl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trl"))
        .args(args)
        .env("TRL_THREADS", "2")
        .output()
        .expect("spawn trl")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn coeffs(v: &Value) -> Vec<(f64, f64)> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|c| (c[0].as_f64().unwrap(), c[1].as_f64().unwrap()))
        .collect()
}

#[test]
fn sequence_sixth_term_is_b_squared() {
    let out = trl(&["sequence", "--A", TABLE_A, "--B", TABLE_B, "--k", "5", "--l", "3", "--n", "6"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["tool"], "trl");
    assert!(v["version"].is_string());
    let p6 = coeffs(&v["data"][6]);
    // (z^2 - 2iz + 7)^2 = z^4 - 4i z^3 + 10 z^2 - 28i z + 49
    assert_eq!(p6, vec![(49.0, 0.0), (0.0, -28.0), (10.0, 0.0), (0.0, -4.0), (1.0, 0.0)]);
}

#[test]
fn sequence_of_length_zero_is_one() {
    let out = trl(&["sequence", "--A", TABLE_A, "--B", TABLE_B, "--k", "5", "--l", "3", "--n", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let data = v["data"].as_array().unwrap();
    assert_eq!(data.len(), 1);
    assert_eq!(coeffs(&data[0]), vec![(1.0, 0.0)]);
}

#[test]
fn invalid_input_exits_two() {
    let out = trl(&["sequence", "--A", TABLE_A, "--B", TABLE_B, "--k", "6", "--l", "3", "--n", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("k and l must be coprime"), "{}", stderr(&out));

    let out = trl(&["verify", "--A", "[[0,3],[1", "--B", TABLE_B, "--k", "5", "--l", "3", "--n", "17"]);
    assert_eq!(out.status.code(), Some(2));

    let out = trl(&["verify", "--A", TABLE_A, "--B", "[[0,0]]", "--k", "5", "--l", "3", "--n", "17"]);
    assert_eq!(out.status.code(), Some(2));

    let out = trl(&["table1", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_table_spec_passes() {
    let out = trl(&["verify", "--n", "17,23,56"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["data"]["passed"], true);
    assert_eq!(v["data"]["rows"].as_array().unwrap().len(), 3);
}

#[test]
fn fuzz_is_deterministic() {
    let a = trl(&["verify", "--fuzz", "25", "--seed", "3"]);
    let b = trl(&["verify", "--fuzz", "25", "--seed", "3"]);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let c = trl(&["verify", "--fuzz", "25", "--seed", "4"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn table_rows_and_golden_csv() {
    let out = trl(&["table1"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    let rows = v["data"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    let counts: Vec<usize> = rows.iter().map(|r| r["ratios"].as_array().unwrap().len()).collect();
    assert_eq!(counts, vec![4, 20, 20, 20]);
    assert!(rows[0]["ratios"].as_array().unwrap().iter().all(|r| r["multiplicity"] == 5));

    let csv = trl(&["table1", "--format", "csv"]);
    assert_eq!(csv.status.code(), Some(0));
    let golden = std::fs::read(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/table1_golden.csv")).unwrap();
    assert_eq!(String::from_utf8_lossy(&csv.stdout), String::from_utf8_lossy(&golden));
}

#[test]
fn tight_table_tolerance_fails() {
    let out = trl(&["table1", "--tol", "1e-9"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!stderr(&out).is_empty());
}

#[test]
fn g_profile_reference_level() {
    let out = trl(&["plotdata", "g", "--k", "5", "--l", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let g1 = v["data"]["g1"].as_f64().unwrap();
    assert!((g1 - 3125.0 / 108.0).abs() < 1e-12);
}

#[test]
fn ratio_scatter_for_table_spec() {
    let out = trl(&["plotdata", "ratios", "--n", "56"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("\"UnitCircle\"") || text.contains("UnitCircle"));
}

#[test]
fn alpha_star_series() {
    let out = trl(&[
        "plotdata", "alphastar", "--k", "3", "--l", "1", "--A", "[[0,0],[2,0]]", "--B", "[[0,0],[3,0]]", "--n-max", "96",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    let pts = v["data"].as_array().unwrap();
    let ns: Vec<u64> = pts.iter().map(|p| p["n"].as_u64().unwrap()).collect();
    assert_eq!(ns, (0..20).map(|i| 1 + 5 * i).collect::<Vec<u64>>());
    let alphas: Vec<f64> = pts.iter().filter_map(|p| p["alpha_star"].as_f64()).collect();
    assert!(alphas.iter().all(|&a| a < 6.75));
    assert!(*alphas.last().unwrap() > 6.7);
}

#[test]
fn outputs_embed_version_and_config() {
    let dir = tempfile::tempdir().unwrap();
    let json_path = dir.path().join("report.json");
    let csv_path = dir.path().join("report.csv");
    let out = trl(&["verify", "--n", "17", "-o", json_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["config"]["n"][0], 17);

    let out = trl(&["verify", "--n", "17", "--format", "csv", "-o", csv_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv_path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), format!("# trl {}", env!("CARGO_PKG_VERSION")));
    assert!(lines.next().unwrap().starts_with("# config: {"));
    assert_eq!(lines.next().unwrap(), "n,z0_re,z0_im,i,j,q_re,q_im,kind,dist_real,dist_circle");
}

#[test]
fn unwritable_output_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("out.json");
    let out = trl(&["plotdata", "g", "--k", "5", "--l", "3", "-o", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}
