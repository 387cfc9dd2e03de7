use std::path::Path;
use std::process::{Command, Output};

const QUBIT_Z: &str = "[[[[1,0],[0,0]],[[0,0],[0,0]]],[[[0,0],[0,0]],[[0,0],[1,0]]]]";

fn qbet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qbet"))
        .args(args)
        .output()
        .expect("failed to launch qbet")
}

fn json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is not JSON")
}

fn value(out: &Output) -> f64 {
    json(out)["value"].as_f64().expect("missing value")
}

#[test]
fn renyi_entropy_of_order_two() {
    let v = value(&qbet(&["compute", "renyi-entropy", "--pmf", "[0.5,0.25,0.25]", "--alpha", "2"]));
    let oracle = -(0.25f64 + 0.0625 + 0.0625).log2();
    assert!((v - oracle).abs() < 1e-12);
    assert!((v - 1.41504).abs() < 1e-5);
}

#[test]
fn risk_flag_is_reciprocal_order() {
    let a = value(&qbet(&["compute", "renyi-entropy", "--pmf", "[0.7,0.2,0.1]", "--alpha", "0.5"]));
    let r = value(&qbet(&["compute", "renyi-entropy", "--pmf", "[0.7,0.2,0.1]", "--risk", "2"]));
    assert_eq!(a, r);
}

#[test]
fn projective_qubit_measurement_has_unit_robustness() {
    let v = value(&qbet(&["compute", "robustness", "--povm", QUBIT_Z]));
    assert!((v - 1.0).abs() < 1e-9);
}

#[test]
fn independent_joint_has_no_information_at_infinite_order() {
    let out = qbet(&["compute", "arimoto-mi", "--joint", "[[0.2,0.3],[0.2,0.3]]", "--alpha", "inf"]);
    let j = json(&out);
    assert_eq!(j["alpha"], "inf");
    assert!(j["value"].as_f64().unwrap().abs() < 1e-12);
}

#[test]
fn invalid_input_exits_with_two() {
    let out = qbet(&["compute", "renyi-entropy", "--pmf", "[0.5,0.6]", "--alpha", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = qbet(&["verify", "result1", "--trials", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn failed_verification_exits_with_one() {
    let out = qbet(&["verify", "result1", "--seed", "3", "--trials", "1", "--tol", "1e-300"]);
    assert_eq!(out.status.code(), Some(1));
    let reports = serde_json::from_slice::<serde_json::Value>(&out.stdout).unwrap();
    assert_eq!(reports[0]["pass"], false);
}

#[test]
fn verification_is_reproducible() {
    let args = ["verify", "result1", "--seed", "11", "--trials", "2"];
    let a = qbet(&args);
    let b = qbet(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn every_suite_passes_a_smoke_run() {
    let out = qbet(&["verify", "all", "--seed", "5", "--trials", "1"]);
    let reports = json(&out);
    let reports = reports.as_array().unwrap();
    assert!(reports.len() > 1);
    assert!(reports.iter().all(|r| r["pass"] == true));
}

#[test]
fn generated_instances_feed_back_into_compute() {
    let dir = tempfile::tempdir().unwrap();
    let path = |name: &str| dir.path().join(name).to_string_lossy().into_owned();
    let (e, m) = (path("ensemble.json"), path("povm.json"));
    assert!(qbet(&["gen", "ensemble", "--seed", "4", "--dim", "2", "--n", "3", "--out", &e]).status.success());
    assert!(qbet(&["gen", "povm", "--seed", "4", "--dim", "2", "--outcomes", "3", "--out", &m]).status.success());
    assert!(Path::new(&e).exists());
    let again = qbet(&["gen", "ensemble", "--seed", "4", "--dim", "2", "--n", "3"]);
    assert_eq!(std::fs::read(&e).unwrap(), again.stdout);
    let v = value(&qbet(&["compute", "arimoto-mi", "--ensemble", &e, "--povm", &m, "--alpha", "2"]));
    assert!(v.is_finite() && v >= -1e-12);
}

#[test]
fn isoelastic_sweep_is_linear_at_zero_risk() {
    let out = qbet(&["sweep", "isoelastic-utility"]);
    assert!(out.status.success());
    let mut rdr = csv::Reader::from_reader(out.stdout.as_slice());
    let header: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header[0], "w");
    let col = header.iter().position(|h| h == "u_R=0").expect("no R = 0 column");
    let u: Vec<f64> = rdr
        .records()
        .map(|r| r.unwrap()[col].parse().unwrap())
        .collect();
    assert_eq!(u.len(), 65);
    for w in u.windows(3) {
        assert_eq!(w[2] - 2.0 * w[1] + w[0], 0.0);
    }
}
