use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_convdom"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

fn sizes(v: &Value) -> Vec<u64> {
    v["sizes"].as_array().unwrap().iter().map(|s| s["size"].as_u64().unwrap()).collect()
}

#[test]
fn ball_z2() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let v = json_of(&run(&["ball", "--group", "Z2", "--n", "6", "--out", out]));
    assert_eq!(sizes(&v), [5, 13, 25, 41, 61, 85]);
    assert!((f(&v["fit"]["degree"]) - 2.0).abs() < 0.1);
    let csv = fs::read_to_string(dir.path().join("ball.csv")).unwrap();
    assert!(csv.starts_with("n,size\n1,5\n"));
    assert!(dir.path().join("growth.json").exists());
    let cfg: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("config.json")).unwrap()).unwrap();
    assert_eq!(cfg["common"]["group"], "Z2");
    assert_eq!(cfg["command"]["command"], "ball");
}

#[test]
fn ball_small_radii() {
    let v = json_of(&run(&["ball", "--group", "H3", "--n", "2"]));
    assert_eq!(sizes(&v), [5, 17]);
    let v = json_of(&run(&["ball", "--group", "Z1", "--n", "3"]));
    assert_eq!(sizes(&v), [3, 5, 7]);
    assert!((f(&v["fit"]["degree"]) - 1.0).abs() < 1e-9);
}

#[test]
fn floats_have_17_digits() {
    let out = run(&["ball", "--group", "Z1", "--n", "3"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("1.0000000000000000e+0"), "{text}");
}

#[test]
fn weights_verdicts() {
    let v = json_of(&run(&["weights", "--group", "Z1", "--weight", "poly:s=2"]));
    assert_eq!(v["grs"]["verdict"], "pass");
    assert_eq!(v["ugrs"]["verdict"], "pass");
    assert_eq!(f(&v["ratio"]["max_ratio"]), 1.0);
    assert_eq!(v["v"].as_array().unwrap().len(), 21);

    let v = json_of(&run(&["weights", "--group", "Z1", "--weight", "exp:c=0.7"]));
    assert_eq!(v["grs"]["verdict"], "fail");

    let v = json_of(&run(&["weights", "--group", "Z2", "--weight", "prodz2:s=2"]));
    assert_eq!(v["ugrs"]["verdict"], "pass");
    assert_eq!(v["ugrs"]["generating_set"], "{-1,0,1}xZ");
    assert_eq!(v["ugrs"]["enumerated_through"], 0);
}

#[test]
fn verify_exit_codes() {
    for g in ["Z1", "H3"] {
        let v = json_of(&run(&["verify", "--group", g, "--seed", "7"]));
        assert_eq!(v["passed"], true);
        assert_eq!(v["suites"].as_array().unwrap().len(), 5);
    }
    let out = run(&["verify", "--group", "F2"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json_of(&run(&["verify", "--group", "F2", "--allow-out-of-hypothesis"]));
    assert_eq!(v["passed"], true);
}

#[test]
fn usage_errors() {
    assert_eq!(run(&["ball", "--group", "Q7", "--n", "3"]).status.code(), Some(2));
    assert_eq!(run(&["weights", "--group", "Z1", "--weight", "poly"]).status.code(), Some(2));
    assert_eq!(run(&["weights", "--group", "H3", "--weight", "prodz2:s=1"]).status.code(), Some(2));
    assert_eq!(run(&["invert", "--group", "Z1", "--radii", "8,4"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn resource_limit_exit_code() {
    assert_eq!(run(&["ball", "--group", "Z8", "--n", "12"]).status.code(), Some(4));
}

#[test]
fn invert_contractive() {
    let v = json_of(&run(&[
        "invert", "--group", "Z1", "--support", "2", "--mass", "0.5", "--rate", "0.5", "--radii", "20,30,40",
    ]));
    for r in v["study"]["radii"].as_array().unwrap() {
        assert!(f(&r["envelope_l1"]) <= 2.05);
        assert!(f(&r["residual"]) <= 1e-8);
    }
    assert!((f(&v["neumann_bound"]) - 2.0).abs() < 1e-12);
    assert_eq!(v["study"]["verdict"]["consistent"], true);
}

#[test]
fn invert_hermitian_beyond_neumann() {
    let v = json_of(&run(&[
        "invert", "--group", "Z1", "--support", "4", "--mass", "1.5", "--rate", "1", "--hermitian", "--radii",
        "16,24,32", "--identity", "3",
    ]));
    assert!(f(&v["cd_norm_off_identity"]) > 1.0);
    assert_eq!(v["study"]["verdict"]["consistent"], true);
}

#[test]
fn invert_singular_exit_3() {
    let out = run(&[
        "invert", "--group", "Z1", "--identity", "0", "--support", "1", "--mass", "2", "--phases", "positive",
        "--radii", "4,8,16",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("singular"));
}

#[test]
fn invert_weighted() {
    let v = json_of(&run(&[
        "invert", "--group", "Z1", "--support", "0", "--mass", "0", "--offset", "1=-0.5", "--radii", "20,30,40",
        "--margin", "10", "--weight", "poly:s=2",
    ]));
    assert!((f(&v["study"]["weighted_norm"]) - 12.0).abs() < 0.01);
    assert_eq!(v["study"]["member"], true);
}

fn dir_bytes(p: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(p)
        .unwrap()
        .map(|e| e.unwrap())
        .filter(|e| e.file_name() != "config.json")
        .map(|e| (e.file_name().into_string().unwrap(), fs::read(e.path()).unwrap()))
        .collect();
    files.sort();
    files
}

#[test]
fn invert_outputs_are_reproducible() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for (d, jobs) in [(&a, "1"), (&b, "3")] {
        let out = run(&[
            "invert", "--group", "Z2", "--support", "2", "--mass", "0.6", "--radii", "4,6,8", "--seed", "11",
            "--jobs", jobs, "--out", d.path().to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    let (x, y) = (dir_bytes(a.path()), dir_bytes(b.path()));
    assert_eq!(x.len(), 4);
    assert!(x == y);
    let curve = String::from_utf8(x[0].1.clone()).unwrap();
    assert!(curve.starts_with("z,|z|,b_value\n\"0,0\",0,"), "{curve}");
}

#[test]
fn spectral_toeplitz() {
    let v = json_of(&run(&["spectral", "--group", "Z1", "--toeplitz", "1,1", "--kmax", "4"]));
    let r: Vec<f64> = v["report"]["r"].as_array().unwrap().iter().map(f).collect();
    assert_eq!(r.len(), 5);
    assert!(r.windows(2).all(|w| w[1] <= w[0] + 1e-12));
    assert!((r[4] - 4.0).abs() < 1e-9);
    assert!((f(&v["opnorm_squared"]) - 4.0).abs() < 0.01);
}

#[test]
fn spectral_shift_and_random() {
    let v = json_of(&run(&["spectral", "--group", "H3", "--shift", "1,0,0", "--kmax", "3"]));
    for r in v["report"]["r"].as_array().unwrap() {
        assert!((f(r) - 1.0).abs() < 1e-12);
    }
    let v = json_of(&run(&["spectral", "--group", "Z2", "--seed", "5", "--kmax", "3"]));
    assert_eq!(v["report"]["r_nonincreasing"], true);
}

#[test]
fn intertwine_batch() {
    let v = json_of(&run(&["intertwine", "--group", "Z2", "--seed", "3", "--cases", "5"]));
    assert_eq!(v["result"]["passed"], true);
    assert_eq!(v["result"]["cases"], 5);
}
