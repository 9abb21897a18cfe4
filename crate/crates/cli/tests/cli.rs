use std::f64::consts::PI;
use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn dualspace(args: &[&str], stdin: Option<&str>, env_seed: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_dualspace"));
    cmd.args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped());
    cmd.env_remove("DUALSPACE_SEED");
    if let Some(seed) = env_seed {
        cmd.env("DUALSPACE_SEED", seed);
    }
    let mut child = cmd.spawn().expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(args: &[&str], stdin: Option<&str>) -> Value {
    let out = dualspace(args, stdin, None);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

#[test]
fn report_keys_are_fixed() {
    let v = json(&["lattice-info", "--space", "gr-real:2:3"], None);
    let mut keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    keys.sort_unstable();
    assert_eq!(keys, ["method", "residuals", "result", "seed", "space", "version"]);
}

#[test]
fn lattice_info_examples() {
    let v = json(&["lattice-info", "--space", "gr-real 2 3"], None);
    assert_eq!(v["result"]["orthonormal"], Value::Bool(true));
    for n in v["result"]["generator_norms"].as_array().unwrap() {
        assert!((f(n) - PI).abs() < 1e-15);
    }
    let su3 = json(&["lattice-info", "--space", "su3"], None);
    assert_eq!(su3["result"]["orthonormal"], Value::Bool(false));
    let c = json(&["lattice-info", "--space", "gr-complex:1:1"], None);
    assert_eq!(c["result"]["rank"], 1);
}

#[test]
fn embed_all_on_rank_one_agrees() {
    let y = format!("[[{}]]", 1f64.tanh());
    let v = json(&["embed", "--space", "gr-real:1:1", "--method", "all", "--input", "-"], Some(&y));
    for key in ["p-g", "p-f", "g-f"] {
        assert!(f(&v["residuals"][key]) < 1e-9, "{key}");
    }
    assert!((f(&v["result"]["input_metric_coordinates"][0]) - 1.0).abs() < 1e-12);
    let theta = f(&v["result"]["f"]["compact_metric_coordinates"][0]);
    assert!((theta - 0.6508801680230075).abs() < 1e-12);
}

#[test]
fn b_on_the_sphere() {
    let v = json(&["embed", "--space", "sphere:1:2", "--method", "b", "--t", "1"], None);
    assert!((f(&v["result"]["b"]["angle"]) - 0.8657694832396586).abs() < 1e-14);
    assert_eq!(f(&v["result"]["b"]["image_fraction"]), 0.25);
    let neg = json(&["embed", "--space", "sphere:1:2", "--method", "b", "--t", "-1"], None);
    assert!((f(&neg["result"]["b"]["angle"]) + 0.8657694832396586).abs() < 1e-14);
}

#[test]
fn identity_input_gives_base_point() {
    let zero = json(&["embed", "--space", "gr-real:2:3"], Some("0,0\n0,0\n0,0\n"));
    let group = json(
        &["embed", "--space", "gr-real:2:3", "--group"],
        Some("1,0,0,0,0\n0,1,0,0,0\n0,0,1,0,0\n0,0,0,1,0\n0,0,0,0,1\n"),
    );
    for v in [zero, group] {
        for method in ["p", "g", "f"] {
            let rep = &v["result"][method]["subspace"];
            assert_eq!(rep, &serde_json::json!([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]]));
        }
    }
}

#[test]
fn complex_csv_input() {
    let v = json(&["embed", "--space", "gr-complex:1:1"], Some("# Y block\n[0.3;0.4]\n"));
    assert!(f(&v["residuals"]["p-f"]) < 1e-9);
    assert!(v["result"]["f"]["subspace"][1][0].is_array());
}

#[test]
fn cutlocus_grid_matches_closed_form() {
    let out =
        dualspace(&["cutlocus-grid", "--space", "gr-real:2:2", "--samples", "360", "--format", "csv"], None, None);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("index,phi,u1,u2,radius"));
    let mut min = f64::INFINITY;
    for line in lines {
        let cells: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        let closed = PI / (2.0 * cells[2].abs().max(cells[3].abs()));
        assert!((cells[4] - closed).abs() <= 1e-12 * closed, "{line}");
        min = min.min(cells[4]);
    }
    assert!((min - PI / 2.0).abs() < 1e-12);
}

#[test]
fn cutlocus_grid_rank_one_and_symmetry() {
    let v = json(&["cutlocus-grid", "--space", "sphere:1:2", "--samples", "5"], None);
    let rows = v["result"]["rows"].as_array().unwrap();
    assert!(rows.iter().all(|r| f(&r[2]) == 2.0 * PI));
    let g = json(&["cutlocus-grid", "--space", "gr-real:2:3", "--samples", "64"], None);
    let rows = g["result"]["rows"].as_array().unwrap();
    for i in 1..32 {
        let (a, b) = (f(&rows[i][4]), f(&rows[64 - i][4]));
        let c = f(&rows[i + 32][4]);
        assert!((a - b).abs() < 1e-12 && (a - c).abs() < 1e-12);
    }
    let bad = dualspace(&["cutlocus-grid", "--space", "gr-real:4:4"], None, None);
    assert_eq!(bad.status.code(), Some(3));
}

#[test]
fn cut_radius_su3_uses_brute_force() {
    let v = json(&["cut-radius", "--space", "su3", "--direction", "1,-1", "--lattice-coords"], None);
    assert_eq!(v["method"], "brute-force");
    let scale = PI * 2f64.sqrt();
    assert!((f(&v["result"]["radius"]) - 0.816496580927726 * scale).abs() < 1e-12);
    assert!((f(&v["result"]["naive_radius"]) - 1.224744871391589 * scale).abs() < 1e-12);
    let gr = json(&["cut-radius", "--space", "gr-real:2:3", "--direction", "0.6,-0.8"], None);
    assert_eq!(gr["method"], "closed-form");
    assert!((f(&gr["result"]["radius"]) - PI / 1.6).abs() < 1e-12);
}

#[test]
fn output_is_deterministic() {
    let args = ["verify", "--space", "gr-complex:1:2", "--property", "equivariance", "--samples", "4"];
    let a = dualspace(&args, None, None);
    let b = dualspace(&args, None, None);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn seed_precedence() {
    let args = ["lattice-info", "--space", "su3"];
    let seed_of = |out: Output| serde_json::from_slice::<Value>(&out.stdout).unwrap()["seed"].as_u64().unwrap();
    assert_eq!(seed_of(dualspace(&args, None, None)), 0x5EED);
    assert_eq!(seed_of(dualspace(&args, None, Some("0x10"))), 16);
    let flagged = ["lattice-info", "--space", "su3", "--seed", "7"];
    assert_eq!(seed_of(dualspace(&flagged, None, Some("0x10"))), 7);
    assert_eq!(dualspace(&args, None, Some("seven")).status.code(), Some(2));
}

#[test]
fn verify_passes_and_fails_with_exit_codes() {
    let ok = dualspace(&["verify", "--space", "gr-real:2:3", "--property", "cut-loci", "--samples", "10"], None, None);
    assert_eq!(ok.status.code(), Some(0));
    let strict = dualspace(
        &["verify", "--space", "gr-real:2:3", "--property", "round-trip", "--samples", "10", "--tolerance", "1e-300"],
        None,
        None,
    );
    assert_eq!(strict.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&strict.stdout).unwrap();
    assert_eq!(v["result"]["passed"], Value::Bool(false));
    let unsupported =
        dualspace(&["verify", "--space", "sphere:1:2", "--property", "cut-loci", "--samples", "3"], None, None);
    assert_eq!(unsupported.status.code(), Some(3));
}

#[test]
fn usage_and_domain_errors() {
    let cases: [(&[&str], Option<&str>, i32); 8] = [
        (&["lattice-info", "--space", "torus:1:1"], None, 2),
        (&["nope"], None, 2),
        (&["verify", "--samples", "0"], None, 2),
        (&["verify", "--tolerance", "-1"], None, 2),
        (&["embed", "--space", "gr-real:1:1"], Some("not a number"), 2),
        (&["embed", "--space", "gr-real:1:1"], Some("2"), 3),
        (&["embed", "--space", "gr-real:1:2"], Some("0.1,0.2"), 3),
        (&["embed", "--space", "gr-real:1:1", "--method", "b", "--t", "1"], None, 3),
    ];
    for (args, stdin, code) in cases {
        let out = dualspace(args, stdin, None);
        assert_eq!(out.status.code(), Some(code), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}
