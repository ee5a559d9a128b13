use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use serde_json::Value;
use ternquart::algebra::eta0;
use ternquart::{Algebra, TernaryForm};

const BIN: &str = env!("CARGO_BIN_EXE_ternquart");

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn write(dir: &Path, name: &str, body: &[u8]) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn eta0_file(dir: &Path) -> String {
    write(dir, "eta0.json", &run(&["example", "eta0"]).stdout)
}

#[test]
fn example_matches_library_fixture() {
    let o = run(&["example", "eta0"]);
    assert_eq!(o.status.code(), Some(0));
    let alg: Algebra = serde_json::from_slice(&o.stdout).unwrap();
    assert!(alg.projective_distance(&eta0()) < 1e-12);
}

#[test]
fn idempotents_and_genericity() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["idempotents", &eta0_file(dir.path())]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let pts = v["idempotents"].as_array().unwrap();
    assert_eq!(pts.len(), 7);
    assert!(pts.iter().all(|p| p["multiplicity"] == 1));
    assert_eq!(v["genericity"]["is_a0_double_prime"], true);
}

#[test]
fn quartic_matches_golden_file() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["quartic", &eta0_file(dir.path())]);
    assert_eq!(o.status.code(), Some(0));
    let got: TernaryForm = serde_json::from_slice(&o.stdout).unwrap();
    let golden: TernaryForm = serde_json::from_str(&std::fs::read_to_string(fixture("eta0_quartic.json")).unwrap()).unwrap();
    let d = got.coeffs().iter().zip(golden.coeffs()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    assert!(d < 1e-8, "{d}");
    let v = json(&o);
    assert!(v["lambda"].is_array());
    assert!(v["scale_G"].as_f64().unwrap() > 0.0);
}

#[test]
fn bitangents_certify() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["bitangents", &eta0_file(dir.path())]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["bitangent_count"], 28);
    assert_eq!(v["certificates"].as_array().unwrap().len(), 28);
}

#[test]
fn verify_passes_on_eta0_text_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let e = eta0_file(dir.path());
    let o = run(&["verify", &e]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["pass"], true);
    let t = run(&["verify", &e, "--format", "text"]);
    assert!(String::from_utf8_lossy(&t.stdout).contains("overall              PASS"));
}

#[test]
fn double_idempotent_fails_general_position() {
    let f = fixture("double_idempotent.json");
    let o = run(&["verify", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["pass"], false);
    assert_eq!(v["genericity"]["seven_simple_points"], false);
    assert_eq!(v["genericity"]["is_a0_double_prime"], false);
    let mults: Vec<u64> = v["idempotents"].as_array().unwrap().iter().map(|p| p["multiplicity"].as_u64().unwrap()).collect();
    assert_eq!(mults.iter().sum::<u64>(), 7);
    assert!(mults.contains(&2));
    let t = run(&["verify", f.to_str().unwrap(), "--format", "text"]);
    assert!(String::from_utf8_lossy(&t.stdout).contains("seven simple points NO"));
}

#[test]
fn batch_verify_reports_each_seed() {
    let o = run(&["verify", "--random", "2", "--seed", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let entries = v.as_array().unwrap();
    assert_eq!(entries.len(), 2);
    assert_eq!(entries[0]["input"], "random:4");
    assert_eq!(entries[1]["input"], "random:5");
}

#[test]
fn batch_exit_reflects_failures() {
    let dir = tempfile::tempdir().unwrap();
    let e = eta0_file(dir.path());
    let f = fixture("double_idempotent.json");
    let o = run(&["verify", &e, f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v[0]["pass"], true);
    assert_eq!(v[1]["pass"], false);
}

#[test]
fn invert_round_trips_eta0() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(&run(&["idempotents", &eta0_file(dir.path())]));
    let points: Vec<&Value> = v["idempotents"].as_array().unwrap().iter().map(|p| &p["point"]).collect();
    let p = write(dir.path(), "points.json", &serde_json::to_vec(&serde_json::json!({ "points": points })).unwrap());
    let o = run(&["invert", &p]);
    assert_eq!(o.status.code(), Some(0));
    let alg: Algebra = serde_json::from_slice(&o.stdout).unwrap();
    assert!(alg.projective_distance(&eta0()) < 1e-8);
}

#[test]
fn invert_rejects_collinear_points() {
    let dir = tempfile::tempdir().unwrap();
    let r = |a: f64, b: f64, c: f64| serde_json::json!([[a, 0.0], [b, 0.0], [c, 0.0]]);
    let pts = vec![r(1., 0., 0.), r(0., 1., 0.), r(1., 1., 0.), r(0., 0., 1.), r(1., 2., 3.), r(2., -1., 1.), r(-1., 3., 2.)];
    let p = write(dir.path(), "points.json", &serde_json::to_vec(&serde_json::json!({ "points": pts })).unwrap());
    let o = run(&["invert", &p]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
}

#[test]
fn invert_rejects_wrong_point_count() {
    let dir = tempfile::tempdir().unwrap();
    let r = |a: f64| serde_json::json!([[a, 0.0], [1.0, 0.0], [0.0, 1.0]]);
    let p = write(dir.path(), "points.json", &serde_json::to_vec(&serde_json::json!({ "points": [r(1.0), r(2.0)] })).unwrap());
    assert_eq!(run(&["invert", &p]).status.code(), Some(3));
}

#[test]
fn zero_algebra_is_a_compute_error() {
    let dir = tempfile::tempdir().unwrap();
    let z = write(dir.path(), "zero.json", &serde_json::to_vec(&Algebra::zero()).unwrap());
    for cmd in ["idempotents", "quartic", "verify"] {
        let o = run(&[cmd, &z]);
        assert_eq!(o.status.code(), Some(2), "{cmd}");
    }
}

#[test]
fn bad_input_is_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "garbage.json", b"{ not json");
    assert_eq!(run(&["verify", &g]).status.code(), Some(3));
    assert_eq!(run(&["quartic", "/nonexistent/alg.json"]).status.code(), Some(3));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(run(&["example", "nosuch"]).status.code(), Some(3));

    // Trace-free fails: add a trace to η₀.
    let mut c = *eta0().constants();
    c[0][0][0] += ternquart::C::new(1.0, 0.0);
    let traced = Algebra::from_full(c).unwrap();
    let t = write(dir.path(), "traced.json", &serde_json::to_vec(&traced).unwrap());
    assert_eq!(run(&["idempotents", &t]).status.code(), Some(3));
}

#[test]
fn bad_viewport_is_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let e = eta0_file(dir.path());
    assert_eq!(run(&["plot", &e, "--view", "1,1,-3,3"]).status.code(), Some(3));
    assert_eq!(run(&["plot", &e, "--view", "1,2,3"]).status.code(), Some(3));
    assert_eq!(run(&["plot", &e, "--width", "0"]).status.code(), Some(3));
}

#[test]
fn plot_writes_svg_to_out() {
    let dir = tempfile::tempdir().unwrap();
    let e = eta0_file(dir.path());
    let out = dir.path().join("eta0.svg");
    let o = run(&["plot", &e, "--grid", "80", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let svg = std::fs::read_to_string(&out).unwrap();
    assert!(svg.contains("<svg") && svg.trim_end().ends_with("</svg>"));
}

#[test]
fn reads_stdin_and_honours_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "cfg.json", br#"{"format":"text","seed":3}"#);
    let mut child = Command::new(BIN)
        .args(["--config", &cfg, "idempotents", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(&run(&["example", "eta0"]).stdout).unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(serde_json::from_slice::<Value>(&o.stdout).is_err(), "text format expected");

    let bad = write(dir.path(), "bad.json", br#"{"tolerance":1}"#);
    assert_eq!(run(&["--config", &bad, "example", "eta0"]).status.code(), Some(3));
}

#[test]
fn random_is_seeded() {
    let a = run(&["random", "--seed", "9"]).stdout;
    let b = run(&["random", "--seed", "10"]).stdout;
    assert_ne!(a, b);
    assert_eq!(a, run(&["random", "--seed", "9"]).stdout);
    let real: Algebra = serde_json::from_slice(&run(&["random", "--seed", "9", "--real"]).stdout).unwrap();
    assert!(real.constants().iter().flatten().flatten().all(|z| z.im == 0.0));
}
