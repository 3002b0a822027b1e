use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::{json, Value};

fn qmapk(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_qmapk"))
        .args(args)
        .env_remove("QMAPK_MAX_ITERS")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn ok_json(args: &[&str], stdin: &str) -> Value {
    let out = qmapk(args, stdin);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

const LINE: &str = r#"{"degree":1,"weight":"1","sections":[["0","1"],["1","0"]]}"#;
const HALF_POINT: &str = r#"{"degree":2,"weight":"1/4","sections":[[1,0,0],[0,0,1]],
    "boundary":[{"form":[0,1],"coeff":"1/2"}],"r":2}"#;
const GENERIC_WEIERSTRASS: &str = r#"{"k":1,"A":[1,0,0,0,1],"B":[1,1,0,0,0,2,1]}"#;
const RAMIFIED: &str = r#"{"degree":2,"weight":"1/2","sections":[[["0"],["0"],["1"]],[["0","-1"],["0"],["1"]]]}"#;

#[test]
fn classify_line_is_stable_with_zero_delta() {
    let v = ok_json(&["classify"], LINE);
    assert_eq!(v["class"], "Stable");
    assert_eq!(v["delta"], "0");
}

#[test]
fn delta_of_cubic_rescaling() {
    let out = qmapk(&["rescale", "--l", "3"], LINE);
    let rescaled = String::from_utf8(out.stdout).unwrap();
    assert_eq!(ok_json(&["delta"], &rescaled), json!({"delta": "4/3"}));
}

#[test]
fn reads_input_from_file() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(HALF_POINT.as_bytes()).unwrap();
    let path = f.path().to_str().unwrap();
    let v = ok_json(&["classify", path], "");
    assert_eq!(v["class"], "Semistable");
    let d = ok_json(&["degenerate", "--point", "0", path], "");
    assert_eq!(d["beta"], "0");
    assert_eq!(d["is_product_type"], false);
    let central = serde_json::to_string(&d["central_fiber"]).unwrap();
    assert_eq!(ok_json(&["classify"], &central)["class"], "Polystable");
    assert_eq!(ok_json(&["isom", path, path], ""), json!({"isomorphic": true}));
}

#[test]
fn elliptic_generic_model() {
    let v = ok_json(&["elliptic", "analyze"], GENERIC_WEIERSTRASS);
    assert_eq!(v["moduliDegree"], "1");
    assert_eq!(v["adiabatic"], "StrictlyStable");
    assert_eq!(v["associated"]["weight"], "1/12");
}

#[test]
fn reduce_dvr_needs_square_root() {
    let v = ok_json(&["reduce-dvr"], RAMIFIED);
    assert_eq!(v["baseChangeExponent"], 2);
    assert_eq!(v["steps"].as_array().unwrap().len(), 1);
    assert_eq!(v["result"]["sections"][1], json!([["-1"], [], ["1"]]));
}

#[test]
fn iteration_cap_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_qmapk"))
        .args(["reduce-dvr", "-"])
        .env("QMAPK_MAX_ITERS", "0")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .and_then(|mut c| {
            c.stdin.take().unwrap().write_all(RAMIFIED.as_bytes())?;
            c.wait_with_output()
        })
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["error"], "NonTermination");
}

#[test]
fn cm_degree_of_cubic_pencil() {
    let pencil = r#"{"degree":3,"base_degree":1,"weight":"1/3",
        "sections":[[[0,1],[0,0],[0,0],[1,0]],[[1,0],[0,0],[0,0],[0,1]]]}"#;
    let v = ok_json(&["cm-degree", "--samples", "3"], pencil);
    assert_eq!(v["degree"], "2/3");
    assert_eq!(v["verdict"], "Consistent");
    assert_eq!(v["fibers"].as_array().unwrap().len(), 3);
}

#[test]
fn domain_error_is_structured_exit_one() {
    let out = qmapk(&["classify"], r#"{"degree":2,"weight":"1","sections":[]}"#);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["error"], "DegenerateInput");
    assert!(v["message"].is_string());
}

#[test]
fn malformed_input_exits_two() {
    for bad in ["{oops", r#"{"degree":1,"weight":"1/0","sections":[["1","0"]]}"#, "[]"] {
        assert_eq!(qmapk(&["classify"], bad).status.code(), Some(2), "{bad}");
    }
    assert_eq!(qmapk(&["degenerate", "--point", "zz"], LINE).status.code(), Some(2));
}

#[test]
fn unknown_command_exits_two() {
    let out = qmapk(&["frobnicate"], "");
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn output_is_deterministic() {
    for args in [&["classify"][..], &["rescale", "--l", "2"][..], &["degenerate", "--point", "inf"][..]] {
        let a = qmapk(args, HALF_POINT).stdout;
        let b = qmapk(args, HALF_POINT).stdout;
        assert_eq!(a, b);
    }
}

#[test]
fn emitted_quasimaps_round_trip() {
    let once = qmapk(&["rescale", "--l", "1"], HALF_POINT).stdout;
    let twice = qmapk(&["rescale", "--l", "1"], std::str::from_utf8(&once).unwrap()).stdout;
    assert_eq!(once, twice);
    let report = ok_json(&["elliptic", "analyze"], GENERIC_WEIERSTRASS);
    let model = serde_json::to_string(&report["model"]).unwrap();
    assert_eq!(ok_json(&["elliptic", "analyze"], &model), report);
}

#[test]
fn pretty_marks_approximations() {
    let out = qmapk(&["--format", "pretty", "classify"], HALF_POINT);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"1/2 ≈ 0.500000\""));
    assert!(text.contains('\n'));
}
