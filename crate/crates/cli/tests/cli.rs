use std::process::{Command, Output};

use serde_json::Value;

fn qsiegel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qsiegel")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("bad json ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn write_spec(name: &str, text: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("qsiegel-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn check_catalog_entry() {
    let out = qsiegel(&["check", "@heisenberg-rank1:R", "--metric-samples", "20000"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["consistent"], true);
    assert_eq!(v["mf"], true);
    assert!((v["metric_scale"].as_f64().unwrap() - 1.0).abs() < 1e-6);
}

#[test]
fn check_spec_file_without_mf() {
    let spec = r#"{"algebra": {"kind": "diagonal", "r": 1}, "representation": {"kind": "standard"}, "W": {"basis": []}}"#;
    let p = write_spec("zero.json", spec);
    let out = qsiegel(&["check", p.to_str().unwrap(), "--metric-samples", "0"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["mf"], false);
    for c in v["certificates"].as_array().unwrap() {
        assert_eq!(c["verdict"], false);
        assert!(c["witness"]["vectors"].is_array());
    }
}

#[test]
fn malformed_input_exits_1() {
    let p = write_spec("bad.json", r#"{"algebra": {"kind": "diagonal", "r": 1}, "W": {}}"#);
    let out = qsiegel(&["check", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    let p = write_spec("dep.json", r#"{"algebra": {"kind": "diagonal", "r": 1}, "representation": {"kind": "standard"}, "W": {"basis": [[1, 0], [2, 0]]}}"#);
    assert_eq!(qsiegel(&["check", p.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(qsiegel(&["check", "@no-such-entry"]).status.code(), Some(1));
    assert_eq!(qsiegel(&["check", "/nonexistent/spec.json"]).status.code(), Some(1));
    // usage errors are input errors too, not the "certifiers disagree" status
    assert_eq!(qsiegel(&["--tol", "sub=-1", "check", "@diag2:R2"]).status.code(), Some(1));
    assert_eq!(qsiegel(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn kernels_psd_and_lambda() {
    let out = qsiegel(&["kernels", "@heisenberg-rank1:R", "--x", "1", "--points", "20", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["verdict"], "PSD");
    assert_eq!(v["gram"]["points"], 20);
    assert_eq!(v["k"], 0);
    let out = qsiegel(&["kernels", "@heisenberg-rank1:R", "--x", "1", "--chi", "10,0"]);
    assert_eq!(json(&out)["verdict"], "PSD");
    let out = qsiegel(&["kernels", "@diag2:V", "--x", "1,-1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not in"));
}

#[test]
fn bergman_rank1() {
    let out = qsiegel(&["bergman", "@heisenberg-rank1:R", "--p1", "i,0", "--p2", "i,0"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    let k = v["kernel"]["value"][0].as_f64().unwrap();
    assert!((k - 0.05066).abs() < 1e-5);
    assert_eq!(v["kernel"]["method"], "quadrature");
    let out = qsiegel(&["bergman", "@heisenberg-rank1:R", "--p1", "0.5i,1", "--p2", "i,0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn orbit_and_catalog() {
    let v = json(&qsiegel(&["orbit", "@heisenberg-rank1:R", "--x", "1"]));
    assert_eq!(v["multiplicity_one"], true);
    let v = json(&qsiegel(&["orbit", "@heisenberg-rank1:0", "--x", "1"]));
    assert_eq!(v["multiplicity_one"], false);
    let list = json(&qsiegel(&["catalog"]));
    assert!(list.as_array().unwrap().len() >= 5);
    let out = qsiegel(&["catalog", "--export", "sym2-main2"]);
    let spec = json(&out);
    assert_eq!(spec["W"]["basis"].as_array().unwrap().len(), 3);
    // the export is a loadable spec
    let p = write_spec("export.json", &String::from_utf8(out.stdout).unwrap());
    let v = json(&qsiegel(&["check", p.to_str().unwrap(), "--metric-samples", "0"]));
    assert_eq!(v["mf"], true);
}

#[test]
fn output_is_thread_independent() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_qsiegel"))
            .args(["check", "@sym2-main2", "--metric-samples", "30000", "--seed", "4"])
            .env("RAYON_NUM_THREADS", threads)
            .output()
            .unwrap()
            .stdout
    };
    let one = run("1");
    assert!(!one.is_empty());
    assert_eq!(one, run("4"));
}
