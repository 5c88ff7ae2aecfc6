use gabor_diag::io::read_container;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gabor-diag"))
}

fn small_config(dir: &Path, extra: Value) -> std::path::PathBuf {
    let mut cfg = json!({
        "grid": { "extent": 8.0, "n_points": 64 },
        "lattice": { "alpha": 0.5, "beta": 0.5 },
        "window": { "kind": "gaussian" },
        "signal": { "kind": "random" },
        "symbol": { "kind": "gaussian" },
        "output_dir": dir.join("out").to_str().unwrap(),
        "seed": 3
    });
    for (k, v) in extra.as_object().unwrap() {
        cfg[k] = v.clone();
    }
    let p = dir.join("config.json");
    std::fs::write(&p, serde_json::to_string_pretty(&cfg).unwrap()).unwrap();
    p
}

fn run(args: &[&str], config: &Path) -> Output {
    bin().args(args).arg("--config").arg(config).output().unwrap()
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn snapshot(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap()))
        .collect()
}

#[test]
fn corpus_list_names_every_registry() {
    let out = bin().args(["corpus", "list"]).output().unwrap();
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["symbols"].as_array().unwrap().contains(&json!("gevrey_bump")));
    assert!(v["windows"].as_array().unwrap().contains(&json!("hermite")));
    assert_eq!(v["tool"]["version"], json!(env!("CARGO_PKG_VERSION")));
}

#[test]
fn missing_window_kind_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), json!({ "window": { "params": { "width": 1.0 } } }));
    let out = run(&["stft"], &cfg);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("window.kind"));
}

#[test]
fn config_problems_exit_with_status_two() {
    let dir = tempfile::tempdir().unwrap();
    let unknown = small_config(dir.path(), json!({ "colour": "blue" }));
    assert_eq!(run(&["stft"], &unknown).status.code(), Some(2));
    assert_eq!(run(&["stft"], &dir.path().join("absent.json")).status.code(), Some(2));
    assert_eq!(bin().arg("stft").output().unwrap().status.code(), Some(2));
    let skewed = small_config(dir.path(), json!({ "lattice": { "alpha": 0.3, "beta": 0.5 } }));
    assert_eq!(run(&["frame"], &skewed).status.code(), Some(2));
}

#[test]
fn sparse_lattice_is_a_numerical_failure() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), json!({ "lattice": { "alpha": 2.0, "beta": 1.0 } }));
    let out = run(&["frame"], &cfg);
    assert_eq!(out.status.code(), Some(3));
    let report = read_json(&dir.path().join("out/frame.json"));
    assert_eq!(report["status"], json!("not_a_frame"));
    assert_eq!(report["operation"], json!("frame"));
}

#[test]
fn stft_outputs_are_self_describing() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), json!({}));
    let out = run(&["stft", "--seed", "11"], &cfg);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let o = dir.path().join("out");

    let report = read_json(&o.join("stft.json"));
    assert_eq!(report["tool"]["name"], json!("gabor-diag"));
    assert_eq!(report["tool"]["version"], json!(env!("CARGO_PKG_VERSION")));
    assert_eq!(report["config"]["seed"], json!(11));
    assert_eq!(report["config"]["grid"]["n_points"], json!(64));

    let csv = std::fs::read_to_string(o.join("stft.csv")).unwrap();
    assert!(csv.starts_with("j,l,x,xi,re,im\r\n"));
    assert_eq!(csv.lines().count(), 1 + 64 * 64);

    let (header, data) = read_container(&o.join("stft.bin")).unwrap();
    assert_eq!(data.len(), 64 * 64);
    assert_eq!(header["tool"]["name"], json!("gabor-diag"));
    let (_, sig) = read_container(&o.join("signal.bin")).unwrap();
    assert_eq!(sig.len(), 64);
    // no temporary files left behind
    assert!(std::fs::read_dir(&o).unwrap().all(|e| !e.unwrap().file_name().to_string_lossy().starts_with(".tmp")));
}

#[test]
fn frame_reports_bounds_and_reconstruction() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), json!({}));
    let out = run(&["frame", "--threads", "1"], &cfg);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report = read_json(&dir.path().join("out/frame.json"));
    assert!(report["bounds"]["A"].as_f64().unwrap() > 0.0);
    let csv = std::fs::read_to_string(dir.path().join("out/reconstruction.csv")).unwrap();
    assert!(csv.lines().count() > 1);
}

#[test]
fn matrix_with_both_routes_compares_them() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), json!({ "symbol": { "kind": "cauchy" } }));
    let out = run(&["matrix", "--route", "both"], &cfg);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let o = dir.path().join("out");
    assert!(o.join("matrix_direct.csv").exists() && o.join("matrix_stft.csv").exists());
    let report = read_json(&o.join("matrix.json"));
    assert!(report["comparison"]["max_rel_discrepancy"].as_f64().unwrap() <= 1e-6);
    assert_eq!(report["config"]["route"], json!("both"));
}

#[test]
fn analyze_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), json!({ "route": "stft" }));
    assert!(run(&["analyze"], &cfg).status.success());
    let first = snapshot(&dir.path().join("out"));
    assert!(first.contains_key("analyze.json") && first.contains_key("sparse_apply.csv"));
    assert!(run(&["analyze", "--threads", "1"], &cfg).status.success());
    assert_eq!(first, snapshot(&dir.path().join("out")));
}
