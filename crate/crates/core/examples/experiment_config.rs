//! Running the `analyze` pipeline from a JSON config through the library,
//! as the `gabor-diag` binary does, and listing what it wrote.
//!
//! Run with `cargo run --release --example experiment_config`.

use gabor_diag::cli::{cmd_analyze, ExperimentConfig};
use serde_json::json;

fn main() -> gabor_diag::Result<()> {
    let dir = tempfile::tempdir()?;
    let cfg = ExperimentConfig::from_value(&json!({
        "grid": { "extent": 8.0, "n_points": 128 },
        "lattice": { "alpha": 0.5, "beta": 0.5 },
        "window": { "kind": "gaussian" },
        "symbol": { "kind": "gaussian", "params": { "width": 1.0 } },
        "route": "both",
        "output_dir": dir.path().to_str().expect("utf-8 temp path"),
        "seed": 42
    }))?;
    for path in cmd_analyze(&cfg)? {
        println!("{}  {} bytes", path.file_name().unwrap().to_string_lossy(), std::fs::metadata(&path)?.len());
    }
    let summary: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("analyze.json"))?)?;
    println!("checks: {}", summary["checks"]);

    match ExperimentConfig::from_value(&json!({ "grid": { "extent": 8.0, "n_points": 128 }, "lattice": { "alpha": 0.5, "beta": 0.5 }, "window": {}, "symbol": { "kind": "constant" } })) {
        Err(e) => println!("bad config rejected with exit code {}: {e}", e.exit_code()),
        Ok(_) => println!("bad config accepted"),
    }
    Ok(())
}
