//! Writing a signal and its STFT to the self-describing binary container
//! and reading them back.
//!
//! Run with `cargo run --example binary_container`.

use gabor_diag::io::{read_container, write_container};
use gabor_diag::tf::stft;
use gabor_diag::{Grid, Signal};
use serde_json::json;

fn main() -> gabor_diag::Result<()> {
    let dir = tempfile::tempdir()?;
    let grid = Grid::new(8.0, 64)?;
    let f = Signal::random(grid, 1);
    let v = stft(&f, &Signal::gaussian(grid))?;

    let path = dir.path().join("stft.bin");
    write_container(&path, &json!({ "kind": "tf_matrix", "grid": grid.json_sidecar(), "shape": [64, 64] }), &v.values)?;
    let (header, data) = read_container(&path)?;
    println!("header: {header}");
    println!("{} values, bitwise identical: {}", data.len(), data == v.values);
    println!("file size {} bytes", std::fs::metadata(&path)?.len());
    Ok(())
}
