//! Lattice convolution of the decay weight with itself against the
//! majorant `e^{-eps' |lambda|^{1/s}}`, at two truncation radii.
//!
//! Run with `cargo run --release --example weight_convolution`.

use gabor_diag::decay::weight_convolution_check;

fn main() -> gabor_diag::Result<()> {
    for (s, eps) in [(1.0, 1.0), (0.5, 1.0)] {
        for radius in [40.0, 80.0] {
            let r = weight_convolution_check(s, eps, 0.5, 0.5, radius, 20.0)?;
            println!(
                "s = {s}, eps = {eps}, radius {radius}: majorant eps' = {:.4}, max ratio on |lambda| <= 20 = {:.10}, tail <= {:.1e}",
                r.majorant_eps, r.max_ratio, r.tail_bound
            );
        }
    }
    Ok(())
}
