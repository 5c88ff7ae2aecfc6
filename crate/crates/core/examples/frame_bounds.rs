//! Frame bounds of Gaussian Gabor systems across lattice densities,
//! by power iteration and by dense eigendecomposition.
//!
//! Run with `cargo run --example frame_bounds`.

use gabor_diag::frames::{dense_frame_bounds, frame_bounds, GaborSystem, Lattice};
use gabor_diag::{Error, Grid, Signal};

fn main() -> gabor_diag::Result<()> {
    let grid = Grid::new(8.0, 128)?;
    println!("{:>6} {:>6} {:>8} {:>12} {:>12} {:>12}", "alpha", "beta", "density", "A", "B", "B/A");
    for (alpha, beta) in [(0.25, 0.25), (0.5, 0.5), (0.5, 1.0), (1.0, 1.0), (2.0, 1.0)] {
        let lat = Lattice::new(grid, alpha, beta, None)?;
        let sys = GaborSystem::new(Signal::gaussian(grid), lat)?;
        match frame_bounds(&sys) {
            Ok(b) => {
                let dense = dense_frame_bounds(&sys)?;
                println!(
                    "{alpha:>6} {beta:>6} {:>8} {:>12.6e} {:>12.6e} {:>12.4e}   dense: {:.6e} {:.6e}",
                    alpha * beta,
                    b.lower,
                    b.upper,
                    b.condition(),
                    dense.lower,
                    dense.upper
                );
            }
            Err(Error::NotAFrame { lower, upper }) => {
                println!("{alpha:>6} {beta:>6} {:>8} not a frame (A = {lower:.3e}, B = {upper:.3e})", alpha * beta);
            }
            Err(e) => return Err(e),
        }
    }
    Ok(())
}
