//! Canonical dual window by conjugate gradients and perfect reconstruction
//! `f = sum <f, pi(lambda) g> pi(lambda) gamma` of random signals.
//!
//! Run with `cargo run --example dual_reconstruction`.

use gabor_diag::frames::{analysis, dual_window, frame_bounds, frame_operator, reconstruct, GaborSystem, Lattice};
use gabor_diag::{Grid, Signal};

fn main() -> gabor_diag::Result<()> {
    let grid = Grid::new(8.0, 128)?;
    let lat = Lattice::new(grid, 0.5, 0.5, None)?;
    let mut sys = GaborSystem::new(Signal::gaussian(grid), lat)?;
    let bounds = frame_bounds(&sys)?;
    println!("A = {:.10}, B = {:.10}", bounds.lower, bounds.upper);

    let gamma = dual_window(&mut sys, 1e-10)?;
    let residual = frame_operator(&sys, &gamma)?.rel_error(&sys.window)?;
    println!("dual window: |gamma| = {:.6}, |S gamma - g| / |g| = {residual:.3e}", gamma.norm());

    for seed in 0..5 {
        let f = Signal::random(grid, seed);
        let back = reconstruct(&sys, &f)?;
        let energy = analysis(&sys, &f)?.energy();
        let f2 = f.norm().powi(2);
        println!(
            "seed {seed}: reconstruction error {:.3e}, A|f|^2 <= sum |c|^2 <= B|f|^2: {:.6} <= {:.6} <= {:.6}",
            back.rel_error(&f)?,
            bounds.lower * f2,
            energy,
            bounds.upper * f2
        );
    }
    Ok(())
}
