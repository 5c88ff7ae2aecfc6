//! Hermite functions from the three-term recurrence: orthonormality on the
//! grid and a mixed Hermite window.
//!
//! Run with `cargo run --example hermite_windows`.

use gabor_diag::frames::{hermite_functions, hermite_window};
use gabor_diag::tf::{gs_decay_check, GS_MAX_RESIDUAL, GS_MIN_R_SQUARED};
use gabor_diag::{Grid, Signal};
use num_complex::Complex64;

fn main() -> gabor_diag::Result<()> {
    let grid = Grid::new(8.0, 256)?;
    let hs = hermite_functions(grid, 8)?;

    let mut worst: f64 = 0.0;
    for (i, a) in hs.iter().enumerate() {
        for (j, b) in hs.iter().enumerate() {
            let expected = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((a.inner(b)? - expected).norm());
        }
    }
    println!("max |<H_i, H_j> - delta_ij| over i, j <= 8: {worst:.3e}");
    println!("|H_0 - Gaussian| = {:.3e}", hs[0].rel_error(&Signal::gaussian(grid))?);

    let coeffs = [1.0, 0.0, 0.5].map(|c| Complex64::new(c, 0.0));
    let g = hermite_window(grid, 2, &coeffs)?;
    let fit = gs_decay_check(&g, &g, 0.5)?;
    println!(
        "H_0 + H_2/2: STFT decay eps = {:.3}, R^2 = {:.4}, max residual = {:.3}, within class: {}",
        fit.params.eps,
        fit.r_squared,
        fit.max_residual,
        fit.within(GS_MIN_R_SQUARED, GS_MAX_RESIDUAL)
    );
    Ok(())
}
