//! Decay law of a Gabor matrix: envelope over `|lambda - mu|`, fits at
//! several class indices and the selected one.
//!
//! Run with `cargo run --release --example decay_fit`.

use gabor_diag::decay::{decay_envelope, estimate_s, fit_matrix_decay, DecayFitOptions};
use gabor_diag::frames::{GaborSystem, Lattice};
use gabor_diag::weyl::{build_symbol, gabor_matrix, MatrixOptions, Route, SymbolSpec};
use gabor_diag::{Grid, Signal};

fn main() -> gabor_diag::Result<()> {
    let cases = [
        (SymbolSpec::Gaussian { width: 1.0 }, 128, 10.0),
        (SymbolSpec::GevreyBump { s: 2.0, radius: 3.0 }, 256, 6.0),
    ];
    for (spec, n, min_decades) in cases {
        let grid = Grid::new(8.0, n)?;
        let sys = GaborSystem::new(Signal::gaussian(grid), Lattice::new(grid, 0.5, 0.5, None)?)?;
        let m = gabor_matrix(&build_symbol(&spec, grid)?, &sys, Route::Stft, &MatrixOptions::default())?;
        let env = decay_envelope(&m);
        println!("{} (N = {n}): {} distances, largest {:.3e}", spec.name(), env.len(), env[0].1);
        let opts = DecayFitOptions { min_decades, ..Default::default() };
        for s in [0.5, 1.0, 2.0] {
            match fit_matrix_decay(&m, s, &opts) {
                Ok(f) => println!(
                    "  s = {s}: eps = {:.4}, C = {:.4}, R^2 = {:.5}, max residual = {:.3}, {:.1} decades",
                    f.params.eps, f.params.c, f.r_squared, f.max_residual, f.decades
                ),
                Err(e) => println!("  s = {s}: {e}"),
            }
        }
        let (best, _) = estimate_s(&m, &[0.5, 1.0, 2.0], &opts)?;
        println!("  selected s = {best}");
    }
    Ok(())
}
