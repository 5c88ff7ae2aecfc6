//! Applying a Weyl operator through its thresholded Gabor matrix:
//! analysis with the dual window, sparse multiply, synthesis.
//!
//! Run with `cargo run --release --example sparse_apply`.

use gabor_diag::decay::sparse_apply;
use gabor_diag::frames::{dual_window, GaborSystem, Lattice};
use gabor_diag::weyl::{build_symbol, gabor_matrix, weyl_apply, MatrixOptions, Route, SymbolSpec};
use gabor_diag::{Grid, Signal};

fn main() -> gabor_diag::Result<()> {
    let grid = Grid::new(8.0, 128)?;
    let mut sys = GaborSystem::new(Signal::gaussian(grid), Lattice::new(grid, 0.5, 0.5, None)?)?;
    dual_window(&mut sys, 1e-10)?;
    let sigma = build_symbol(&SymbolSpec::Cauchy { width: 1.0 }, grid)?;
    let m = gabor_matrix(&sigma, &sys, Route::Stft, &MatrixOptions::default())?;
    let f = Signal::random(grid, 11);

    let exact = weyl_apply(&sigma, &f)?;
    let (full, _) = sparse_apply(&m, &sys, &f, 0.0)?;
    println!("all retained entries: error against the operator {:.3e}", full.rel_error(&exact)?);
    for tau in [1e-2, 1e-4, 1e-6, 1e-8] {
        let (y, kept) = sparse_apply(&m, &sys, &f, tau)?;
        println!("tau = {tau:.0e}: kept {:.4} of entries, error {:.3e}", kept, y.rel_error(&full)?);
    }
    Ok(())
}
