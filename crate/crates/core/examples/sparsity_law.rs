//! Sorted column magnitudes `|a|_n` of a Gabor matrix against `n^{1/(2ds)}`,
//! and the inequality `n^{1/p} |a|_n <= ||a||_p` behind the law.
//!
//! Run with `cargo run --release --example sparsity_law`.

use gabor_diag::decay::{lp_mechanism_check, sparsity_profile, ColumnProfile};
use gabor_diag::frames::{GaborSystem, Lattice};
use gabor_diag::weyl::{build_symbol, gabor_matrix, MatrixOptions, Route, SymbolSpec};
use gabor_diag::{Grid, Signal};

fn main() -> gabor_diag::Result<()> {
    let grid = Grid::new(8.0, 128)?;
    let lat = Lattice::new(grid, 0.5, 0.5, None)?;
    let sys = GaborSystem::new(Signal::gaussian(grid), lat)?;
    let m = gabor_matrix(&build_symbol(&SymbolSpec::Gaussian { width: 1.0 }, grid)?, &sys, Route::Stft, &MatrixOptions::default())?;

    let prof = sparsity_profile(&m, 1, 0.5);
    println!(
        "gaussian symbol: {} columns fitted, {} skipped, min R^2 = {:.4}",
        prof.columns.len() - prof.skipped.len(),
        prof.skipped.len(),
        prof.min_r_squared.unwrap_or(f64::NAN)
    );
    if let Some(f) = prof.fit {
        println!("uniform law over columns: C = {:.4}, eps = {:.4}, R^2 = {:.5}", f.params.c, f.params.eps, f.r_squared);
    }
    let ps: Vec<f64> = (1..=8).map(|k| 1.0 / k as f64).collect();
    let lp = lp_mechanism_check(&m, &ps);
    println!("n^(1/p) |a|_n <= ||a||_p for p = 1..1/8: {} ({} violations)", lp.pass, lp.violations);

    // a column whose sorted magnitudes follow the law exactly
    let (c, eps, d, s) = (2.0, 0.3, 1, 0.5);
    let mags: Vec<f64> = (1..=400).map(|n| c * (-eps * (n as f64).powf(1.0 / (2.0 * d as f64 * s))).exp()).collect();
    let col = ColumnProfile::from_magnitudes(0, mags, d, s);
    let f = col.fit.expect("exact column fits");
    println!("exact column: C = {:.12} (want {c}), eps = {:.12} (want {eps})", f.params.c, f.params.eps);
    Ok(())
}
