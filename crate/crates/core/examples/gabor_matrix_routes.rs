//! Gabor matrix `<sigma^w pi(mu) g, pi(lambda) g>` computed by direct
//! quadrature and through the STFT of the symbol with the Wigner window,
//! for every symbol in the corpus.
//!
//! Run with `cargo run --release --example gabor_matrix_routes`.

use gabor_diag::frames::{GaborSystem, Lattice};
use gabor_diag::weyl::{build_symbol, compare_routes, gabor_matrix_direct, gabor_matrix_stft, MatrixOptions, SymbolSpec};
use gabor_diag::{Grid, Signal};
use std::time::Instant;

fn main() -> gabor_diag::Result<()> {
    let grid = Grid::new(8.0, 128)?;
    let lat = Lattice::new(grid, 0.5, 0.5, None)?;
    let sys = GaborSystem::new(Signal::gaussian(grid), lat)?;
    let opts = MatrixOptions::default();
    let corpus = [
        SymbolSpec::Constant { value: 1.0 },
        SymbolSpec::Gaussian { width: 1.0 },
        SymbolSpec::Cauchy { width: 1.0 },
        SymbolSpec::Sine { omega_x: 0.25, omega_xi: 0.25 },
        SymbolSpec::GevreyBump { s: 2.0, radius: 3.0 },
    ];
    for spec in &corpus {
        let sigma = build_symbol(spec, grid)?;
        let t = Instant::now();
        let direct = gabor_matrix_direct(&sigma, &sys, &opts)?;
        let via_stft = gabor_matrix_stft(&sigma, &sys, &opts)?;
        let cmp = compare_routes(&direct, &via_stft)?;
        println!(
            "{:<12} max entry {:.4e}  rel. discrepancy {:.2e} over {} entries  complex {:.2e}  ({:.2?})",
            spec.name(),
            direct.max_entry(),
            cmp.max_rel_discrepancy,
            cmp.n_compared,
            cmp.max_abs_complex_discrepancy,
            t.elapsed()
        );
    }
    Ok(())
}
