//! The three equivalent descriptions of a symbol class: weighted sup of
//! `V_Phi sigma`, factorial derivative bounds, and exponential decay of
//! the Gabor matrix, for a smooth and a discontinuous symbol.
//!
//! Run with `cargo run --release --example diag_theorem`.

use gabor_diag::decay::{verify_diag_theorem, DiagTheoremOptions};
use gabor_diag::frames::{GaborSystem, Lattice};
use gabor_diag::weyl::{build_symbol, SymbolSpec};
use gabor_diag::{Grid, Signal};

fn main() -> gabor_diag::Result<()> {
    let grid = Grid::new(8.0, 128)?;
    let sys = GaborSystem::new(Signal::gaussian(grid), Lattice::new(grid, 0.5, 0.5, None)?)?;
    let opts = DiagTheoremOptions::default();
    let cases = [
        (SymbolSpec::Gaussian { width: 1.0 }, 0.5),
        (SymbolSpec::Gaussian { width: 1.0 }, 1.0),
        (SymbolSpec::Boxcar { half_width_x: 1.0, half_width_xi: 1.0 }, 0.5),
    ];
    for (spec, s) in cases {
        let sigma = build_symbol(&spec, grid)?;
        let report = verify_diag_theorem(&sigma, &sys, s, &opts)?;
        println!("{} at s = {s}: pass = {}", spec.name(), report.pass);
        for leg in &report.legs {
            println!(
                "  {:<28} pass = {:<5} eps = {:<10} measured = {:<10} {}",
                leg.leg,
                leg.pass,
                leg.eps.map_or("-".into(), |v| format!("{v:.4}")),
                leg.measured.map_or("-".into(), |v| format!("{v:.4}")),
                leg.note.as_deref().unwrap_or("")
            );
        }
    }
    Ok(())
}
