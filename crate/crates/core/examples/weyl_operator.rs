//! Weyl quantization on the grid: constant, position-only and
//! frequency-only symbols act as identity, multiplication and Fourier
//! multiplier.
//!
//! Run with `cargo run --example weyl_operator`.

use gabor_diag::grid::CenteredFft;
use gabor_diag::weyl::{build_symbol, weyl_apply, SymbolSpec};
use gabor_diag::{Grid, Signal};
use std::f64::consts::PI;

fn main() -> gabor_diag::Result<()> {
    let grid = Grid::new(8.0, 256)?;
    let f = Signal::random(grid, 3);

    let one = build_symbol(&SymbolSpec::Constant { value: 1.0 }, grid)?;
    println!("sigma = 1:      |Af - f| / |f| = {:.3e}", weyl_apply(&one, &f)?.rel_error(&f)?);

    let a = build_symbol(&SymbolSpec::Separable { width: 1.0 }, grid)?;
    let mut expect = f.clone();
    for (v, x) in expect.values.iter_mut().zip(grid.points()) {
        *v *= (-PI * x * x).exp();
    }
    println!("sigma = a(x):   |Af - a f| / |a f| = {:.3e}", weyl_apply(&a, &f)?.rel_error(&expect)?);

    let m = build_symbol(&SymbolSpec::Multiplier { width: 1.0 }, grid)?;
    let fft = CenteredFft::new(grid.n_points);
    let mut spec = f.values.clone();
    fft.forward(&mut spec);
    for (v, xi) in spec.iter_mut().zip(grid.freqs()) {
        *v *= (-PI * xi * xi).exp() / grid.n_points as f64;
    }
    fft.inverse(&mut spec);
    let expect = Signal::new(grid, spec, "m(D) f")?;
    println!("sigma = m(xi):  |Af - m(D) f| / |m(D) f| = {:.3e}", weyl_apply(&m, &f)?.rel_error(&expect)?);
    Ok(())
}
