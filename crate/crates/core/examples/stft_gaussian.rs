//! STFT of the standard Gaussian against itself, checked against the closed
//! form `e^{-pi i x xi} e^{-pi (x^2 + xi^2) / 2}`, plus its decay fit.
//!
//! Run with `cargo run --example stft_gaussian`.

use gabor_diag::tf::{gs_decay_check, stft, GS_MAX_RESIDUAL, GS_MIN_R_SQUARED};
use gabor_diag::{Grid, Signal};
use num_complex::Complex64;
use std::f64::consts::PI;

fn main() -> gabor_diag::Result<()> {
    let grid = Grid::new(8.0, 128)?;
    let phi = Signal::gaussian(grid);
    let v = stft(&phi, &phi)?;

    let mut err: f64 = 0.0;
    for j in 0..v.n() {
        for l in 0..v.n() {
            let z = v.point(j, l);
            let exact = Complex64::from_polar((-PI * (z.x * z.x + z.xi * z.xi) / 2.0).exp(), -PI * z.x * z.xi);
            err = err.max((v.get(j, l) - exact).norm());
        }
    }
    println!("max |V - closed form| = {err:.3e}");
    println!("|V(0,0)| = {:.15}", v.get(64, 64).norm());

    let fit = gs_decay_check(&phi, &phi, 0.5)?;
    println!(
        "decay fit at s = 1/2: eps = {:.4} (pi/2 = {:.4}), R^2 = {:.6}, within class: {}",
        fit.params.eps,
        PI / 2.0,
        fit.r_squared,
        fit.within(GS_MIN_R_SQUARED, GS_MAX_RESIDUAL)
    );
    Ok(())
}
