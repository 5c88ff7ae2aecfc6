//! Cross-Wigner distribution and its STFT form
//! `W(f, g)(x, xi) = 2 e^{4 pi i x xi} V_{g~} f(2x, 2xi)` with `g~(t) = g(-t)`.
//!
//! Run with `cargo run --example wigner_stft_relation`.

use gabor_diag::frames::hermite_functions;
use gabor_diag::tf::{stft, wigner};
use gabor_diag::{Grid, Signal};
use num_complex::Complex64;
use std::f64::consts::PI;

fn main() -> gabor_diag::Result<()> {
    let n = 256;
    let grid = Grid::new(8.0, n)?;
    let h = hermite_functions(grid, 2)?;
    let phi = Signal::gaussian(grid);

    let w = wigner(&phi, &phi)?;
    println!("W(phi, phi)(0, 0) = {:.12}", w.get(n / 2, n / 2).re);

    for (f, g) in [(&phi, &h[1]), (&h[2], &phi)] {
        let w = wigner(f, g)?;
        let v = stft(f, &g.reflected())?;
        // (2x, 2xi) stays on the grid for the central quarter of indices
        let mut err: f64 = 0.0;
        for j in n / 4..3 * n / 4 {
            for l in n / 4..3 * n / 4 {
                let z = w.point(j, l);
                let rhs = Complex64::from_polar(2.0, 4.0 * PI * z.x * z.xi) * v.get(2 * j - n / 2, 2 * l - n / 2);
                err = err.max((w.get(j, l) - rhs).norm());
            }
        }
        println!("{} / {}: max |W - 2 e^(4 pi i x xi) V| = {err:.3e}", f.label, g.label);
    }
    Ok(())
}
