//! Weyl operators of sampled symbols and their Gabor matrices.

mod kernel;
mod matrix;
mod symbol;

pub use matrix::{
    compare_routes, gabor_matrix, gabor_matrix_direct, gabor_matrix_stft, wigner_window,
    GaborMatrix, MatrixOptions, Route, RouteComparison, SymbolStft,
};
pub use symbol::{build_symbol, SymbolField, SymbolSpec};

use crate::error::{Error, Result};
use crate::grid::{PhasePoint, Signal};
use num_complex::Complex64;
use rayon::prelude::*;

/// `j(z1, z2) = (z2, -z1)`.
pub fn rotate_j(v: PhasePoint) -> PhasePoint {
    PhasePoint::new(v.xi, -v.x)
}

/// `j^{-1}(z1, z2) = (-z2, z1)`.
pub fn rotate_j_inv(v: PhasePoint) -> PhasePoint {
    PhasePoint::new(-v.xi, v.x)
}

/// `sigma^w f(x_i) = sum_k K(x_i, y_k) f_k dx` with the kernel built from one
/// inverse FFT per midpoint row of the symbol.
pub fn weyl_apply(sigma: &SymbolField, f: &Signal) -> Result<Signal> {
    if sigma.grid != f.grid {
        return Err(Error::GridMismatch);
    }
    let n = f.grid.n_points;
    let dx = f.grid.spacing();
    let k = kernel::weyl_kernel(sigma);
    let values = (0..n)
        .into_par_iter()
        .map(|i| {
            let row = &k[i * n..(i + 1) * n];
            row.iter().zip(&f.values).map(|(kk, fv)| kk.to_c64() * fv).sum::<Complex64>() * dx
        })
        .collect();
    Ok(Signal { grid: f.grid, values, label: format!("{}^w {}", sigma.label, f.label) })
}
