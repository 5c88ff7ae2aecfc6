use super::SymbolField;
use crate::xprec::{Cdd, DdFft};
use rayon::prelude::*;

/// Weyl kernel `K(x_i, y_k)` (row-major `N x N`, without the `dx` of the
/// final Riemann sum), evaluated in double-double.
///
/// Row `p` of the symbol (midpoint `-T + p dx/2`) is inverse transformed in
/// `xi`, giving `khat_p(delta) = dxi sum_l sigma(p, l) e^{2 pi i delta xi_l dx}`;
/// then `K(i, k) = khat_p(delta)` with `delta = i - k` wrapped to `[-N/2, N/2)`
/// and `p = 2k + delta (mod 2N)`.
pub(crate) fn weyl_kernel(sigma: &SymbolField) -> Vec<Cdd> {
    let n = sigma.grid.n_points;
    let dxi = sigma.grid.freq_spacing();
    let fft = DdFft::new(n);
    let khat: Vec<Vec<Cdd>> = (0..2 * n)
        .into_par_iter()
        .map(|p| {
            let mut row: Vec<Cdd> = sigma.row(p).iter().map(|&v| Cdd::from_c64(v)).collect();
            fft.process(&mut row, true);
            row.iter().enumerate().map(|(d, v)| v.scale(dxi).neg_if(d % 2 == 1)).collect()
        })
        .collect();
    let mut k = vec![Cdd::ZERO; n * n];
    let half = (n / 2) as i64;
    for i in 0..n {
        for kk in 0..n {
            let delta = (i as i64 - kk as i64 + half).rem_euclid(n as i64) - half;
            let p = (2 * kk as i64 + delta).rem_euclid(2 * n as i64) as usize;
            k[i * n + kk] = khat[p][delta.rem_euclid(n as i64) as usize];
        }
    }
    k
}
