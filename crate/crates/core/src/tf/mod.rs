//! Time-frequency shifts, short-time Fourier transform, Wigner distribution
//! and modulation-space norms on a periodized grid.

mod norms;
mod transforms;

pub use norms::{
    fit_tf_decay, gs_decay_check, modulation_norm, FreqWeight, GS_MAX_RESIDUAL, GS_MIN_R_SQUARED,
};
pub use transforms::{stft, upsample2, wigner};

use crate::error::{Error, Result};
use crate::grid::{Grid, PhasePoint, Signal};
use num_complex::Complex64;

/// Values on the time-frequency grid: row `j` is time `x_j`, column `l` is
/// frequency `xi_l`, both taken from the same [`Grid`].
#[derive(Clone, Debug, PartialEq)]
pub struct TFMatrix {
    pub grid: Grid,
    pub values: Vec<Complex64>,
}

impl TFMatrix {
    pub fn new(grid: Grid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.n_points * grid.n_points {
            return Err(Error::GridMismatch);
        }
        Ok(TFMatrix { grid, values })
    }

    pub fn from_fn(grid: Grid, f: impl Fn(PhasePoint) -> Complex64) -> Self {
        let n = grid.n_points;
        let values = (0..n * n).map(|i| f(PhasePoint::new(grid.point(i / n), grid.freq(i % n)))).collect();
        TFMatrix { grid, values }
    }

    pub fn n(&self) -> usize {
        self.grid.n_points
    }

    pub fn get(&self, j: usize, l: usize) -> Complex64 {
        self.values[j * self.n() + l]
    }

    pub fn point(&self, j: usize, l: usize) -> PhasePoint {
        PhasePoint::new(self.grid.point(j), self.grid.freq(l))
    }

    pub fn max_modulus(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Index of a phase-space point, if both coordinates are on the grid.
    pub fn index_of(&self, z: PhasePoint) -> Option<(usize, usize)> {
        let n = self.n() as i64;
        let j = Grid::steps(z.x + self.grid.extent, self.grid.spacing())?;
        let l = Grid::steps(z.xi, self.grid.freq_spacing())? + n / 2;
        ((0..n).contains(&j) && (0..n).contains(&l)).then_some((j as usize, l as usize))
    }
}

/// `M_xi T_x f`, i.e. `f(t - x) e^{2 pi i xi t}` with circular translation.
pub fn tf_shift(f: &Signal, z: PhasePoint) -> Result<Signal> {
    let grid = f.grid;
    let n = grid.n_points;
    let shift = Grid::steps(z.x, grid.spacing()).ok_or(Error::OffGridShift(z.x))?;
    let shift = shift.rem_euclid(n as i64) as usize;
    let values = (0..n)
        .map(|k| {
            let t = grid.point(k);
            f.values[(k + n - shift) % n] * Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * z.xi * t)
        })
        .collect();
    Ok(Signal { grid, values, label: f.label.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_shift_is_identity() {
        let g = Grid::new(8.0, 64).unwrap();
        let f = Signal::random(g, 1);
        assert_eq!(tf_shift(&f, PhasePoint::default()).unwrap().values, f.values);
    }

    #[test]
    fn shift_is_unitary() {
        let g = Grid::new(8.0, 128).unwrap();
        let f = Signal::random(g, 2);
        let h = tf_shift(&f, PhasePoint::new(1.25, 0.37)).unwrap();
        assert!((h.norm() - f.norm()).abs() < 1e-14);
    }

    #[test]
    fn shifted_gaussian_peaks_at_shift() {
        let g = Grid::new(8.0, 256).unwrap();
        let h = tf_shift(&Signal::gaussian(g), PhasePoint::new(1.0, 0.0)).unwrap();
        let k = (0..256).max_by(|&a, &b| h.values[a].norm().total_cmp(&h.values[b].norm())).unwrap();
        assert!((g.point(k) - 1.0).abs() <= g.spacing());
    }

    #[test]
    fn off_grid_shift_is_rejected() {
        let g = Grid::new(8.0, 64).unwrap();
        let r = tf_shift(&Signal::gaussian(g), PhasePoint::new(0.1, 0.0));
        assert!(matches!(r, Err(Error::OffGridShift(_))));
    }
}
