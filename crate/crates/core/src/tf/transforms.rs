use super::TFMatrix;
use crate::error::{Error, Result};
use crate::grid::{CenteredFft, Signal};
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

/// `V_g f(x_j, xi_l) = sum_k f_k conj(g(t_k - x_j)) e^{-2 pi i xi_l t_k} dx`.
pub fn stft(f: &Signal, g: &Signal) -> Result<TFMatrix> {
    f.check_grid(g)?;
    if g.is_zero() {
        return Err(Error::ZeroWindow);
    }
    let n = f.grid.n_points;
    let dx = f.grid.spacing();
    let fft = CenteredFft::new(n);
    let rows: Vec<Vec<Complex64>> = (0..n)
        .into_par_iter()
        .map(|j| {
            let mut v: Vec<Complex64> =
                (0..n).map(|k| f.values[k] * g.values[(k + n + n / 2 - j) % n].conj()).collect();
            fft.forward(&mut v);
            v.iter_mut().for_each(|x| *x *= dx);
            v
        })
        .collect();
    TFMatrix::new(f.grid, rows.concat())
}

/// Band-limited interpolation onto the half-step grid `-T + k dx/2`, with the
/// Nyquist bin split evenly between the two new frequencies.
pub fn upsample2(f: &Signal) -> Vec<Complex64> {
    let n = f.grid.n_points;
    let mut planner = FftPlanner::new();
    let mut spec = f.values.clone();
    planner.plan_fft_forward(n).process(&mut spec);
    let mut wide = vec![Complex64::new(0.0, 0.0); 2 * n];
    for k in 0..n / 2 {
        wide[k] = spec[k];
    }
    for k in n / 2 + 1..n {
        wide[k + n] = spec[k];
    }
    wide[n / 2] = spec[n / 2] * 0.5;
    wide[n + n / 2] = spec[n / 2] * 0.5;
    planner.plan_fft_inverse(2 * n).process(&mut wide);
    let scale = 1.0 / n as f64;
    wide.iter_mut().for_each(|x| *x *= scale);
    wide
}

/// Cross-Wigner distribution
/// `W(f,g)(x,xi) = 2 int f(x + tau) conj(g(x - tau)) e^{-4 pi i xi tau} dtau`
/// sampled on the grid, with half-step values from [`upsample2`]. Lags run
/// over a full period, so a periodic copy of the cross term appears near
/// `x = -T`.
pub fn wigner(f: &Signal, g: &Signal) -> Result<TFMatrix> {
    f.check_grid(g)?;
    let n = f.grid.n_points;
    let dx = f.grid.spacing();
    let fu = upsample2(f);
    let gu = upsample2(g);
    let fft = FftPlanner::new().plan_fft_forward(n);
    let m2 = 2 * n;
    let rows: Vec<Vec<Complex64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let lag = |m: i64| {
                let p = (2 * i as i64 + m).rem_euclid(m2 as i64) as usize;
                let q = (2 * i as i64 - m).rem_euclid(m2 as i64) as usize;
                fu[p] * gu[q].conj()
            };
            let mut b: Vec<Complex64> = (0..n as i64)
                .map(|k| {
                    let v = lag(k) + lag(k - n as i64);
                    if k % 2 == 1 {
                        -v
                    } else {
                        v
                    }
                })
                .collect();
            fft.process(&mut b);
            b.iter_mut().for_each(|x| *x *= dx);
            b
        })
        .collect();
    TFMatrix::new(f.grid, rows.concat())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use std::f64::consts::PI;

    fn direct_stft(f: &Signal, g: &Signal, j: usize, l: usize) -> Complex64 {
        let grid = f.grid;
        let n = grid.n_points;
        let xi = grid.freq(l);
        (0..n)
            .map(|k| {
                let t = grid.point(k);
                let idx = (k + n + n / 2 - j) % n;
                f.values[k] * g.values[idx].conj() * Complex64::from_polar(1.0, -2.0 * PI * xi * t)
            })
            .sum::<Complex64>()
            * grid.spacing()
    }

    #[test]
    fn fft_path_matches_direct_sum() {
        let grid = Grid::new(8.0, 64).unwrap();
        let f = Signal::random(grid, 11);
        let g = Signal::gaussian(grid);
        let v = stft(&f, &g).unwrap();
        for j in (0..64).step_by(5) {
            for l in (0..64).step_by(3) {
                assert!((v.get(j, l) - direct_stft(&f, &g, j, l)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn gaussian_stft_closed_form() {
        let grid = Grid::new(8.0, 256).unwrap();
        let phi = Signal::gaussian(grid);
        let v = stft(&phi, &phi).unwrap();
        let mut err: f64 = 0.0;
        for j in 0..256 {
            for l in 0..256 {
                let z = v.point(j, l);
                let exact = (-PI * (z.x * z.x + z.xi * z.xi) / 2.0).exp();
                err = err.max((v.get(j, l).norm() - exact).abs());
            }
        }
        assert!(err < 1e-8, "{err}");
    }

    #[test]
    fn origin_value_is_inner_product() {
        let grid = Grid::new(8.0, 128).unwrap();
        let f = Signal::random(grid, 5);
        let g = Signal::gaussian(grid);
        let v = stft(&f, &g).unwrap();
        assert!((v.get(64, 64) - f.inner(&g).unwrap()).norm() < 1e-14);
    }

    #[test]
    fn zero_window_is_rejected() {
        let grid = Grid::new(8.0, 64).unwrap();
        assert!(matches!(
            stft(&Signal::gaussian(grid), &Signal::zeros(grid)),
            Err(Error::ZeroWindow)
        ));
    }

    #[test]
    fn gaussian_wigner_closed_form() {
        let grid = Grid::new(8.0, 256).unwrap();
        let phi = Signal::gaussian(grid);
        let w = wigner(&phi, &phi).unwrap();
        let mut err: f64 = 0.0;
        // the periodic lag sum has a ghost copy centred at x = -T
        for j in 64..192 {
            for l in 0..256 {
                let z = w.point(j, l);
                let exact = 2.0 * (-2.0 * PI * (z.x * z.x + z.xi * z.xi)).exp();
                err = err.max((w.get(j, l) - exact).norm());
            }
        }
        assert!(err < 1e-8, "{err}");
    }

    #[test]
    fn upsampling_keeps_samples() {
        let grid = Grid::new(8.0, 64).unwrap();
        let f = Signal::random(grid, 9);
        let u = upsample2(&f);
        for k in 0..64 {
            assert!((u[2 * k] - f.values[k]).norm() < 1e-13);
        }
    }
}
