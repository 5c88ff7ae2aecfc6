//! Sampling geometry: the periodized interval [-T, T), its frequency grid,
//! sampled signals and phase-space points.

use crate::error::{Error, Result};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Uniform grid `x_k = -T + k dx`, `k = 0..N`, with the matched frequency
/// grid `xi_l = (l - N/2) dxi` where `N dx dxi = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub extent: f64,
    pub n_points: usize,
}

impl Grid {
    pub fn new(extent: f64, n_points: usize) -> Result<Self> {
        if !(extent.is_finite() && extent > 0.0) {
            return Err(Error::BadParams(format!("extent must be positive, got {extent}")));
        }
        if n_points < 8 || !n_points.is_power_of_two() {
            return Err(Error::BadParams(format!(
                "n_points must be a power of two >= 8, got {n_points}"
            )));
        }
        Ok(Grid { extent, n_points })
    }

    pub fn dim(&self) -> usize {
        1
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        self.n_points == 0
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.extent / self.n_points as f64
    }

    pub fn freq_spacing(&self) -> f64 {
        1.0 / (2.0 * self.extent)
    }

    /// Width of the periodic frequency band, `N dxi`.
    pub fn bandwidth(&self) -> f64 {
        self.n_points as f64 * self.freq_spacing()
    }

    pub fn point(&self, k: usize) -> f64 {
        -self.extent + k as f64 * self.spacing()
    }

    pub fn freq(&self, l: usize) -> f64 {
        (l as f64 - (self.n_points / 2) as f64) * self.freq_spacing()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_points).map(|k| self.point(k)).collect()
    }

    pub fn freqs(&self) -> Vec<f64> {
        (0..self.n_points).map(|l| self.freq(l)).collect()
    }

    /// Integer number of steps `h` spans, if it is (to 1e-9 steps) a multiple.
    pub fn steps(value: f64, step: f64) -> Option<i64> {
        let r = value / step;
        let k = r.round();
        ((r - k).abs() <= 1e-9 * r.abs().max(1.0)).then_some(k as i64)
    }

    pub fn json_sidecar(&self) -> serde_json::Value {
        serde_json::json!({
            "dim": self.dim(),
            "extent": self.extent,
            "n_points": self.n_points,
        })
    }
}

/// Centered DFT pair for a grid of length `N` (divisible by 4), so that the
/// forward map is `F_l = sum_k v_k e^{-2 pi i xi_l t_k}`. No scaling.
pub struct CenteredFft {
    n: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl CenteredFft {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        CenteredFft { n, fwd: planner.plan_fft_forward(n), inv: planner.plan_fft_inverse(n) }
    }

    fn flip(v: &mut [Complex64]) {
        for x in v.iter_mut().skip(1).step_by(2) {
            *x = -*x;
        }
    }

    /// `v_l <- sum_k v_k e^{-2 pi i (l-N/2)(k-N/2)/N}`
    pub fn forward(&self, v: &mut [Complex64]) {
        debug_assert_eq!(v.len(), self.n);
        Self::flip(v);
        self.fwd.process(v);
        Self::flip(v);
    }

    /// `v_k <- sum_l v_l e^{+2 pi i (l-N/2)(k-N/2)/N}`
    pub fn inverse(&self, v: &mut [Complex64]) {
        debug_assert_eq!(v.len(), self.n);
        Self::flip(v);
        self.inv.process(v);
        Self::flip(v);
    }
}

/// Complex samples of a function on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Signal {
    pub grid: Grid,
    pub values: Vec<Complex64>,
    pub label: String,
}

impl Signal {
    pub fn new(grid: Grid, values: Vec<Complex64>, label: impl Into<String>) -> Result<Self> {
        if values.len() != grid.n_points {
            return Err(Error::GridMismatch);
        }
        Ok(Signal { grid, values, label: label.into() })
    }

    pub fn zeros(grid: Grid) -> Self {
        Signal { grid, values: vec![Complex64::new(0.0, 0.0); grid.n_points], label: "zero".into() }
    }

    pub fn from_fn(grid: Grid, label: impl Into<String>, f: impl Fn(f64) -> Complex64) -> Self {
        let values = (0..grid.n_points).map(|k| f(grid.point(k))).collect();
        Signal { grid, values, label: label.into() }
    }

    pub fn from_real_fn(grid: Grid, label: impl Into<String>, f: impl Fn(f64) -> f64) -> Self {
        Self::from_fn(grid, label, |t| Complex64::new(f(t), 0.0))
    }

    /// `2^{1/4} e^{-pi t^2}`, the L2-normalized Gaussian.
    pub fn gaussian(grid: Grid) -> Self {
        let c = 2f64.powf(0.25);
        Self::from_real_fn(grid, "gaussian", |t| c * (-std::f64::consts::PI * t * t).exp())
    }

    /// Complex Gaussian noise restricted to `|xi| <= N dxi / 4`, unit L2 norm.
    pub fn random(grid: Grid, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = grid.n_points;
        let mut v: Vec<Complex64> = (0..n)
            .map(|_| {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                Complex64::new(re, im)
            })
            .collect();
        let fft = CenteredFft::new(n);
        fft.forward(&mut v);
        for (l, x) in v.iter_mut().enumerate() {
            if (l as i64 - (n / 2) as i64).unsigned_abs() as usize > n / 4 {
                *x = Complex64::new(0.0, 0.0);
            }
        }
        fft.inverse(&mut v);
        let mut s = Signal { grid, values: v, label: format!("random-{seed}") };
        s.normalize();
        s
    }

    pub fn check_grid(&self, other: &Signal) -> Result<()> {
        if self.grid == other.grid && self.values.len() == other.values.len() {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    /// `sum_k f_k conj(g_k) dx`
    pub fn inner(&self, other: &Signal) -> Result<Complex64> {
        self.check_grid(other)?;
        let s: Complex64 = self.values.iter().zip(&other.values).map(|(a, b)| a * b.conj()).sum();
        Ok(s * self.grid.spacing())
    }

    pub fn norm(&self) -> f64 {
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.spacing()).sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == Complex64::new(0.0, 0.0))
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            for v in &mut self.values {
                *v /= n;
            }
        }
    }

    pub fn scaled(&self, c: Complex64) -> Signal {
        Signal {
            grid: self.grid,
            values: self.values.iter().map(|v| v * c).collect(),
            label: self.label.clone(),
        }
    }

    /// `self + c * other`
    pub fn axpy(&self, c: Complex64, other: &Signal) -> Result<Signal> {
        self.check_grid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + c * b).collect();
        Ok(Signal { grid: self.grid, values, label: self.label.clone() })
    }

    /// Relative L2 distance `||self - other|| / ||other||`.
    pub fn rel_error(&self, reference: &Signal) -> Result<f64> {
        let d = self.axpy(Complex64::new(-1.0, 0.0), reference)?;
        let r = reference.norm();
        Ok(if r > 0.0 { d.norm() / r } else { d.norm() })
    }

    /// `g(-t)` on the grid (index `k -> N - k`).
    pub fn reflected(&self) -> Signal {
        let n = self.grid.n_points;
        let values = (0..n).map(|k| self.values[(n - k) % n]).collect();
        Signal { grid: self.grid, values, label: format!("{}-reflected", self.label) }
    }
}

/// Phase-space point `z = (x, xi)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub x: f64,
    pub xi: f64,
}

impl PhasePoint {
    pub fn new(x: f64, xi: f64) -> Self {
        PhasePoint { x, xi }
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.xi)
    }
}

impl std::ops::Add for PhasePoint {
    type Output = PhasePoint;
    fn add(self, o: PhasePoint) -> PhasePoint {
        PhasePoint::new(self.x + o.x, self.xi + o.xi)
    }
}

impl std::ops::Sub for PhasePoint {
    type Output = PhasePoint;
    fn sub(self, o: PhasePoint) -> PhasePoint {
        PhasePoint::new(self.x - o.x, self.xi - o.xi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_pairing_is_exact() {
        let g = Grid::new(8.0, 256).unwrap();
        assert_eq!(g.n_points as f64 * g.spacing() * g.freq_spacing(), 1.0);
        assert_eq!(g.point(0), -8.0);
        assert_eq!(g.freq(128), 0.0);
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(Grid::new(8.0, 100).is_err());
        assert!(Grid::new(-1.0, 64).is_err());
    }

    #[test]
    fn centered_fft_matches_sum() {
        let g = Grid::new(4.0, 32).unwrap();
        let f = Signal::random(g, 3);
        let mut v = f.values.clone();
        CenteredFft::new(32).forward(&mut v);
        for l in 0..32 {
            let mut s = Complex64::new(0.0, 0.0);
            for k in 0..32 {
                let ph = -2.0 * std::f64::consts::PI * g.freq(l) * g.point(k);
                s += f.values[k] * Complex64::from_polar(1.0, ph);
            }
            assert!((s - v[l]).norm() < 1e-12);
        }
    }

    #[test]
    fn random_signal_is_seeded_and_normalized() {
        let g = Grid::new(8.0, 128).unwrap();
        let a = Signal::random(g, 7);
        assert_eq!(a, Signal::random(g, 7));
        assert_ne!(a.values, Signal::random(g, 8).values);
        assert!((a.norm() - 1.0).abs() < 1e-12);
    }
}
