use super::{frame_operator, GaborSystem};
use crate::error::{Error, Result};
use crate::grid::Signal;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundsMethod {
    PowerIteration,
    DenseEig,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameBounds {
    #[serde(rename = "A")]
    pub lower: f64,
    #[serde(rename = "B")]
    pub upper: f64,
    pub method: BoundsMethod,
}

impl FrameBounds {
    pub fn condition(&self) -> f64 {
        self.upper / self.lower
    }

    fn checked(self) -> Result<Self> {
        if !(self.lower >= 1e-10 * self.upper) || !(self.upper > 0.0) {
            return Err(Error::NotAFrame { lower: self.lower, upper: self.upper });
        }
        Ok(self)
    }
}

const POWER_MAX_ITER: usize = 20_000;
const POWER_TOL: f64 = 1e-14;

fn white_noise(sys: &GaborSystem, seed: u64) -> Signal {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grid = sys.grid();
    let values = (0..grid.n_points)
        .map(|_| Complex64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)))
        .collect();
    let mut s = Signal { grid, values, label: "start".into() };
    s.normalize();
    s
}

/// Largest eigenvalue of a positive semidefinite map by power iteration.
fn power_iteration(apply: impl Fn(&Signal) -> Result<Signal>, start: Signal) -> Result<f64> {
    let mut v = start;
    let mut lambda = 0.0;
    for it in 0..POWER_MAX_ITER {
        let w = apply(&v)?;
        let next = w.inner(&v)?.re / v.inner(&v)?.re;
        let nw = w.norm();
        if nw == 0.0 {
            return Ok(0.0);
        }
        v = w.scaled(Complex64::new(1.0 / nw, 0.0));
        if it > 10 && (next - lambda).abs() <= POWER_TOL * next.abs() {
            return Ok(next);
        }
        lambda = next;
    }
    Ok(lambda)
}

/// Extreme eigenvalues of `S` by power iteration on `S` and on `B I - S`.
pub fn frame_bounds(sys: &GaborSystem) -> Result<FrameBounds> {
    let upper = power_iteration(|f| frame_operator(sys, f), white_noise(sys, 0x5eed))?;
    let gap = power_iteration(
        |f| {
            let sf = frame_operator(sys, f)?;
            f.scaled(Complex64::new(upper, 0.0)).axpy(Complex64::new(-1.0, 0.0), &sf)
        },
        white_noise(sys, 0xb0b),
    )?;
    FrameBounds { lower: upper - gap, upper, method: BoundsMethod::PowerIteration }.checked()
}

/// Extreme eigenvalues of the assembled `S` (N x N Hermitian) via nalgebra.
pub fn dense_frame_bounds(sys: &GaborSystem) -> Result<FrameBounds> {
    let grid = sys.grid();
    let n = grid.n_points;
    if n > 256 {
        return Err(Error::BadParams(format!("dense frame bounds limited to N <= 256, got {n}")));
    }
    let mut s = DMatrix::<Complex64>::zeros(n, n);
    for k in 0..n {
        let mut e = Signal::zeros(grid);
        e.values[k] = Complex64::new(1.0, 0.0);
        let col = frame_operator(sys, &e)?;
        for i in 0..n {
            s[(i, k)] = col.values[i];
        }
    }
    let sym = (&s + s.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = sym.symmetric_eigenvalues();
    let lower = eig.iter().copied().fold(f64::INFINITY, f64::min);
    let upper = eig.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    FrameBounds { lower, upper, method: BoundsMethod::DenseEig }.checked()
}

/// Canonical dual `gamma = S^{-1} g` by conjugate gradients; stores it in the
/// system. Iteration cap is `max(10 B/A, 200)`.
pub fn dual_window(sys: &mut GaborSystem, tol: f64) -> Result<Signal> {
    let bounds = frame_bounds(sys)?;
    let max_iter = ((10.0 * bounds.condition()).ceil() as usize).max(200);
    let g = sys.window.clone();
    let gnorm = g.norm();
    let mut x = Signal::zeros(g.grid);
    let mut r = g.clone();
    let mut p = r.clone();
    let mut rs = r.inner(&r)?.re;
    let mut residual = rs.sqrt() / gnorm;
    for _ in 0..max_iter {
        if residual <= tol {
            // confirm with the true residual before accepting
            let true_r = frame_operator(sys, &x)?.axpy(Complex64::new(-1.0, 0.0), &g)?;
            if true_r.norm() <= tol * gnorm {
                break;
            }
            r = true_r.scaled(Complex64::new(-1.0, 0.0));
            p = r.clone();
            rs = r.inner(&r)?.re;
        }
        let ap = frame_operator(sys, &p)?;
        let alpha = rs / p.inner(&ap)?.re;
        x = x.axpy(Complex64::new(alpha, 0.0), &p)?;
        r = r.axpy(Complex64::new(-alpha, 0.0), &ap)?;
        let rs_new = r.inner(&r)?.re;
        residual = rs_new.sqrt() / gnorm;
        p = r.axpy(Complex64::new(rs_new / rs, 0.0), &p)?;
        rs = rs_new;
    }
    let true_res = frame_operator(sys, &x)?.axpy(Complex64::new(-1.0, 0.0), &g)?.norm() / gnorm;
    if !(true_res <= tol) {
        return Err(Error::NoConvergence { iterations: max_iter, residual: true_res });
    }
    x.label = format!("dual-{}", g.label);
    sys.dual = Some(x.clone());
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::super::{reconstruct, tight_window, Lattice};
    use super::*;
    use crate::grid::Grid;

    fn gauss(alpha: f64, beta: f64, n: usize) -> GaborSystem {
        let grid = Grid::new(8.0, n).unwrap();
        let lat = Lattice::new(grid, alpha, beta, None).unwrap();
        GaborSystem::new(Signal::gaussian(grid), lat).unwrap()
    }

    #[test]
    fn power_matches_dense() {
        let sys = gauss(0.5, 0.5, 128);
        let p = frame_bounds(&sys).unwrap();
        let d = dense_frame_bounds(&sys).unwrap();
        assert!((p.lower - d.lower).abs() <= 1e-3 * d.lower);
        assert!((p.upper - d.upper).abs() <= 1e-3 * d.upper);
        assert!(d.condition() < 10.0);
    }

    #[test]
    fn near_tight_regime() {
        let sys = gauss(0.25, 0.25, 128);
        let f = Signal::random(sys.grid(), 8);
        let sf = frame_operator(&sys, &f).unwrap();
        assert!(sf.rel_error(&f.scaled(Complex64::new(16.0, 0.0))).unwrap() < 0.01);
        let d = dense_frame_bounds(&sys).unwrap();
        assert!((d.lower / 16.0 - 1.0).abs() < 0.01 && (d.upper / 16.0 - 1.0).abs() < 0.01);
    }

    #[test]
    fn critical_density_is_ill_conditioned() {
        let sys = gauss(1.0, 1.0, 128);
        match dense_frame_bounds(&sys) {
            Ok(b) => assert!(b.condition() > 1e3),
            Err(e) => assert!(matches!(e, Error::NotAFrame { .. })),
        }
    }

    #[test]
    fn undersampled_is_not_a_frame() {
        let sys = gauss(2.0, 1.0, 128);
        assert!(matches!(frame_bounds(&sys), Err(Error::NotAFrame { .. })));
    }

    #[test]
    fn tight_frame_bounds_and_dual() {
        let grid = Grid::new(8.0, 128).unwrap();
        let lat = Lattice::new(grid, 0.5, 0.5, None).unwrap();
        let w = tight_window(&lat).unwrap();
        let mut sys = GaborSystem::new(w.clone(), lat).unwrap();
        let b = frame_bounds(&sys).unwrap();
        assert!((b.lower - 2.0).abs() < 1e-8 && (b.upper - 2.0).abs() < 1e-8);
        let gamma = dual_window(&mut sys, 1e-12).unwrap();
        assert!(gamma.rel_error(&w.scaled(Complex64::new(0.5, 0.0))).unwrap() < 1e-8);
    }

    #[test]
    fn dual_reconstructs() {
        let mut sys = gauss(0.5, 0.5, 128);
        dual_window(&mut sys, 1e-10).unwrap();
        let f = Signal::random(sys.grid(), 21);
        assert!(reconstruct(&sys, &f).unwrap().rel_error(&f).unwrap() < 1e-8);
    }
}
