//! Separable periodic lattices, Gabor systems, frame operator, bounds and
//! canonical duals.

mod bounds;
mod windows;

pub use bounds::{dense_frame_bounds, dual_window, frame_bounds, BoundsMethod, FrameBounds};
pub use windows::{hermite_functions, hermite_window, tight_window, WindowSpec};

use crate::error::{Error, Result};
use crate::grid::{CenteredFft, Grid, PhasePoint, Signal};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Integer lattice coordinates `(m, n)` of the point `(m alpha, n beta)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticeIndex {
    pub m: i64,
    pub n: i64,
}

/// `alpha Z x beta Z` restricted to one period of the grid, indices centred
/// in `[-L/2, L/2)`, optionally truncated to `|m|, |n| <= index_radius`.
#[derive(Clone, Debug, PartialEq)]
pub struct Lattice {
    pub grid: Grid,
    pub alpha: f64,
    pub beta: f64,
    pub index_radius: Option<usize>,
    time_step: usize,
    freq_step: usize,
    points: Vec<LatticeIndex>,
}

impl Lattice {
    pub fn new(grid: Grid, alpha: f64, beta: f64, index_radius: Option<usize>) -> Result<Self> {
        let n = grid.n_points as i64;
        let a = Grid::steps(alpha, grid.spacing()).filter(|&a| a > 0 && n % a == 0).ok_or_else(|| {
            Error::BadParams(format!("alpha = {alpha} must be dx times a divisor of N"))
        })?;
        let b = Grid::steps(beta, grid.freq_spacing()).filter(|&b| b > 0 && n % b == 0).ok_or_else(|| {
            Error::BadParams(format!("beta = {beta} must be dxi times a divisor of N"))
        })?;
        let (lt, lf) = (n / a, n / b);
        let r = index_radius.map(|r| r as i64).unwrap_or(i64::MAX);
        let mut points = Vec::new();
        for m in -lt / 2..(lt + 1) / 2 {
            for k in -lf / 2..(lf + 1) / 2 {
                if m.abs() <= r && k.abs() <= r {
                    points.push(LatticeIndex { m, n: k });
                }
            }
        }
        Ok(Lattice {
            grid,
            alpha,
            beta,
            index_radius,
            time_step: a as usize,
            freq_step: b as usize,
            points,
        })
    }

    pub fn density(&self) -> f64 {
        self.alpha * self.beta
    }

    /// Gaussian windows give frames only when `alpha beta < 1`.
    pub fn below_critical_density(&self) -> bool {
        self.density() < 1.0 - 1e-12
    }

    /// `alpha / dx`
    pub fn time_step(&self) -> usize {
        self.time_step
    }

    /// `beta / dxi`
    pub fn freq_step(&self) -> usize {
        self.freq_step
    }

    /// Number of time positions `N / a` in one period.
    pub fn time_count(&self) -> usize {
        self.grid.n_points / self.time_step
    }

    /// Number of frequency positions `N / b` in one period.
    pub fn freq_count(&self) -> usize {
        self.grid.n_points / self.freq_step
    }

    pub fn points(&self) -> &[LatticeIndex] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn position(&self, idx: LatticeIndex) -> Option<usize> {
        self.points.binary_search(&idx).ok()
    }

    pub fn phase_point(&self, idx: LatticeIndex) -> PhasePoint {
        PhasePoint::new(idx.m as f64 * self.alpha, idx.n as f64 * self.beta)
    }

    /// Frequency bin of `n beta` in the centered DFT ordering.
    pub(crate) fn freq_bin(&self, n: i64) -> usize {
        let nn = self.grid.n_points as i64;
        (nn / 2 + n * self.freq_step as i64).rem_euclid(nn) as usize
    }

    /// Sample offset of `m alpha`.
    pub(crate) fn time_shift(&self, m: i64) -> usize {
        (m * self.time_step as i64).rem_euclid(self.grid.n_points as i64) as usize
    }

    /// Distinct time indices in order, each with the positions of its points.
    pub(crate) fn time_slices(&self) -> Vec<(i64, Vec<usize>)> {
        let mut out: Vec<(i64, Vec<usize>)> = Vec::new();
        for (pos, p) in self.points.iter().enumerate() {
            match out.last_mut() {
                Some((m, v)) if *m == p.m => v.push(pos),
                _ => out.push((p.m, vec![pos])),
            }
        }
        out
    }

    pub fn descriptor(&self) -> serde_json::Value {
        serde_json::json!({
            "alpha": self.alpha,
            "beta": self.beta,
            "index_radius": self.index_radius,
        })
    }
}

/// The family `{ pi(lambda) g }` with an optional dual window.
#[derive(Clone, Debug)]
pub struct GaborSystem {
    pub window: Signal,
    pub lattice: Lattice,
    pub dual: Option<Signal>,
}

impl GaborSystem {
    pub fn new(window: Signal, lattice: Lattice) -> Result<Self> {
        if window.grid != lattice.grid {
            return Err(Error::GridMismatch);
        }
        if window.is_zero() {
            return Err(Error::ZeroWindow);
        }
        Ok(GaborSystem { window, lattice, dual: None })
    }

    pub fn grid(&self) -> Grid {
        self.lattice.grid
    }

    /// `pi(lambda) w` for a lattice point.
    pub fn atom(&self, w: &Signal, idx: LatticeIndex) -> Signal {
        let n = self.grid().n_points;
        let shift = self.lattice.time_shift(idx.m);
        let step = (idx.n * self.lattice.freq_step() as i64).rem_euclid(n as i64) as usize;
        let values = (0..n)
            .map(|k| {
                // e^{2 pi i n beta t_k} = e^{2 pi i n b (k - N/2) / N}
                let e = (step * ((k + n - n / 2) % n)) % n;
                let ph = 2.0 * std::f64::consts::PI * e as f64 / n as f64;
                w.values[(k + n - shift) % n] * Complex64::from_polar(1.0, ph)
            })
            .collect();
        Signal { grid: self.grid(), values, label: w.label.clone() }
    }

    pub fn dual(&self) -> Result<&Signal> {
        self.dual.as_ref().ok_or(Error::MissingDual)
    }
}

/// Coefficients indexed by the points of a lattice, in lattice order.
#[derive(Clone, Debug, PartialEq)]
pub struct Coefficients {
    pub values: Vec<Complex64>,
}

impl Coefficients {
    pub fn zeros(lattice: &Lattice) -> Self {
        Coefficients { values: vec![Complex64::new(0.0, 0.0); lattice.len()] }
    }

    pub fn energy(&self) -> f64 {
        self.values.iter().map(|c| c.norm_sqr()).sum()
    }
}

/// `c_lambda = <f, pi(lambda) w>` for every lattice point.
pub fn analysis_with(lattice: &Lattice, w: &Signal, f: &Signal) -> Result<Coefficients> {
    f.check_grid(w)?;
    if f.grid != lattice.grid {
        return Err(Error::GridMismatch);
    }
    let n = f.grid.n_points;
    let dx = f.grid.spacing();
    let fft = CenteredFft::new(n);
    let mut out = Coefficients::zeros(lattice);
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    for (m, positions) in lattice.time_slices() {
        let shift = lattice.time_shift(m);
        for k in 0..n {
            v[k] = f.values[k] * w.values[(k + n - shift) % n].conj();
        }
        fft.forward(&mut v);
        for pos in positions {
            out.values[pos] = v[lattice.freq_bin(lattice.points()[pos].n)] * dx;
        }
    }
    Ok(out)
}

/// `sum_lambda c_lambda pi(lambda) w`.
pub fn synthesis_with(lattice: &Lattice, w: &Signal, c: &Coefficients) -> Result<Signal> {
    if c.values.len() != lattice.len() || w.grid != lattice.grid {
        return Err(Error::GridMismatch);
    }
    let n = w.grid.n_points;
    let fft = CenteredFft::new(n);
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    for (m, positions) in lattice.time_slices() {
        v.iter_mut().for_each(|x| *x = Complex64::new(0.0, 0.0));
        for pos in positions {
            v[lattice.freq_bin(lattice.points()[pos].n)] += c.values[pos];
        }
        fft.inverse(&mut v);
        let shift = lattice.time_shift(m);
        for k in 0..n {
            out[k] += v[k] * w.values[(k + n - shift) % n];
        }
    }
    Ok(Signal { grid: w.grid, values: out, label: "synthesis".into() })
}

pub fn analysis(sys: &GaborSystem, f: &Signal) -> Result<Coefficients> {
    analysis_with(&sys.lattice, &sys.window, f)
}

/// Synthesis with the dual window when `use_dual`, otherwise with `g`.
pub fn synthesis(sys: &GaborSystem, c: &Coefficients, use_dual: bool) -> Result<Signal> {
    let w = if use_dual { sys.dual()? } else { &sys.window };
    synthesis_with(&sys.lattice, w, c)
}

/// `S f = sum_lambda <f, pi(lambda) g> pi(lambda) g`.
pub fn frame_operator(sys: &GaborSystem, f: &Signal) -> Result<Signal> {
    synthesis(sys, &analysis(sys, f)?, false)
}

/// Analyze with `g`, synthesize with the dual.
pub fn reconstruct(sys: &GaborSystem, f: &Signal) -> Result<Signal> {
    synthesis(sys, &analysis(sys, f)?, true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> GaborSystem {
        let grid = Grid::new(8.0, 128).unwrap();
        let lat = Lattice::new(grid, 0.5, 0.5, None).unwrap();
        GaborSystem::new(Signal::gaussian(grid), lat).unwrap()
    }

    #[test]
    fn lattice_geometry() {
        let sys = setup();
        let lat = &sys.lattice;
        assert_eq!((lat.time_step(), lat.freq_step()), (4, 8));
        assert_eq!(lat.len(), 32 * 16);
        assert!(lat.below_critical_density());
        assert!(Lattice::new(sys.grid(), 0.3, 0.5, None).is_err());
    }

    #[test]
    fn analysis_matches_atom_inner_products() {
        let sys = setup();
        let f = Signal::random(sys.grid(), 3);
        let c = analysis(&sys, &f).unwrap();
        for (pos, &idx) in sys.lattice.points().iter().enumerate().step_by(37) {
            let direct = f.inner(&sys.atom(&sys.window, idx)).unwrap();
            assert!((direct - c.values[pos]).norm() < 1e-14);
        }
    }

    #[test]
    fn unit_coefficient_synthesizes_atom() {
        let sys = setup();
        let idx = LatticeIndex { m: 3, n: -2 };
        let mut c = Coefficients::zeros(&sys.lattice);
        c.values[sys.lattice.position(idx).unwrap()] = Complex64::new(1.0, 0.0);
        let s = synthesis(&sys, &c, false).unwrap();
        assert!(s.rel_error(&sys.atom(&sys.window, idx)).unwrap() < 1e-13);
    }

    #[test]
    fn frame_operator_is_self_adjoint() {
        let sys = setup();
        let f = Signal::random(sys.grid(), 1);
        let h = Signal::random(sys.grid(), 2);
        let a = frame_operator(&sys, &f).unwrap().inner(&h).unwrap();
        let b = f.inner(&frame_operator(&sys, &h).unwrap()).unwrap();
        assert!((a - b).norm() < 1e-10);
    }

    #[test]
    fn missing_dual_is_reported() {
        let sys = setup();
        let c = Coefficients::zeros(&sys.lattice);
        assert!(matches!(synthesis(&sys, &c, true), Err(Error::MissingDual)));
        assert!(synthesis(&sys, &c, false).unwrap().is_zero());
    }
}
