use super::{stft, TFMatrix};
use crate::decay::{fit_decay_points, DecayFit, DecayFitOptions, WeightParams};
use crate::error::{Error, Result};
use crate::grid::Signal;
use serde::{Deserialize, Serialize};

/// Lower bound on R² for [`gs_decay_check`] to call a fit consistent.
pub const GS_MIN_R_SQUARED: f64 = 0.9;
/// Upper bound on the max positive log-residual for [`gs_decay_check`].
pub const GS_MAX_RESIDUAL: f64 = 2.0;

/// Weight in the frequency variable of a mixed norm.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FreqWeight {
    Unit,
    /// `C e^{eps |xi|^{1/s}}`
    Subexponential(WeightParams),
    /// `(1 + |xi|)^t`
    Polynomial { t: f64 },
}

impl FreqWeight {
    pub fn at(&self, xi: f64) -> f64 {
        match self {
            FreqWeight::Unit => 1.0,
            FreqWeight::Subexponential(w) => w.at_radius(xi.abs()),
            FreqWeight::Polynomial { t } => (1.0 + xi.abs()).powf(*t),
        }
    }
}

fn lp(values: impl Iterator<Item = f64>, p: f64, measure: f64) -> f64 {
    if p.is_infinite() {
        values.fold(0.0, f64::max)
    } else {
        (values.map(|v| v.powf(p)).sum::<f64>() * measure).powf(1.0 / p)
    }
}

/// Discretized `||V_g f||_{L^{p,q}_m}`: inner `l^p` over time with weight `dx`,
/// outer `l^q` over frequency with weight `dxi`, weight applied in frequency.
pub fn modulation_norm(f: &Signal, g: &Signal, p: f64, q: f64, weight: &FreqWeight) -> Result<f64> {
    for e in [p, q] {
        if !(e >= 1.0) {
            return Err(Error::BadParams(format!("mixed-norm exponents must be >= 1, got {e}")));
        }
    }
    let v = stft(f, g)?;
    let n = v.n();
    let dx = v.grid.spacing();
    let dxi = v.grid.freq_spacing();
    let inner: Vec<f64> = (0..n)
        .map(|l| {
            let w = weight.at(v.grid.freq(l));
            lp((0..n).map(|j| v.get(j, l).norm()), p, dx) * w
        })
        .collect();
    Ok(lp(inner.into_iter(), q, dxi))
}

/// Fit `|V(z)| <= C e^{-eps |z|^{1/s}}` on the radial envelope: the largest
/// modulus in each shell of width `max(dx, dxi)`, placed at its own radius.
pub fn fit_tf_decay(v: &TFMatrix, s: f64, opts: &DecayFitOptions) -> Result<DecayFit> {
    let n = v.n();
    let shell = v.grid.spacing().max(v.grid.freq_spacing());
    let mut env: Vec<Option<(f64, f64)>> = Vec::new();
    for j in 0..n {
        for l in 0..n {
            let a = v.get(j, l).norm();
            if !(a > opts.noise_floor) {
                continue;
            }
            let r = v.point(j, l).norm();
            let b = (r / shell).floor() as usize;
            if env.len() <= b {
                env.resize(b + 1, None);
            }
            if env[b].is_none_or(|(_, m)| a > m) {
                env[b] = Some((r, a));
            }
        }
    }
    let points: Vec<(f64, f64)> = env.into_iter().flatten().collect();
    fit_decay_points(&points, s, opts)
}

/// Decay fit of `V_g f` for a Gelfand-Shilov-type class index `s`.
/// The fit is consistent with the class when
/// `fit.within(GS_MIN_R_SQUARED, GS_MAX_RESIDUAL)`.
pub fn gs_decay_check(f: &Signal, g: &Signal, s: f64) -> Result<DecayFit> {
    let opts = DecayFitOptions { min_decades: 2.0, ..Default::default() };
    fit_tf_decay(&stft(f, g)?, s, &opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{Grid, PhasePoint};
    use num_complex::Complex64;
    use std::f64::consts::PI;

    #[test]
    fn moyal_identity() {
        let grid = Grid::new(8.0, 128).unwrap();
        let f = Signal::random(grid, 4);
        let g = Signal::gaussian(grid);
        let m = modulation_norm(&f, &g, 2.0, 2.0, &FreqWeight::Unit).unwrap();
        assert!((m - f.norm() * g.norm()).abs() < 1e-10);
    }

    #[test]
    fn zero_signal_has_zero_norm() {
        let grid = Grid::new(8.0, 64).unwrap();
        let m = modulation_norm(&Signal::zeros(grid), &Signal::gaussian(grid), 1.0, 3.0, &FreqWeight::Unit);
        assert_eq!(m.unwrap(), 0.0);
    }

    #[test]
    fn sup_norm_with_weight_is_brute_force_max() {
        let grid = Grid::new(8.0, 128).unwrap();
        let phi = Signal::gaussian(grid);
        let w = FreqWeight::Subexponential(WeightParams::new(1.0, 1.0, 1.0).unwrap());
        let m = modulation_norm(&phi, &phi, f64::INFINITY, f64::INFINITY, &w).unwrap();
        let v = stft(&phi, &phi).unwrap();
        let mut best: f64 = 0.0;
        for j in 0..128 {
            for l in 0..128 {
                best = best.max(v.get(j, l).norm() * v.point(j, l).xi.abs().exp());
            }
        }
        assert!((m - best).abs() <= 1e-15 * best);
    }

    #[test]
    fn gaussian_decay_exponent() {
        let grid = Grid::new(8.0, 256).unwrap();
        let phi = Signal::gaussian(grid);
        let fit = gs_decay_check(&phi, &phi, 0.5).unwrap();
        assert!((fit.params.eps - PI / 2.0).abs() < 0.05 * PI / 2.0);
        assert!(fit.within(GS_MIN_R_SQUARED, GS_MAX_RESIDUAL));
    }

    #[test]
    fn boxcar_fails_the_check() {
        let grid = Grid::new(8.0, 256).unwrap();
        let mut boxcar = Signal::from_real_fn(grid, "boxcar", |t| if t.abs() <= 1.0 { 1.0 } else { 0.0 });
        boxcar.normalize();
        let fit = gs_decay_check(&boxcar, &Signal::gaussian(grid), 0.5).unwrap();
        assert!(!fit.within(GS_MIN_R_SQUARED, GS_MAX_RESIDUAL));
    }

    #[test]
    fn synthetic_exponential_is_exact() {
        let grid = Grid::new(8.0, 128).unwrap();
        let v = TFMatrix::from_fn(grid, |z: PhasePoint| Complex64::new((-z.norm()).exp(), 0.0));
        let opts = DecayFitOptions { min_decades: 2.0, ..Default::default() };
        let fit = fit_tf_decay(&v, 1.0, &opts).unwrap();
        assert!((fit.params.eps - 1.0).abs() < 1e-6);
        assert!((fit.params.c - 1.0).abs() < 1e-6);
    }
}
