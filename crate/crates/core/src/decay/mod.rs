//! Weights `C e^{eps |z|^{1/s}}`, log-domain decay fits, and the checks built
//! on them.

mod convolution;
mod matrix_fit;
mod sparsity;
mod theorem;

pub use convolution::{weight_convolution_check, ConvolutionReport};
pub use matrix_fit::{decay_envelope, estimate_s, fit_matrix_decay};
pub use sparsity::{
    lp_mechanism_check, lp_mechanism_on, sparse_apply, sparsity_profile, ColumnProfile, LpReport,
    SparsityProfile,
};
pub use theorem::{
    factorial_exponential_check, verify_diag_theorem, verify_diag_theorem_on, ConverseBound,
    DiagTheoremOptions, DiagTheoremReport, FactorialReport, LegReport,
};

use crate::error::{Error, Result};
use crate::grid::PhasePoint;
use serde::{Deserialize, Serialize};

/// Weight `C e^{eps |z|^{1/s}}`; negative `eps` gives a decaying weight.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightParams {
    pub s: f64,
    pub eps: f64,
    #[serde(rename = "C")]
    pub c: f64,
}

impl WeightParams {
    pub fn new(s: f64, eps: f64, c: f64) -> Result<Self> {
        if !(s >= 0.5 && s.is_finite()) {
            return Err(Error::BadParams(format!("weight index s must be >= 1/2, got {s}")));
        }
        if !(c > 0.0 && c.is_finite() && eps.is_finite()) {
            return Err(Error::BadParams("weight needs finite eps and positive C".into()));
        }
        Ok(WeightParams { s, eps, c })
    }

    pub fn at_radius(&self, r: f64) -> f64 {
        self.c * (self.eps * r.powf(1.0 / self.s)).exp()
    }
}

pub fn weight(z: PhasePoint, w: &WeightParams) -> f64 {
    w.at_radius(z.norm())
}

/// Result of regressing `log|a|` on `r^{1/s}`: `log|a| ~ log C - eps r^{1/s}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub params: WeightParams,
    pub r_squared: f64,
    /// Largest `log|a| - (log C - eps r^{1/s})` over the fitted points.
    pub max_residual: f64,
    pub n_points_used: usize,
    /// `log10(max/min)` of the fitted magnitudes.
    pub decades: f64,
}

impl DecayFit {
    pub fn within(&self, r_squared_min: f64, max_residual: f64) -> bool {
        self.r_squared >= r_squared_min && self.max_residual <= max_residual
    }

    /// Fitted bound `C e^{-eps r^{1/s}}` at radius `r`.
    pub fn model(&self, r: f64) -> f64 {
        self.params.c * (-self.params.eps * r.powf(1.0 / self.params.s)).exp()
    }

    pub fn residual(&self, r: f64, magnitude: f64) -> f64 {
        magnitude.ln() - self.model(r).ln()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayFitOptions {
    pub noise_floor: f64,
    pub min_points: usize,
    pub min_decades: f64,
}

impl Default for DecayFitOptions {
    fn default() -> Self {
        DecayFitOptions { noise_floor: 1e-13, min_points: 10, min_decades: 10.0 }
    }
}

/// Ordinary least squares `y = a + b x`; returns `(a, b, r2, residuals)`.
pub(crate) fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64, Vec<f64>) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let b = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let a = my - b * mx;
    let res: Vec<f64> = xs.iter().zip(ys).map(|(x, y)| y - (a + b * x)).collect();
    let ss_res: f64 = res.iter().map(|r| r * r).sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let r2 = if ss_tot > 0.0 { (1.0 - ss_res / ss_tot).clamp(0.0, 1.0) } else { 1.0 };
    (a, b, r2, res)
}

/// Fit `magnitude ~ C e^{-eps r^{1/s}}` to `(r, magnitude)` pairs above the floor.
pub fn fit_decay_points(
    points: &[(f64, f64)],
    s: f64,
    opts: &DecayFitOptions,
) -> Result<DecayFit> {
    if !(s >= 0.5 && s.is_finite()) {
        return Err(Error::BadParams(format!("decay index s must be >= 1/2, got {s}")));
    }
    let used: Vec<(f64, f64)> =
        points.iter().copied().filter(|&(_, a)| a > opts.noise_floor && a.is_finite()).collect();
    if used.len() < opts.min_points.max(2) {
        return Err(Error::InsufficientDynamicRange(format!(
            "{} points above the noise floor {:e}, need {}",
            used.len(),
            opts.noise_floor,
            opts.min_points
        )));
    }
    let amax = used.iter().map(|p| p.1).fold(0.0, f64::max);
    let amin = used.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let decades = (amax / amin).log10();
    if decades < opts.min_decades {
        return Err(Error::InsufficientDynamicRange(format!(
            "{decades:.2} decades above the noise floor, need {}",
            opts.min_decades
        )));
    }
    let xs: Vec<f64> = used.iter().map(|p| p.0.powf(1.0 / s)).collect();
    let ys: Vec<f64> = used.iter().map(|p| p.1.ln()).collect();
    let (a, b, r2, res) = linear_fit(&xs, &ys);
    let max_residual = res.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(DecayFit {
        params: WeightParams { s, eps: -b, c: a.exp() },
        r_squared: r2,
        max_residual,
        n_points_used: used.len(),
        decades,
    })
}
