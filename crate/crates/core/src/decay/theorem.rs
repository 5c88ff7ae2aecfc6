use super::{fit_matrix_decay, DecayFit, DecayFitOptions};
use crate::error::{Error, Result};
use crate::frames::GaborSystem;
use crate::weyl::{gabor_matrix, GaborMatrix, MatrixOptions, Route, SymbolField, SymbolStft};
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagTheoremOptions {
    pub alpha_max: usize,
    pub route: Route,
    pub fit: DecayFitOptions,
    pub matrix: MatrixOptions,
    pub r_squared_min: f64,
    /// Tolerance in log-units for the matrix fit and for the weighted sup.
    pub max_residual: f64,
}

impl Default for DiagTheoremOptions {
    fn default() -> Self {
        DiagTheoremOptions {
            alpha_max: 8,
            route: Route::Stft,
            fit: DecayFitOptions::default(),
            matrix: MatrixOptions::default(),
            r_squared_min: 0.99,
            max_residual: 0.5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LegReport {
    pub leg: String,
    pub pass: bool,
    pub eps: Option<f64>,
    #[serde(rename = "C")]
    pub c: Option<f64>,
    /// Leg-specific measured quantity: weighted sup, top-order prefactor, or max residual.
    pub measured: Option<f64>,
    /// Per-order prefactors for the derivative leg.
    pub prefactors: Vec<f64>,
    pub note: Option<String>,
}

impl LegReport {
    fn failed(leg: &str, note: String) -> Self {
        LegReport {
            leg: leg.into(),
            pass: false,
            eps: None,
            c: None,
            measured: None,
            prefactors: vec![],
            note: Some(note),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagTheoremReport {
    pub s: f64,
    pub declared_s: Option<f64>,
    pub fit: Option<DecayFit>,
    pub legs: Vec<LegReport>,
    pub pass: bool,
}

/// Check the three equivalent characterizations for `sigma` at class `s`:
/// (i) weighted sup of `V_Phi sigma`, (ii) factorial derivative bounds,
/// (iii) exponential decay of the Gabor matrix.
pub fn verify_diag_theorem(
    sigma: &SymbolField,
    sys: &GaborSystem,
    s: f64,
    opts: &DiagTheoremOptions,
) -> Result<DiagTheoremReport> {
    let m = gabor_matrix(sigma, sys, opts.route, &opts.matrix)?;
    verify_diag_theorem_on(&m, sigma, sys, s, opts)
}

/// As [`verify_diag_theorem`] with the Gabor matrix already computed.
pub fn verify_diag_theorem_on(
    m: &GaborMatrix,
    sigma: &SymbolField,
    sys: &GaborSystem,
    s: f64,
    opts: &DiagTheoremOptions,
) -> Result<DiagTheoremReport> {
    if let Some(declared) = sigma.gevrey_s {
        // a class-s symbol also lies in every weaker class
        if declared > s + 1e-12 {
            return Err(Error::BadParams(format!("symbol is declared in class {declared}, cannot test s = {s}")));
        }
    }
    let fit = match fit_matrix_decay(m, s, &opts.fit) {
        Ok(f) => Some(f),
        Err(Error::InsufficientDynamicRange(msg)) => {
            let legs = ["i", "ii", "iii"].map(|l| LegReport::failed(l, format!("matrix fit unavailable: {msg}")));
            return Ok(DiagTheoremReport { s, declared_s: sigma.gevrey_s, fit: None, legs: legs.to_vec(), pass: false });
        }
        Err(e) => return Err(e),
    };
    let f = fit.expect("fit present");
    let leg3 = LegReport {
        leg: "iii".into(),
        pass: f.within(opts.r_squared_min, opts.max_residual) && f.params.eps > 0.0,
        eps: Some(f.params.eps),
        c: Some(f.params.c),
        measured: Some(f.max_residual),
        prefactors: vec![],
        note: Some(format!("r_squared = {:.6}", f.r_squared)),
    };
    let leg1 = if f.params.eps > 0.0 { sup_leg(m, sigma, sys, &f, opts)? } else { LegReport::failed("i", "fitted eps <= 0".into()) };
    let leg2 = if f.params.eps > 0.0 {
        derivative_leg(sigma, s, f.params.eps, opts.alpha_max)
    } else {
        LegReport::failed("ii", "fitted eps <= 0".into())
    };
    let legs = vec![leg1, leg2, leg3];
    let pass = legs.iter().all(|l| l.pass);
    Ok(DiagTheoremReport { s, declared_s: sigma.gevrey_s, fit: Some(f), legs, pass })
}

fn sup_leg(
    m: &GaborMatrix,
    sigma: &SymbolField,
    sys: &GaborSystem,
    fit: &DecayFit,
    opts: &DiagTheoremOptions,
) -> Result<LegReport> {
    let vs = SymbolStft::new(sigma, &sys.window)?;
    let lat = &m.lattice;
    let (a, b) = (lat.time_step() as i64, lat.freq_step() as i64);
    let diffs: BTreeSet<(i64, i64)> = m.entries().map(|(r, c, _)| m.difference(r, c)).collect();
    let (eps, s) = (fit.params.eps, fit.params.s);
    let mut weighted = 0.0f64;
    for &(dm, dn) in &diffs {
        let sup = vs.slice(dn * b, -dm * a).iter().map(|v| v.norm()).fold(0.0, f64::max);
        if sup <= opts.fit.noise_floor {
            continue;
        }
        let d = (dm as f64 * lat.alpha).hypot(dn as f64 * lat.beta);
        weighted = weighted.max(sup * (eps * d.powf(1.0 / s)).exp());
    }
    let log_ratio = (weighted / fit.params.c).ln();
    Ok(LegReport {
        leg: "i".into(),
        pass: weighted.is_finite() && log_ratio <= opts.max_residual,
        eps: Some(eps),
        c: Some(weighted),
        measured: Some(log_ratio),
        prefactors: vec![],
        note: Some(format!("{} lattice differences", diffs.len())),
    })
}

/// `sup |d_x^a d_xi^b sigma|` for `a + b <= max_order` by spectral differentiation.
fn derivative_sups(sigma: &SymbolField, max_order: usize) -> Vec<Vec<f64>> {
    let (rows, cols) = (sigma.rows(), sigma.cols());
    let n = cols as i64;
    let period_x = 2.0 * sigma.grid.extent;
    let period_xi = sigma.grid.bandwidth();
    let mut planner = FftPlanner::new();
    let spec = fft2_f64(&mut planner, sigma.values.clone(), rows, cols, false);
    let kx: Vec<f64> = (0..rows as i64)
        .map(|p| {
            let w = (p + n).rem_euclid(2 * n) - n;
            if w == -n { 0.0 } else { 2.0 * PI * w as f64 / period_x }
        })
        .collect();
    let kxi: Vec<f64> = (0..n)
        .map(|l| {
            let w = (l + n / 2).rem_euclid(n) - n / 2;
            if w == -n / 2 { 0.0 } else { 2.0 * PI * w as f64 / period_xi }
        })
        .collect();
    let norm = (rows * cols) as f64;
    let mut out = vec![vec![0.0; max_order + 1]; max_order + 1];
    for ax in 0..=max_order {
        for bx in 0..=(max_order - ax) {
            let data: Vec<Complex64> = spec
                .iter()
                .enumerate()
                .map(|(i, v)| v * kx[i / cols].powi(ax as i32) * kxi[i % cols].powi(bx as i32))
                .collect();
            let d = fft2_f64(&mut planner, data, rows, cols, true);
            // the factor i^{a+b} does not change the modulus
            out[ax][bx] = d.iter().map(|v| v.norm() / norm).fold(0.0, f64::max);
        }
    }
    out
}

fn fft2_f64(planner: &mut FftPlanner<f64>, mut data: Vec<Complex64>, rows: usize, cols: usize, inverse: bool) -> Vec<Complex64> {
    let (rf, cf) = if inverse {
        (planner.plan_fft_inverse(cols), planner.plan_fft_inverse(rows))
    } else {
        (planner.plan_fft_forward(cols), planner.plan_fft_forward(rows))
    };
    for row in data.chunks_mut(cols) {
        rf.process(row);
    }
    let mut col = vec![Complex64::new(0.0, 0.0); rows];
    for c in 0..cols {
        for r in 0..rows {
            col[r] = data[r * cols + c];
        }
        cf.process(&mut col);
        for r in 0..rows {
            data[r * cols + c] = col[r];
        }
    }
    data
}

fn ln_factorial(k: usize) -> f64 {
    (1..=k).map(|i| (i as f64).ln()).sum()
}

/// Prefactors `K_k = max_{|alpha| = k} sup|d^alpha sigma| / (C^k (alpha!)^s)` with
/// `C = 2 pi (2 s / eps)^s`; passes when the top order does not exceed the
/// lower orders.
fn derivative_leg(sigma: &SymbolField, s: f64, eps: f64, alpha_max: usize) -> LegReport {
    let c = 2.0 * PI * (s * 2.0 / eps).powf(s);
    let sups = derivative_sups(sigma, alpha_max);
    let mut k = vec![0.0f64; alpha_max + 1];
    for (ax, row) in sups.iter().enumerate() {
        for (bx, &sup) in row.iter().enumerate().take(alpha_max + 1 - ax) {
            let order = ax + bx;
            let log_den = order as f64 * c.ln() + s * (ln_factorial(ax) + ln_factorial(bx));
            k[order] = k[order].max((sup.ln() - log_den).exp());
        }
    }
    let top = k[alpha_max];
    let lower = k[..alpha_max].iter().copied().fold(0.0, f64::max);
    LegReport {
        leg: "ii".into(),
        pass: top <= lower * (1.0 + 1e-9),
        eps: Some(eps),
        c: Some(c),
        measured: Some(top),
        prefactors: k,
        note: None,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConverseBound {
    /// Measured power-bound constant `C'`.
    #[serde(rename = "C_prime")]
    pub c_prime: f64,
    pub eps_prime: f64,
    /// Orders up to `alpha_max` only control `h` on `|x| <= x_range`.
    pub x_range: f64,
    /// `sup |h| e^{eps' |x|^{1/r}}` over `|x| <= x_range`.
    pub k_prime: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorialReport {
    pub r: f64,
    pub eps: f64,
    #[serde(rename = "C")]
    pub c: f64,
    /// Single prefactor `K` with `|x^alpha h| <= K C^alpha (alpha!)^r` for all tested `alpha`.
    pub prefactor: f64,
    pub per_order: Vec<f64>,
    pub converse: Option<ConverseBound>,
    pub pass: bool,
}

/// Passes from `|h(x)| <= e^{-eps |x|^{1/r}}` to `|x^alpha h| <= K C^alpha (alpha!)^r`
/// with `C = (r/eps)^r`, and back from the measured power bounds.
pub fn factorial_exponential_check(xs: &[f64], h: &[f64], r: f64, eps: f64, alpha_max: usize) -> Result<FactorialReport> {
    if xs.len() != h.len() || xs.is_empty() {
        return Err(Error::BadParams("samples and abscissae must have equal nonzero length".into()));
    }
    if !(r > 0.0 && eps > 0.0) {
        return Err(Error::BadParams(format!("need r > 0 and eps > 0, got r = {r}, eps = {eps}")));
    }
    for (&x, &v) in xs.iter().zip(h) {
        let bound = (-eps * x.abs().powf(1.0 / r)).exp();
        if v.abs() > bound * (1.0 + 1e-12) + 1e-300 {
            return Err(Error::PreconditionFailed(format!("|h({x})| = {:e} exceeds e^(-eps|x|^(1/r)) = {bound:e}", v.abs())));
        }
    }
    let d = 1.0;
    let c = (r * d / eps).powf(r);
    let log_sup = |alpha: usize| -> f64 {
        xs.iter()
            .zip(h)
            .map(|(&x, &v)| if alpha == 0 { v.abs().ln() } else { alpha as f64 * x.abs().ln() + v.abs().ln() })
            .fold(f64::NEG_INFINITY, f64::max)
    };
    let sups: Vec<f64> = (0..=alpha_max).map(log_sup).collect();
    let per_order: Vec<f64> = sups
        .iter()
        .enumerate()
        .map(|(a, &ls)| (ls - a as f64 * c.ln() - r * ln_factorial(a)).exp())
        .collect();
    let prefactor = per_order.iter().copied().fold(0.0, f64::max);
    let converse = if sups[0] == f64::NEG_INFINITY {
        None
    } else {
        let c_prime = (1..=alpha_max)
            .map(|a| ((sups[a] - sups[0] - r * ln_factorial(a)) / a as f64).exp())
            .fold(0.0, f64::max);
        let eps_prime = 0.99 * r * (d * c_prime).powf(-1.0 / r);
        let x_range = (r * alpha_max as f64 / eps_prime).powf(r);
        let k_prime = xs
            .iter()
            .zip(h)
            .filter(|(x, _)| x.abs() <= x_range)
            .map(|(&x, &v)| v.abs() * (eps_prime * x.abs().powf(1.0 / r)).exp())
            .fold(0.0, f64::max);
        Some(ConverseBound { c_prime, eps_prime, x_range, k_prime })
    };
    let pass = prefactor.is_finite() && converse.is_none_or(|cb| cb.k_prime.is_finite());
    Ok(FactorialReport { r, eps, c, prefactor, per_order, converse, pass })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xs() -> Vec<f64> {
        (-8000..=8000).map(|k| k as f64 * 0.01).collect()
    }

    #[test]
    fn exponential_decay_gives_unit_prefactor() {
        let x = xs();
        let h: Vec<f64> = x.iter().map(|t| (-t.abs()).exp()).collect();
        let rep = factorial_exponential_check(&x, &h, 1.0, 1.0, 20).unwrap();
        assert_eq!(rep.c, 1.0);
        assert!(rep.prefactor <= 1.0 + 1e-12, "{}", rep.prefactor);
        assert!(rep.pass);
    }

    #[test]
    fn gaussian_decay_prefactor_at_most_two() {
        let x = xs();
        let h: Vec<f64> = x.iter().map(|t| (-t * t).exp()).collect();
        let rep = factorial_exponential_check(&x, &h, 0.5, 1.0, 20).unwrap();
        assert!((rep.c - 0.5f64.sqrt()).abs() < 1e-15);
        assert!(rep.prefactor <= 2.0);
        let cv = rep.converse.unwrap();
        assert!(cv.eps_prime > 0.0 && cv.k_prime.is_finite());
    }

    #[test]
    fn zero_and_violations() {
        let x = xs();
        let rep = factorial_exponential_check(&x, &vec![0.0; x.len()], 1.0, 1.0, 20).unwrap();
        assert!(rep.pass && rep.prefactor == 0.0 && rep.converse.is_none());
        let h: Vec<f64> = x.iter().map(|t| (-0.5 * t.abs()).exp()).collect();
        assert!(matches!(factorial_exponential_check(&x, &h, 1.0, 1.0, 20), Err(Error::PreconditionFailed(_))));
    }
}
