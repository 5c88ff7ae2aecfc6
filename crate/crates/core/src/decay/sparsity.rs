use super::{fit_decay_points, DecayFit, DecayFitOptions};
use crate::error::{Error, Result};
use crate::frames::{analysis_with, synthesis_with, Coefficients, GaborSystem};
use crate::grid::Signal;
use crate::weyl::GaborMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

const MIN_COLUMN_POINTS: usize = 10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ColumnProfile {
    pub column: usize,
    /// `|a|_1 >= |a|_2 >= ...`
    pub sorted: Vec<f64>,
    pub fit: Option<DecayFit>,
}

impl ColumnProfile {
    /// Sort magnitudes and fit `log|a|_n` against `n^{1/(2 d s)}`; the fit is
    /// skipped when fewer than 10 magnitudes clear the noise floor.
    pub fn from_magnitudes(column: usize, mut mags: Vec<f64>, d: usize, s: f64) -> Self {
        mags.sort_by(|a, b| b.total_cmp(a));
        let fit = fit_sorted(&mags, d, s).ok();
        ColumnProfile { column, sorted: mags, fit }
    }
}

fn fit_sorted(sorted: &[f64], d: usize, s: f64) -> Result<DecayFit> {
    let pts: Vec<(f64, f64)> = sorted.iter().enumerate().map(|(i, &a)| ((i + 1) as f64, a)).collect();
    let opts = DecayFitOptions { min_points: MIN_COLUMN_POINTS, min_decades: 0.0, ..Default::default() };
    fit_decay_points(&pts, 2.0 * d as f64 * s, &opts)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SparsityProfile {
    pub d: usize,
    pub s: f64,
    pub columns: Vec<ColumnProfile>,
    /// Columns with too few magnitudes above the floor to fit.
    pub skipped: Vec<usize>,
    /// Fit of the largest `|a|_n` over columns, the uniform law.
    pub fit: Option<DecayFit>,
    pub min_r_squared: Option<f64>,
}

impl SparsityProfile {
    pub fn fitted_columns(&self) -> impl Iterator<Item = (usize, &DecayFit)> {
        self.columns.iter().filter_map(|c| c.fit.as_ref().map(|f| (c.column, f)))
    }
}

/// Per-column sorted magnitudes of a Gabor matrix and their fits against
/// `n^{1/(2 d s)}`.
pub fn sparsity_profile(m: &GaborMatrix, d: usize, s: f64) -> SparsityProfile {
    let columns: Vec<ColumnProfile> = (0..m.size())
        .into_par_iter()
        .map(|c| ColumnProfile::from_magnitudes(c, m.column(c).iter().map(|e| e.1.norm()).collect(), d, s))
        .collect();
    let skipped = columns.iter().filter(|c| c.fit.is_none()).map(|c| c.column).collect();
    let longest = columns.iter().map(|c| c.sorted.len()).max().unwrap_or(0);
    let envelope: Vec<f64> = (0..longest)
        .map(|i| columns.iter().filter_map(|c| c.sorted.get(i)).copied().fold(0.0, f64::max))
        .collect();
    let fit = fit_sorted(&envelope, d, s).ok();
    let min_r_squared = columns.iter().filter_map(|c| c.fit.map(|f| f.r_squared)).reduce(f64::min);
    SparsityProfile { d, s, columns, skipped, fit, min_r_squared }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LpReport {
    pub p_values: Vec<f64>,
    pub columns_checked: usize,
    pub violations: usize,
    /// Largest `log(n^{1/p} |a|_n / ||a||_p)`; never positive when the bound holds.
    pub max_log_ratio: f64,
    pub pass: bool,
}

/// Check `n^{1/p} |a|_n <= ||a||_p` on every column of `m` for each `p`.
pub fn lp_mechanism_check(m: &GaborMatrix, p_values: &[f64]) -> LpReport {
    let cols: Vec<Vec<f64>> = (0..m.size())
        .map(|c| {
            let mut v: Vec<f64> = m.column(c).iter().map(|e| e.1.norm()).collect();
            v.sort_by(|a, b| b.total_cmp(a));
            v
        })
        .collect();
    lp_mechanism_on(&cols, p_values)
}

/// As [`lp_mechanism_check`] on nonincreasing magnitude sequences.
pub fn lp_mechanism_on(columns: &[Vec<f64>], p_values: &[f64]) -> LpReport {
    let slack = 1e-12;
    let mut violations = 0;
    let mut max_log_ratio = f64::NEG_INFINITY;
    for col in columns {
        for &p in p_values {
            let log_norm = col.iter().map(|a| a.powf(p)).sum::<f64>().ln() / p;
            for (i, &a) in col.iter().enumerate() {
                if a == 0.0 {
                    break;
                }
                let lr = ((i + 1) as f64).ln() / p + a.ln() - log_norm;
                max_log_ratio = max_log_ratio.max(lr);
                if lr > slack {
                    violations += 1;
                }
            }
        }
    }
    LpReport {
        p_values: p_values.to_vec(),
        columns_checked: columns.len(),
        violations,
        max_log_ratio,
        pass: violations == 0,
    }
}

/// `sigma^w f ~ sum_lambda (M c)_lambda pi(lambda) gamma` with
/// `c_mu = <f, pi(mu) gamma>` and entries below `tau` dropped; returns the
/// result and the fraction of retained entries kept.
pub fn sparse_apply(m: &GaborMatrix, sys: &GaborSystem, f: &Signal, tau: f64) -> Result<(Signal, f64)> {
    let gamma = sys.dual()?;
    if m.lattice != sys.lattice {
        return Err(Error::GridMismatch);
    }
    let c = analysis_with(&sys.lattice, gamma, f)?;
    let (y, kept) = m.apply_thresholded(&c.values, tau);
    let out = synthesis_with(&sys.lattice, gamma, &Coefficients { values: y })?;
    let total = m.retained_count().max(1);
    Ok((out, kept as f64 / total as f64))
}
