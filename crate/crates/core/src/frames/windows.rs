use super::Lattice;
use crate::error::{Error, Result};
use crate::grid::{Grid, Signal};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

fn one() -> f64 {
    1.0
}

/// Window registry entry, `{ "kind": ..., "params": {...} }` in JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum WindowSpec {
    /// `e^{-pi t^2 / width^2}`, normalized.
    Gaussian {
        #[serde(default = "one")]
        width: f64,
    },
    /// `sum_k c_k H_k`, normalized; coefficients as `[re, im]` pairs.
    Hermite { k_max: usize, coeffs: Vec<[f64; 2]> },
    /// Sine window with `sum_m |g(t - m alpha)|^2 = 1`; tight when `alpha beta <= 1/2`.
    TightSine,
    /// Indicator of `[-half_width, half_width]`, normalized.
    Boxcar { half_width: f64 },
}

impl WindowSpec {
    pub fn kinds() -> &'static [&'static str] {
        &["gaussian", "hermite", "tight_sine", "boxcar"]
    }

    pub fn build(&self, lattice: &Lattice) -> Result<Signal> {
        let grid = lattice.grid;
        match self {
            WindowSpec::Gaussian { width } => {
                if !(*width > 0.0) {
                    return Err(Error::BadParams("gaussian width must be positive".into()));
                }
                let mut g = Signal::from_real_fn(grid, "gaussian", |t| (-PI * t * t / (width * width)).exp());
                g.normalize();
                Ok(g)
            }
            WindowSpec::Hermite { k_max, coeffs } => {
                let c: Vec<Complex64> = coeffs.iter().map(|p| Complex64::new(p[0], p[1])).collect();
                hermite_window(grid, *k_max, &c)
            }
            WindowSpec::TightSine => tight_window(lattice),
            WindowSpec::Boxcar { half_width } => {
                let mut g = Signal::from_real_fn(grid, "boxcar", |t| if t.abs() <= *half_width { 1.0 } else { 0.0 });
                if g.is_zero() {
                    return Err(Error::ZeroWindow);
                }
                g.normalize();
                Ok(g)
            }
        }
    }
}

/// `H_0..=H_{k_max}` with `H_k(t) = (2 pi)^{1/4} h_k(sqrt(2 pi) t)`, where
/// `h_k` are the orthonormal Hermite functions; `H_0 = 2^{1/4} e^{-pi t^2}`.
pub fn hermite_functions(grid: Grid, k_max: usize) -> Result<Vec<Signal>> {
    if k_max > grid.n_points / 4 {
        return Err(Error::BadParams(format!(
            "k_max = {k_max} exceeds N/4 = {}",
            grid.n_points / 4
        )));
    }
    let n = grid.n_points;
    let scale = (2.0 * PI).powf(0.25);
    let y: Vec<f64> = grid.points().iter().map(|t| (2.0 * PI).sqrt() * t).collect();
    let mut prev: Vec<f64> = vec![0.0; n];
    let mut cur: Vec<f64> = y.iter().map(|y| PI.powf(-0.25) * (-y * y / 2.0).exp()).collect();
    let mut out = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        let label = format!("hermite-{k}");
        out.push(Signal::from_fn(grid, label, |_| Complex64::new(0.0, 0.0)));
        out[k].values = cur.iter().map(|v| Complex64::new(scale * v, 0.0)).collect();
        let kf = k as f64;
        let next: Vec<f64> = (0..n)
            .map(|i| (2.0 / (kf + 1.0)).sqrt() * y[i] * cur[i] - (kf / (kf + 1.0)).sqrt() * prev[i])
            .collect();
        prev = cur;
        cur = next;
    }
    Ok(out)
}

/// Normalized `sum_k c_k H_k`.
pub fn hermite_window(grid: Grid, k_max: usize, coeffs: &[Complex64]) -> Result<Signal> {
    if coeffs.len() != k_max + 1 {
        return Err(Error::BadParams(format!(
            "expected {} Hermite coefficients, got {}",
            k_max + 1,
            coeffs.len()
        )));
    }
    let hs = hermite_functions(grid, k_max)?;
    let mut g = Signal::zeros(grid);
    for (h, c) in hs.iter().zip(coeffs) {
        g = g.axpy(*c, h)?;
    }
    if g.is_zero() {
        return Err(Error::ZeroWindow);
    }
    g.normalize();
    g.label = format!("hermite-{k_max}");
    Ok(g)
}

/// `sin(pi (t + alpha) / (2 alpha))` on `[-alpha, alpha]`. Its squared
/// translates by `alpha` sum to one, so for `alpha beta <= 1/2` the frame
/// operator is `I / beta`.
pub fn tight_window(lattice: &Lattice) -> Result<Signal> {
    if 2 * lattice.time_step() > lattice.freq_count() {
        return Err(Error::BadParams(format!(
            "tight sine window needs alpha*beta <= 1/2, got {}",
            lattice.density()
        )));
    }
    let a = lattice.alpha;
    Ok(Signal::from_real_fn(lattice.grid, "tight-sine", |t| {
        if t > -a && t < a {
            (PI * (t + a) / (2.0 * a)).sin()
        } else {
            0.0
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_hermite_is_gaussian() {
        let grid = Grid::new(8.0, 256).unwrap();
        let g = hermite_window(grid, 0, &[Complex64::new(1.0, 0.0)]).unwrap();
        let phi = Signal::gaussian(grid);
        for k in 0..256 {
            assert!((g.values[k] - phi.values[k]).norm() < 1e-12);
        }
    }

    #[test]
    fn hermite_orthonormal() {
        let grid = Grid::new(8.0, 256).unwrap();
        let hs = hermite_functions(grid, 8).unwrap();
        for j in 0..=8 {
            for k in 0..=8 {
                let ip = hs[j].inner(&hs[k]).unwrap();
                let want = if j == k { 1.0 } else { 0.0 };
                assert!((ip - want).norm() < 1e-8, "{j} {k} {ip}");
            }
        }
    }

    #[test]
    fn combination_is_normalized() {
        let grid = Grid::new(8.0, 128).unwrap();
        let c = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.5), Complex64::new(0.25, 0.0)];
        let g = hermite_window(grid, 2, &c).unwrap();
        assert!((g.norm() - 1.0).abs() < 1e-10);
        assert!(hermite_window(grid, 2, &c[..2]).is_err());
        assert!(hermite_functions(grid, 33).is_err());
    }

    #[test]
    fn spec_round_trips_through_json() {
        let spec: WindowSpec = serde_json::from_str(r#"{"kind":"gaussian","params":{}}"#).unwrap();
        assert_eq!(spec, WindowSpec::Gaussian { width: 1.0 });
        let s = serde_json::to_string(&WindowSpec::TightSine).unwrap();
        assert_eq!(serde_json::from_str::<WindowSpec>(&s).unwrap(), WindowSpec::TightSine);
    }
}
