use crate::error::{Error, Result};
use crate::grid::{Grid, PhasePoint};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Complex samples of a symbol on the phase grid: `2N` rows at
/// `x_p = -T + p dx/2` (so midpoints of grid points are on it) times the `N`
/// frequencies of the base grid.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolField {
    pub grid: Grid,
    pub values: Vec<Complex64>,
    pub gevrey_s: Option<f64>,
    pub label: String,
}

impl SymbolField {
    pub fn from_fn(
        grid: Grid,
        label: impl Into<String>,
        gevrey_s: Option<f64>,
        f: impl Fn(PhasePoint) -> Complex64,
    ) -> Self {
        let n = grid.n_points;
        let mut values = Vec::with_capacity(2 * n * n);
        for p in 0..2 * n {
            for l in 0..n {
                values.push(f(PhasePoint::new(Self::x_at(&grid, p), grid.freq(l))));
            }
        }
        SymbolField { grid, values, gevrey_s, label: label.into() }
    }

    fn x_at(grid: &Grid, p: usize) -> f64 {
        -grid.extent + p as f64 * grid.spacing() / 2.0
    }

    pub fn rows(&self) -> usize {
        2 * self.grid.n_points
    }

    pub fn cols(&self) -> usize {
        self.grid.n_points
    }

    pub fn x(&self, p: usize) -> f64 {
        Self::x_at(&self.grid, p)
    }

    pub fn xi(&self, l: usize) -> f64 {
        self.grid.freq(l)
    }

    pub fn row(&self, p: usize) -> &[Complex64] {
        let n = self.cols();
        &self.values[p * n..(p + 1) * n]
    }

    pub fn get(&self, p: usize, l: usize) -> Complex64 {
        self.values[p * self.cols() + l]
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0)
    }

    pub fn max_modulus(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

fn one() -> f64 {
    1.0
}

fn quarter() -> f64 {
    0.25
}

/// Symbol corpus entry, `{ "kind": ..., "params": {...} }` in JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum SymbolSpec {
    Constant {
        #[serde(default = "one")]
        value: f64,
    },
    /// `e^{-pi |z|^2 / width^2}`
    Gaussian {
        #[serde(default = "one")]
        width: f64,
    },
    /// `1 / (1 + |z|^2 / width^2)`
    Cauchy {
        #[serde(default = "one")]
        width: f64,
    },
    /// `sin(2 pi (omega_x x + omega_xi xi))`
    Sine {
        #[serde(default = "quarter")]
        omega_x: f64,
        #[serde(default = "quarter")]
        omega_xi: f64,
    },
    /// `exp(-(1 - |z/R|^2)^{-1/(s-1)})` on `|z| < R`, zero outside.
    GevreyBump { s: f64, radius: f64 },
    /// Indicator of `|x| <= half_width_x, |xi| <= half_width_xi`.
    Boxcar {
        #[serde(default = "one")]
        half_width_x: f64,
        #[serde(default = "one")]
        half_width_xi: f64,
    },
    /// `a(x) = e^{-pi x^2 / width^2}`
    Separable {
        #[serde(default = "one")]
        width: f64,
    },
    /// `m(xi) = e^{-pi xi^2 / width^2}`
    Multiplier {
        #[serde(default = "one")]
        width: f64,
    },
}

impl SymbolSpec {
    pub fn kinds() -> &'static [&'static str] {
        &["constant", "gaussian", "cauchy", "sine", "gevrey_bump", "boxcar", "separable", "multiplier"]
    }

    pub fn name(&self) -> &'static str {
        match self {
            SymbolSpec::Constant { .. } => "constant",
            SymbolSpec::Gaussian { .. } => "gaussian",
            SymbolSpec::Cauchy { .. } => "cauchy",
            SymbolSpec::Sine { .. } => "sine",
            SymbolSpec::GevreyBump { .. } => "gevrey_bump",
            SymbolSpec::Boxcar { .. } => "boxcar",
            SymbolSpec::Separable { .. } => "separable",
            SymbolSpec::Multiplier { .. } => "multiplier",
        }
    }

    /// Class index the symbol belongs to, `None` for non-smooth symbols.
    pub fn gevrey_s(&self) -> Option<f64> {
        match self {
            SymbolSpec::Constant { .. }
            | SymbolSpec::Gaussian { .. }
            | SymbolSpec::Separable { .. }
            | SymbolSpec::Multiplier { .. } => Some(0.5),
            SymbolSpec::Cauchy { .. } | SymbolSpec::Sine { .. } => Some(1.0),
            SymbolSpec::GevreyBump { s, .. } => Some(*s),
            SymbolSpec::Boxcar { .. } => None,
        }
    }
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::BadParams(format!("{name} must be positive, got {v}")))
    }
}

pub fn build_symbol(spec: &SymbolSpec, grid: Grid) -> Result<SymbolField> {
    let s = spec.gevrey_s();
    let re = |v: f64| Complex64::new(v, 0.0);
    let field = match *spec {
        SymbolSpec::Constant { value } => SymbolField::from_fn(grid, "constant", s, |_| re(value)),
        SymbolSpec::Gaussian { width } => {
            let w2 = positive("width", width)?.powi(2);
            SymbolField::from_fn(grid, "gaussian", s, |z| re((-PI * (z.x * z.x + z.xi * z.xi) / w2).exp()))
        }
        SymbolSpec::Cauchy { width } => {
            let w2 = positive("width", width)?.powi(2);
            SymbolField::from_fn(grid, "cauchy", s, |z| re(1.0 / (1.0 + (z.x * z.x + z.xi * z.xi) / w2)))
        }
        SymbolSpec::Sine { omega_x, omega_xi } => SymbolField::from_fn(grid, "sine", s, |z| {
            re((2.0 * PI * (omega_x * z.x + omega_xi * z.xi)).sin())
        }),
        SymbolSpec::GevreyBump { s: gs, radius } => {
            if !(gs > 1.0) {
                return Err(Error::BadParams(format!("gevrey_bump needs s > 1, got {gs}")));
            }
            let r2 = positive("radius", radius)?.powi(2);
            let p = -1.0 / (gs - 1.0);
            SymbolField::from_fn(grid, "gevrey_bump", s, |z| {
                let t = (z.x * z.x + z.xi * z.xi) / r2;
                re(if t < 1.0 { (-(1.0 - t).powf(p)).exp() } else { 0.0 })
            })
        }
        SymbolSpec::Boxcar { half_width_x, half_width_xi } => {
            let (hx, hxi) = (positive("half_width_x", half_width_x)?, positive("half_width_xi", half_width_xi)?);
            SymbolField::from_fn(grid, "boxcar", s, |z| {
                re(if z.x.abs() <= hx && z.xi.abs() <= hxi { 1.0 } else { 0.0 })
            })
        }
        SymbolSpec::Separable { width } => {
            let w2 = positive("width", width)?.powi(2);
            SymbolField::from_fn(grid, "separable", s, |z| re((-PI * z.x * z.x / w2).exp()))
        }
        SymbolSpec::Multiplier { width } => {
            let w2 = positive("width", width)?.powi(2);
            SymbolField::from_fn(grid, "multiplier", s, |z| re((-PI * z.xi * z.xi / w2).exp()))
        }
    };
    Ok(field)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Grid {
        Grid::new(8.0, 64).unwrap()
    }

    #[test]
    fn constant_is_all_ones() {
        let s = build_symbol(&SymbolSpec::Constant { value: 1.0 }, grid()).unwrap();
        assert!(s.values.iter().all(|v| *v == Complex64::new(1.0, 0.0)));
        assert_eq!(s.values.len(), 2 * 64 * 64);
    }

    #[test]
    fn gaussian_values() {
        let s = build_symbol(&SymbolSpec::Gaussian { width: 1.0 }, grid()).unwrap();
        // x = 0 is row 64 of the half-step grid, xi = 0 is column 32
        assert_eq!(s.get(64, 32).re, 1.0);
        let xi1 = 32 + (1.0 / s.grid.freq_spacing()) as usize;
        assert!((s.get(64, xi1).re - (-PI).exp()).abs() < 1e-15);
        assert_eq!(s.gevrey_s, Some(0.5));
    }

    #[test]
    fn bump_support() {
        let s = build_symbol(&SymbolSpec::GevreyBump { s: 2.0, radius: 4.0 }, grid()).unwrap();
        for p in 0..s.rows() {
            for l in 0..s.cols() {
                if s.x(p).hypot(s.xi(l)) >= 4.0 {
                    assert_eq!(s.get(p, l), Complex64::new(0.0, 0.0));
                }
            }
        }
        assert!(build_symbol(&SymbolSpec::GevreyBump { s: 1.0, radius: 4.0 }, grid()).is_err());
    }

    #[test]
    fn spec_json_shape() {
        let spec: SymbolSpec = serde_json::from_str(r#"{"kind":"gevrey_bump","params":{"s":2.0,"radius":4.0}}"#).unwrap();
        assert_eq!(spec, SymbolSpec::GevreyBump { s: 2.0, radius: 4.0 });
        assert!(serde_json::from_str::<SymbolSpec>(r#"{"kind":"nope","params":{}}"#).is_err());
    }
}
