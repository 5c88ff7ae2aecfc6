use crate::error::{Error, Result};
use crate::frames::{GaborSystem, Lattice, WindowSpec};
use crate::grid::{Grid, Signal};
use crate::weyl::{build_symbol, SymbolField, SymbolSpec};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::path::Path;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub extent: f64,
    pub n_points: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeConfig {
    pub alpha: f64,
    pub beta: f64,
    #[serde(default)]
    pub index_radius: Option<usize>,
}

/// Test signal for `stft`; `random` draws from the config seed.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum SignalSpec {
    #[default]
    Gaussian,
    Window,
    Zero,
    Random,
}

impl SignalSpec {
    pub fn kinds() -> &'static [&'static str] {
        &["gaussian", "window", "zero", "random"]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymbolConfig {
    #[serde(flatten)]
    pub spec: SymbolSpec,
    /// Overrides the class index the corpus assigns to the symbol.
    pub gevrey_s: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub dual: f64,
    pub r_squared_min: f64,
    pub max_residual: f64,
    pub frame_slack: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { dual: 1e-10, r_squared_min: 0.99, max_residual: 0.5, frame_slack: 1e-6 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConvolutionConfig {
    pub eps: f64,
    pub radius: f64,
    pub eval_radius: f64,
}

impl Default for ConvolutionConfig {
    fn default() -> Self {
        ConvolutionConfig { eps: 1.0, radius: 40.0, eval_radius: 20.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AnalysisConfig {
    /// Class index tested; defaults to the symbol's own.
    pub s: Option<f64>,
    pub s_candidates: Vec<f64>,
    pub thresholds: Vec<f64>,
    pub alpha_max: usize,
    pub min_decades: f64,
    pub n_random: usize,
    /// Optional Euclidean bound on `|lambda - mu|` for retained matrix entries.
    pub radius: Option<f64>,
    pub tolerances: Tolerances,
    pub convolution: ConvolutionConfig,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            s: None,
            s_candidates: vec![0.5, 1.0, 2.0],
            thresholds: vec![1e-4, 1e-6, 1e-8],
            alpha_max: 8,
            min_decades: 10.0,
            n_random: 10,
            radius: None,
            tolerances: Tolerances::default(),
            convolution: ConvolutionConfig::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum RouteChoice {
    Direct,
    Stft,
    #[default]
    Both,
}

/// Fully resolved experiment description; serialized verbatim into every report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub grid: GridConfig,
    pub lattice: LatticeConfig,
    pub window: WindowSpec,
    pub signal: SignalSpec,
    pub symbol: SymbolConfig,
    pub analysis: AnalysisConfig,
    pub route: RouteChoice,
    pub output_dir: String,
    pub seed: u64,
}

/// The objects a config describes, built and validated.
pub struct Setup {
    pub grid: Grid,
    pub system: GaborSystem,
    pub symbol: SymbolField,
}

fn cfg_err(field: &str, msg: impl std::fmt::Display) -> Error {
    Error::Config(format!("{field}: {msg}"))
}

fn section<T: DeserializeOwned>(obj: &serde_json::Map<String, Value>, field: &str) -> Result<T> {
    let v = obj.get(field).ok_or_else(|| cfg_err(field, "missing"))?;
    serde_json::from_value(v.clone()).map_err(|e| cfg_err(field, e))
}

fn optional<T: DeserializeOwned + Default>(obj: &serde_json::Map<String, Value>, field: &str) -> Result<T> {
    match obj.get(field) {
        None | Some(Value::Null) => Ok(T::default()),
        Some(v) => serde_json::from_value(v.clone()).map_err(|e| cfg_err(field, e)),
    }
}

/// Parse `{ "kind": ..., "params": {...} }` against a registry of kinds.
fn tagged<T: DeserializeOwned>(v: &Value, field: &str, kinds: &[&str]) -> Result<T> {
    let obj = v.as_object().ok_or_else(|| cfg_err(field, "expected an object with `kind` and `params`"))?;
    let kind = match obj.get("kind") {
        None => return Err(cfg_err(&format!("{field}.kind"), format!("missing (one of {})", kinds.join(", ")))),
        Some(Value::String(k)) => k.clone(),
        Some(_) => return Err(cfg_err(&format!("{field}.kind"), "must be a string")),
    };
    if !kinds.contains(&kind.as_str()) {
        return Err(cfg_err(&format!("{field}.kind"), format!("unknown kind `{kind}` (one of {})", kinds.join(", "))));
    }
    let params = obj.get("params").cloned().unwrap_or_else(|| json!({}));
    // unit variants carry no params
    let candidate = if params.as_object().is_some_and(|p| p.is_empty()) {
        serde_json::from_value(json!({ "kind": kind })).or_else(|_| serde_json::from_value(json!({ "kind": kind, "params": params })))
    } else {
        serde_json::from_value(json!({ "kind": kind, "params": params }))
    };
    candidate.map_err(|e| cfg_err(&format!("{field}.params"), e))
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Config(format!("invalid JSON: {e}")))?;
        Self::from_value(&v)
    }

    pub fn from_value(v: &Value) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| Error::Config("top level must be an object".into()))?;
        const KNOWN: [&str; 9] = ["grid", "lattice", "window", "signal", "symbol", "analysis", "route", "output_dir", "seed"];
        if let Some(k) = obj.keys().find(|k| !KNOWN.contains(&k.as_str())) {
            return Err(cfg_err(k, "unknown field"));
        }
        let window = tagged(obj.get("window").ok_or_else(|| cfg_err("window", "missing"))?, "window", WindowSpec::kinds())?;
        let signal = match obj.get("signal") {
            None | Some(Value::Null) => SignalSpec::default(),
            Some(s) => tagged(s, "signal", SignalSpec::kinds())?,
        };
        let sym = obj.get("symbol").ok_or_else(|| cfg_err("symbol", "missing"))?;
        let mut sym_fields = sym.clone();
        let gevrey_s = match sym_fields.as_object_mut().and_then(|o| o.remove("gevrey_s")) {
            None | Some(Value::Null) => None,
            Some(Value::Number(n)) => n.as_f64(),
            Some(_) => return Err(cfg_err("symbol.gevrey_s", "must be a number")),
        };
        let spec = tagged(&sym_fields, "symbol", SymbolSpec::kinds())?;
        let cfg = ExperimentConfig {
            grid: section(obj, "grid")?,
            lattice: section(obj, "lattice")?,
            window,
            signal,
            symbol: SymbolConfig { spec, gevrey_s },
            analysis: optional(obj, "analysis")?,
            route: optional(obj, "route")?,
            output_dir: match obj.get("output_dir") {
                None | Some(Value::Null) => "out".into(),
                Some(Value::String(s)) => s.clone(),
                Some(_) => return Err(cfg_err("output_dir", "must be a string")),
            },
            seed: optional(obj, "seed")?,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let a = &self.analysis;
        if a.s_candidates.is_empty() {
            return Err(cfg_err("analysis.s_candidates", "must be nonempty"));
        }
        if let Some(s) = a.s_candidates.iter().find(|s| !(**s >= 0.5 && s.is_finite())) {
            return Err(cfg_err("analysis.s_candidates", format!("{s} is below 1/2")));
        }
        if a.s.is_some_and(|s| !(s >= 0.5 && s.is_finite())) {
            return Err(cfg_err("analysis.s", "must be >= 1/2"));
        }
        if a.thresholds.iter().any(|t| !(*t >= 0.0 && t.is_finite())) {
            return Err(cfg_err("analysis.thresholds", "must be nonnegative"));
        }
        if !(a.tolerances.dual > 0.0) {
            return Err(cfg_err("analysis.tolerances.dual", "must be positive"));
        }
        self.build().map(|_| ())
    }

    /// Class index used for the decay checks.
    pub fn class_index(&self, sigma: &SymbolField) -> f64 {
        self.analysis.s.or(sigma.gevrey_s).unwrap_or(self.analysis.s_candidates[0])
    }

    pub fn build(&self) -> Result<Setup> {
        let grid = Grid::new(self.grid.extent, self.grid.n_points).map_err(|e| cfg_err("grid", e))?;
        let lat = Lattice::new(grid, self.lattice.alpha, self.lattice.beta, self.lattice.index_radius)
            .map_err(|e| cfg_err("lattice", e))?;
        let g = self.window.build(&lat).map_err(|e| cfg_err("window", e))?;
        let system = GaborSystem::new(g, lat).map_err(|e| cfg_err("window", e))?;
        let mut symbol = build_symbol(&self.symbol.spec, grid).map_err(|e| cfg_err("symbol", e))?;
        if self.symbol.gevrey_s.is_some() {
            symbol.gevrey_s = self.symbol.gevrey_s;
        }
        Ok(Setup { grid, system, symbol })
    }

    pub fn signal(&self, setup: &Setup) -> Signal {
        match self.signal {
            SignalSpec::Gaussian => Signal::gaussian(setup.grid),
            SignalSpec::Window => setup.system.window.clone(),
            SignalSpec::Zero => Signal::zeros(setup.grid),
            SignalSpec::Random => Signal::random(setup.grid, self.seed),
        }
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("config serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"{
        "grid": {"extent": 8.0, "n_points": 64},
        "lattice": {"alpha": 0.5, "beta": 0.5},
        "window": {"kind": "gaussian", "params": {}},
        "symbol": {"kind": "gaussian"}
    }"#;

    fn with(patch: impl FnOnce(&mut Value)) -> Result<ExperimentConfig> {
        let mut v: Value = serde_json::from_str(BASE).unwrap();
        patch(&mut v);
        ExperimentConfig::from_value(&v)
    }

    #[test]
    fn defaults_resolve() {
        let c = with(|_| {}).unwrap();
        assert_eq!(c.analysis.s_candidates, vec![0.5, 1.0, 2.0]);
        assert_eq!(c.route, RouteChoice::Both);
        assert_eq!(c.output_dir, "out");
        let again = ExperimentConfig::from_value(&c.to_json()).unwrap();
        assert_eq!(again, c);
    }

    #[test]
    fn missing_window_kind_names_the_field() {
        let e = with(|v| v["window"] = json!({"params": {}})).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(e.to_string().contains("window.kind"), "{e}");
    }

    #[test]
    fn empty_candidates_rejected() {
        let e = with(|v| v["analysis"] = json!({"s_candidates": []})).unwrap_err();
        assert!(e.to_string().contains("s_candidates"));
    }

    #[test]
    fn misaligned_lattice_rejected() {
        let e = with(|v| v["lattice"]["alpha"] = json!(0.3)).unwrap_err();
        assert!(matches!(e, Error::Config(_)));
    }

    #[test]
    fn unit_variants_parse() {
        let c = with(|v| {
            v["window"] = json!({"kind": "tight_sine"});
            v["signal"] = json!({"kind": "zero"});
        })
        .unwrap();
        assert_eq!(c.window, WindowSpec::TightSine);
        assert_eq!(c.signal, SignalSpec::Zero);
    }
}
