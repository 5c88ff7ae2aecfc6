//! Experiment driver behind the `gabor-diag` binary: config resolution and
//! the `stft`, `frame`, `matrix`, `analyze` and `corpus list` commands.

mod config;

pub use config::{
    AnalysisConfig, ConvolutionConfig, ExperimentConfig, GridConfig, LatticeConfig, RouteChoice, Setup,
    SignalSpec, SymbolConfig, Tolerances,
};

use crate::decay::{
    decay_envelope, estimate_s, lp_mechanism_check, sparse_apply, sparsity_profile, verify_diag_theorem_on,
    weight_convolution_check, DecayFitOptions, DiagTheoremOptions,
};
use crate::error::{Error, Result};
use crate::frames::{analysis, dense_frame_bounds, dual_window, frame_bounds, frame_operator, reconstruct, WindowSpec};
use crate::io::{num, write_container, write_csv, write_json};
use crate::tf::{gs_decay_check, stft, GS_MAX_RESIDUAL, GS_MIN_R_SQUARED};
use crate::weyl::{compare_routes, gabor_matrix, weyl_apply, GaborMatrix, MatrixOptions, Route, SymbolSpec};
use crate::grid::Signal;
use num_complex::Complex64;
use serde_json::{json, Map, Value};
use std::path::{Path, PathBuf};

pub const TOOL_NAME: &str = "gabor-diag";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Report skeleton shared by every JSON output: tool, version, resolved
/// config and operation, then the operation's own fields.
pub fn report(cfg: &ExperimentConfig, operation: &str, body: Value) -> Value {
    let mut m = Map::new();
    m.insert("tool".into(), json!({ "name": TOOL_NAME, "version": VERSION }));
    m.insert("config".into(), cfg.to_json());
    m.insert("operation".into(), json!(operation));
    if let Value::Object(b) = body {
        m.extend(b);
    }
    Value::Object(m)
}

fn out_path(cfg: &ExperimentConfig, name: &str) -> PathBuf {
    Path::new(&cfg.output_dir).join(name)
}

struct Outputs<'a> {
    cfg: &'a ExperimentConfig,
    written: Vec<PathBuf>,
}

impl<'a> Outputs<'a> {
    fn new(cfg: &'a ExperimentConfig) -> Self {
        Outputs { cfg, written: vec![] }
    }

    fn json(&mut self, name: &str, operation: &str, body: Value) -> Result<()> {
        let p = out_path(self.cfg, name);
        write_json(&p, &report(self.cfg, operation, body))?;
        self.written.push(p);
        Ok(())
    }

    fn csv<I, R>(&mut self, name: &str, header: &[&str], rows: I) -> Result<()>
    where
        I: IntoIterator<Item = R>,
        R: IntoIterator<Item = String>,
    {
        let p = out_path(self.cfg, name);
        write_csv(&p, header, rows)?;
        self.written.push(p);
        Ok(())
    }

    fn container(&mut self, name: &str, header: Value, data: &[Complex64]) -> Result<()> {
        let p = out_path(self.cfg, name);
        let mut h = header;
        h["tool"] = json!({ "name": TOOL_NAME, "version": VERSION });
        write_container(&p, &h, data)?;
        self.written.push(p);
        Ok(())
    }

    fn signal(&mut self, name: &str, s: &Signal) -> Result<()> {
        let header = json!({ "kind": "signal", "label": s.label, "grid": s.grid.json_sidecar(), "len": s.values.len() });
        self.container(name, header, &s.values)
    }
}

fn fit_json(fit: &crate::decay::DecayFit) -> Value {
    json!({
        "fitted": fit.params,
        "r_squared": fit.r_squared,
        "max_residual": fit.max_residual,
        "n_points_used": fit.n_points_used,
        "decades": fit.decades,
    })
}

/// STFT of the configured signal against the window, with its decay fit.
pub fn cmd_stft(cfg: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    let setup = cfg.build()?;
    let g = &setup.system.window;
    let f = cfg.signal(&setup);
    let v = stft(&f, g)?;
    let n = setup.grid.n_points;
    let mut out = Outputs::new(cfg);
    out.csv(
        "stft.csv",
        &["j", "l", "x", "xi", "re", "im"],
        (0..n * n).map(|i| {
            let (j, l) = (i / n, i % n);
            let z = v.get(j, l);
            vec![j.to_string(), l.to_string(), num(setup.grid.point(j)), num(setup.grid.freq(l)), num(z.re), num(z.im)]
        }),
    )?;
    out.container(
        "stft.bin",
        json!({ "kind": "tf_matrix", "layout": "row-major, row = time, column = frequency", "grid": setup.grid.json_sidecar(), "rows": n, "cols": n }),
        &v.values,
    )?;
    out.signal("signal.bin", &f)?;
    out.signal("window.bin", g)?;
    let s = cfg.analysis.s.unwrap_or(0.5);
    let decay = match gs_decay_check(&f, g, s) {
        Ok(fit) => {
            let mut j = fit_json(&fit);
            j["pass"] = json!(fit.within(GS_MIN_R_SQUARED, GS_MAX_RESIDUAL));
            j
        }
        Err(Error::InsufficientDynamicRange(msg)) => json!({ "pass": Value::Null, "note": msg }),
        Err(e) => return Err(e),
    };
    out.json(
        "stft.json",
        "stft",
        json!({
            "grid": setup.grid.json_sidecar(),
            "signal": f.label,
            "window": g.label,
            "max_modulus": v.max_modulus(),
            "params": { "s": s },
            "decay_fit": decay,
        }),
    )?;
    Ok(out.written)
}

/// Frame bounds, canonical dual and reconstruction of seeded random signals.
pub fn cmd_frame(cfg: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    let setup = cfg.build()?;
    let mut sys = setup.system;
    let lat = sys.lattice.clone();
    let mut out = Outputs::new(cfg);
    let lattice_json = json!({ "alpha": lat.alpha, "beta": lat.beta, "density": lat.density(), "points": lat.len() });
    let bounds = match frame_bounds(&sys) {
        Ok(b) => b,
        Err(Error::NotAFrame { lower, upper }) => {
            out.json(
                "frame.json",
                "frame",
                json!({
                    "status": "not_a_frame",
                    "lattice": lattice_json,
                    "bounds": { "A": lower, "B": upper, "method": "power-iteration" },
                    "below_critical_density": lat.below_critical_density(),
                }),
            )?;
            return Err(Error::NotAFrame { lower, upper });
        }
        Err(e) => return Err(e),
    };
    let dense = if setup.grid.n_points <= 256 {
        match dense_frame_bounds(&sys) {
            Ok(d) => serde_json::to_value(d)?,
            Err(Error::NotAFrame { lower, upper }) => json!({ "A": lower, "B": upper, "method": "dense-eig" }),
            Err(e) => return Err(e),
        }
    } else {
        Value::Null
    };
    let tol = cfg.analysis.tolerances.dual;
    let gamma = dual_window(&mut sys, tol)?;
    let g = &sys.window;
    let dual_residual = frame_operator(&sys, &gamma)?.rel_error(g)?;
    let slack = cfg.analysis.tolerances.frame_slack;
    let mut rows = Vec::new();
    let mut max_err = 0.0f64;
    let mut inequality_holds = true;
    for i in 0..cfg.analysis.n_random {
        let seed = cfg.seed.wrapping_add(i as u64);
        let f = Signal::random(setup.grid, seed);
        let err = reconstruct(&sys, &f)?.rel_error(&f)?;
        let energy = analysis(&sys, &f)?.energy() / f.norm().powi(2);
        let ok = energy >= bounds.lower * (1.0 - slack) && energy <= bounds.upper * (1.0 + slack);
        inequality_holds &= ok;
        max_err = max_err.max(err);
        rows.push(vec![seed.to_string(), num(err), num(energy), ok.to_string()]);
    }
    out.csv("reconstruction.csv", &["seed", "rel_error", "energy_ratio", "frame_inequality"], rows)?;
    out.signal("window.bin", g)?;
    out.signal("dual.bin", &gamma)?;
    out.json(
        "frame.json",
        "frame",
        json!({
            "status": "frame",
            "lattice": lattice_json,
            "bounds": bounds,
            "condition": bounds.condition(),
            "dense_bounds": dense,
            "tight": (bounds.upper - bounds.lower).abs() <= 1e-8 * bounds.upper,
            "dual_tolerance": tol,
            "dual_residual": dual_residual,
            "max_reconstruction_error": max_err,
            "frame_inequality_holds": inequality_holds,
            "n_random": cfg.analysis.n_random,
        }),
    )?;
    Ok(out.written)
}

fn matrix_options(cfg: &ExperimentConfig) -> MatrixOptions {
    MatrixOptions { radius: cfg.analysis.radius }
}

fn matrix_rows(m: &GaborMatrix) -> impl Iterator<Item = Vec<String>> + '_ {
    let pts = m.lattice.points();
    m.entries().map(move |(r, c, v)| {
        vec![pts[r].m.to_string(), pts[r].n.to_string(), pts[c].m.to_string(), pts[c].n.to_string(), num(v.re), num(v.im)]
    })
}

const MATRIX_HEADER: [&str; 6] = ["lambda_m", "lambda_n", "mu_m", "mu_n", "re", "im"];

fn routes(choice: RouteChoice) -> Vec<Route> {
    match choice {
        RouteChoice::Direct => vec![Route::Direct],
        RouteChoice::Stft => vec![Route::Stft],
        RouteChoice::Both => vec![Route::Direct, Route::Stft],
    }
}

fn route_name(r: Route) -> &'static str {
    match r {
        Route::Direct => "direct",
        Route::Stft => "stft",
        Route::Synthetic => "synthetic",
    }
}

/// Gabor matrices of the symbol by the selected routes, with a comparison
/// block when both are computed.
pub fn cmd_matrix(cfg: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    let setup = cfg.build()?;
    let opts = matrix_options(cfg);
    let mut out = Outputs::new(cfg);
    let mut summaries = Map::new();
    let mut mats = Vec::new();
    for r in routes(cfg.route) {
        let m = gabor_matrix(&setup.symbol, &setup.system, r, &opts)?;
        out.csv(&format!("matrix_{}.csv", route_name(r)), &MATRIX_HEADER, matrix_rows(&m))?;
        summaries.insert(route_name(r).into(), m.summary_json());
        mats.push(m);
    }
    let mut body = json!({ "matrices": summaries, "gram": matches!(cfg.symbol.spec, SymbolSpec::Constant { .. }) });
    if let [a, b] = mats.as_slice() {
        body["comparison"] = serde_json::to_value(compare_routes(a, b)?)?;
    }
    out.json("matrix.json", "matrix", body)?;
    Ok(out.written)
}

/// Decay, sparsity, sparse-apply and weight checks on the Gabor matrix.
pub fn cmd_analyze(cfg: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    let setup = cfg.build()?;
    let Setup { grid, system, symbol } = setup;
    let mut sys = system;
    let a = &cfg.analysis;
    let mopts = matrix_options(cfg);
    let mut out = Outputs::new(cfg);

    let primary = if cfg.route == RouteChoice::Direct { Route::Direct } else { Route::Stft };
    let m = gabor_matrix(&symbol, &sys, primary, &mopts)?;
    let comparison = if cfg.route == RouteChoice::Both {
        let d = gabor_matrix(&symbol, &sys, Route::Direct, &mopts)?;
        serde_json::to_value(compare_routes(&d, &m)?)?
    } else {
        Value::Null
    };
    let s = cfg.class_index(&symbol);
    let fit_opts = DecayFitOptions { min_decades: a.min_decades, ..Default::default() };
    let mut checks = Map::new();

    // almost-diagonalization theorem
    let topts = DiagTheoremOptions {
        alpha_max: a.alpha_max,
        route: primary,
        fit: fit_opts,
        matrix: mopts,
        r_squared_min: a.tolerances.r_squared_min,
        max_residual: a.tolerances.max_residual,
    };
    let th = verify_diag_theorem_on(&m, &symbol, &sys, s, &topts)?;
    checks.insert("diag_theorem".into(), json!(th.pass));
    out.json(
        "diag_theorem.json",
        "verify_diag_theorem",
        json!({
            "params": { "s": s, "alpha_max": a.alpha_max, "route": primary },
            "fitted": th.fit.map(|f| f.params),
            "r_squared": th.fit.map(|f| f.r_squared),
            "max_residual": th.fit.map(|f| f.max_residual),
            "pass": th.pass,
            "declared_s": th.declared_s,
            "legs": th.legs,
            "route_comparison": comparison,
        }),
    )?;

    // model selection over s
    let env = decay_envelope(&m);
    out.csv("envelope.csv", &["distance", "max_modulus"], env.iter().map(|&(d, v)| vec![num(d), num(v)]))?;
    let mut fit_rows = Vec::new();
    for &sc in &a.s_candidates {
        if let Ok(f) = crate::decay::fit_decay_points(&env, sc, &fit_opts) {
            fit_rows.push(vec![num(sc), num(f.params.eps), num(f.params.c), num(f.r_squared), num(f.max_residual)]);
        }
    }
    out.csv("decay_fits.csv", &["s", "eps", "C", "r_squared", "max_residual"], fit_rows)?;
    let est = match estimate_s(&m, &a.s_candidates, &fit_opts) {
        Ok((best, f)) => {
            let mut j = fit_json(&f);
            j["s_best"] = json!(best);
            j["pass"] = json!(true);
            j
        }
        Err(Error::InsufficientDynamicRange(msg)) => json!({ "s_best": Value::Null, "pass": false, "note": msg }),
        Err(e) => return Err(e),
    };
    checks.insert("estimate_s".into(), est["pass"].clone());
    let mut body = json!({ "params": { "candidates": a.s_candidates } });
    body.as_object_mut().expect("object").extend(est.as_object().cloned().unwrap_or_default());
    out.json("estimate_s.json", "estimate_s", body)?;

    // sparsity law and the lp mechanism
    let prof = sparsity_profile(&m, 1, s);
    out.csv(
        "sparsity.csv",
        &["column_id", "n", "magnitude"],
        prof.columns.iter().flat_map(|c| {
            c.sorted.iter().enumerate().map(move |(i, &v)| vec![c.column.to_string(), (i + 1).to_string(), num(v)])
        }),
    )?;
    let col_rows: Vec<Vec<String>> = prof
        .fitted_columns()
        .map(|(c, f)| vec![c.to_string(), num(f.params.eps), num(f.params.c), num(f.r_squared)])
        .collect();
    out.csv("sparsity_fits.csv", &["column_id", "eps", "C", "r_squared"], col_rows)?;
    let sparsity_pass = prof.min_r_squared.is_some_and(|r| r >= 0.95);
    checks.insert("sparsity_profile".into(), json!(sparsity_pass));
    out.json(
        "sparsity.json",
        "sparsity_profile",
        json!({
            "params": { "d": 1, "s": s, "abscissa_exponent": 1.0 / (2.0 * s) },
            "fitted": prof.fit.map(|f| f.params),
            "r_squared": prof.fit.map(|f| f.r_squared),
            "max_residual": prof.fit.map(|f| f.max_residual),
            "min_column_r_squared": prof.min_r_squared,
            "fitted_columns": prof.columns.len() - prof.skipped.len(),
            "skipped_columns": prof.skipped,
            "pass": sparsity_pass,
        }),
    )?;
    let ps: Vec<f64> = (1..=8).map(|k| 1.0 / k as f64).collect();
    let lp = lp_mechanism_check(&m, &ps);
    checks.insert("lp_mechanism".into(), json!(lp.pass));
    out.json("lp_mechanism.json", "lp_mechanism_check", serde_json::to_value(&lp)?)?;

    // thresholded application
    dual_window(&mut sys, a.tolerances.dual)?;
    let f = Signal::random(grid, cfg.seed);
    let (full, _) = sparse_apply(&m, &sys, &f, 0.0)?;
    let exact = weyl_apply(&symbol, &f)?;
    let mut taus = a.thresholds.clone();
    taus.sort_by(|x, y| y.total_cmp(x));
    let mut sweep = Vec::new();
    for &tau in &taus {
        let (y, kept) = sparse_apply(&m, &sys, &f, tau)?;
        let err = if full.norm() > 0.0 { y.rel_error(&full)? } else { y.norm() };
        sweep.push((tau, kept, err));
    }
    let monotone = sweep.windows(2).all(|w| w[1].2 <= w[0].2 && w[1].1 >= w[0].1);
    checks.insert("sparse_apply".into(), json!(monotone));
    out.csv(
        "sparse_apply.csv",
        &["tau", "kept_fraction", "rel_error"],
        sweep.iter().map(|&(t, k, e)| vec![num(t), num(k), num(e)]),
    )?;
    out.json(
        "sparse_apply.json",
        "sparse_apply",
        json!({
            "params": { "thresholds": taus, "seed": cfg.seed },
            "sweep": sweep.iter().map(|&(t, k, e)| json!({ "tau": t, "kept_fraction": k, "rel_error": e })).collect::<Vec<_>>(),
            "full_vs_weyl_rel_error": if exact.norm() > 0.0 { full.rel_error(&exact)? } else { full.norm() },
            "pass": monotone,
        }),
    )?;

    // weight convolution at the lattice spacing
    let cc = a.convolution;
    let lat = &sys.lattice;
    let conv = weight_convolution_check(s, cc.eps, lat.alpha, lat.beta, cc.radius, cc.eval_radius)
        .and_then(|c| Ok((c, weight_convolution_check(s, cc.eps, lat.alpha, lat.beta, 2.0 * cc.radius, cc.eval_radius)?)));
    let body = match conv {
        Ok((conv, conv2)) => {
            let stability = (conv.max_ratio - conv2.max_ratio).abs();
            let pass = conv.max_ratio.is_finite() && stability <= 1e-6;
            json!({
                "params": { "s": s, "eps": cc.eps, "radius": cc.radius, "eval_radius": cc.eval_radius },
                "report": conv,
                "doubled_radius_max_ratio": conv2.max_ratio,
                "radius_stability": stability,
                "pass": pass,
            })
        }
        Err(e @ Error::RadiusTooSmall(_)) => json!({
            "params": { "s": s, "eps": cc.eps, "radius": cc.radius, "eval_radius": cc.eval_radius },
            "pass": false,
            "note": format!("{e}; raise analysis.convolution.radius or eps"),
        }),
        Err(e) => return Err(e),
    };
    checks.insert("weight_convolution".into(), body["pass"].clone());
    out.json("weight_convolution.json", "weight_convolution_check", body)?;

    let all = checks.values().all(|v| v == &json!(true));
    out.json("analyze.json", "analyze", json!({ "checks": checks, "pass": all }))?;
    Ok(out.written)
}

/// Registered kinds for every corpus section.
pub fn corpus_list() -> Value {
    json!({
        "tool": { "name": TOOL_NAME, "version": VERSION },
        "windows": WindowSpec::kinds(),
        "symbols": SymbolSpec::kinds(),
        "signals": SignalSpec::kinds(),
        "matrices": ["synthetic_matrix_decay"],
    })
}
