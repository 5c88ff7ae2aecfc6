use super::kernel::weyl_kernel;
use super::SymbolField;
use crate::decay::WeightParams;
use crate::error::{Error, Result};
use crate::frames::{GaborSystem, Lattice, LatticeIndex};
use crate::grid::{PhasePoint, Signal};
use crate::xprec::{fft2, roots_of_unity, Cdd, DdFft};
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    Direct,
    Stft,
    Synthetic,
}

/// Which index pairs are kept. A pair is always dropped when its wrapped
/// difference reaches beyond a quarter period in time or onto the Nyquist
/// frequency row, where the periodized model aliases; `radius` additionally
/// bounds `|lambda - mu|`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MatrixOptions {
    pub radius: Option<f64>,
}

/// Entries `<sigma^w pi(mu) g, pi(lambda) g>` over retained pairs; row is
/// `lambda`, column is `mu`, both in lattice order.
#[derive(Clone, Debug)]
pub struct GaborMatrix {
    pub lattice: Lattice,
    pub route: Route,
    pub window_label: String,
    pub symbol_label: String,
    values: Vec<Complex64>,
    retained: Vec<bool>,
}

fn wrapped_difference(lat: &Lattice, a: LatticeIndex, b: LatticeIndex) -> (i64, i64) {
    let lt = lat.time_count() as i64;
    let lf = lat.freq_count() as i64;
    ((a.m - b.m + lt / 2).rem_euclid(lt) - lt / 2, (a.n - b.n + lf / 2).rem_euclid(lf) - lf / 2)
}

fn keep(lat: &Lattice, dm: i64, dn: i64, opts: &MatrixOptions) -> bool {
    let lt = lat.time_count() as i64;
    let lf = lat.freq_count() as i64;
    if 4 * dm.abs() >= lt || (lf > 1 && dn == -lf / 2) {
        return false;
    }
    match opts.radius {
        Some(r) => (dm as f64 * lat.alpha).hypot(dn as f64 * lat.beta) <= r * (1.0 + 1e-12),
        None => true,
    }
}

fn retention_mask(lat: &Lattice, opts: &MatrixOptions) -> Vec<bool> {
    let pts = lat.points();
    let mut mask = Vec::with_capacity(pts.len() * pts.len());
    for &a in pts {
        for &b in pts {
            let (dm, dn) = wrapped_difference(lat, a, b);
            mask.push(keep(lat, dm, dn, opts));
        }
    }
    mask
}

impl GaborMatrix {
    fn assemble(
        lattice: &Lattice,
        route: Route,
        window_label: &str,
        symbol_label: &str,
        values: Vec<Complex64>,
        retained: Vec<bool>,
    ) -> Self {
        GaborMatrix {
            lattice: lattice.clone(),
            route,
            window_label: window_label.to_string(),
            symbol_label: symbol_label.to_string(),
            values,
            retained,
        }
    }

    /// Entries `C e^{eps |lambda - mu|^{1/s}}` from a decaying weight (`eps < 0`).
    pub fn synthetic(lattice: &Lattice, decay: &WeightParams, opts: &MatrixOptions) -> Self {
        Self::from_difference_fn(lattice, opts, "synthetic_matrix_decay", |d| {
            Complex64::new(decay.at_radius(d.norm()), 0.0)
        })
    }

    /// Matrix whose entries depend only on the wrapped difference `lambda - mu`.
    pub fn from_difference_fn(
        lattice: &Lattice,
        opts: &MatrixOptions,
        label: &str,
        f: impl Fn(PhasePoint) -> Complex64,
    ) -> Self {
        let retained = retention_mask(lattice, opts);
        let pts = lattice.points();
        let l = pts.len();
        let mut values = vec![Complex64::new(0.0, 0.0); l * l];
        for i in 0..l {
            for j in 0..l {
                if retained[i * l + j] {
                    let (dm, dn) = wrapped_difference(lattice, pts[i], pts[j]);
                    values[i * l + j] = f(PhasePoint::new(dm as f64 * lattice.alpha, dn as f64 * lattice.beta));
                }
            }
        }
        Self::assemble(lattice, Route::Synthetic, "none", label, values, retained)
    }

    pub fn size(&self) -> usize {
        self.lattice.len()
    }

    pub fn is_retained(&self, row: usize, col: usize) -> bool {
        self.retained[row * self.size() + col]
    }

    pub fn get(&self, row: usize, col: usize) -> Option<Complex64> {
        self.is_retained(row, col).then(|| self.values[row * self.size() + col])
    }

    /// Wrapped index difference `(m_lambda - m_mu, n_lambda - n_mu)`.
    pub fn difference(&self, row: usize, col: usize) -> (i64, i64) {
        let pts = self.lattice.points();
        wrapped_difference(&self.lattice, pts[row], pts[col])
    }

    pub fn difference_point(&self, row: usize, col: usize) -> PhasePoint {
        let (dm, dn) = self.difference(row, col);
        PhasePoint::new(dm as f64 * self.lattice.alpha, dn as f64 * self.lattice.beta)
    }

    /// Retained `(row, col, value)` triples in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        let l = self.size();
        (0..l * l).filter(|&k| self.retained[k]).map(move |k| (k / l, k % l, self.values[k]))
    }

    /// Retained entries of one column, in row order.
    pub fn column(&self, col: usize) -> Vec<(usize, Complex64)> {
        (0..self.size()).filter_map(|r| self.get(r, col).map(|v| (r, v))).collect()
    }

    pub fn retained_count(&self) -> usize {
        self.retained.iter().filter(|&&k| k).count()
    }

    pub fn max_entry(&self) -> f64 {
        self.entries().map(|e| e.2.norm()).fold(0.0, f64::max)
    }

    /// `y = M x` over retained entries, with entries below `tau` in modulus dropped.
    pub fn apply_thresholded(&self, x: &[Complex64], tau: f64) -> (Vec<Complex64>, usize) {
        let l = self.size();
        let mut kept = 0;
        let y = (0..l)
            .map(|r| {
                let mut acc = Complex64::new(0.0, 0.0);
                for c in 0..l {
                    if let Some(v) = self.get(r, c) {
                        if v.norm() >= tau {
                            acc += v * x[c];
                            kept += 1;
                        }
                    }
                }
                acc
            })
            .collect();
        (y, kept)
    }

    pub fn summary_json(&self) -> serde_json::Value {
        serde_json::json!({
            "route": self.route,
            "window": self.window_label,
            "symbol": self.symbol_label,
            "lattice": self.lattice.descriptor(),
            "max_entry": self.max_entry(),
            "retained_count": self.retained_count(),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RouteComparison {
    pub max_rel_discrepancy: f64,
    pub max_abs_complex_discrepancy: f64,
    pub n_compared: usize,
    pub floor: f64,
}

/// `max | |a| - |b| | / |a|` over retained entries with `|a| > 1e-10`.
pub fn compare_routes(a: &GaborMatrix, b: &GaborMatrix) -> Result<RouteComparison> {
    if a.lattice != b.lattice || a.retained != b.retained {
        return Err(Error::GridMismatch);
    }
    let floor = 1e-10;
    let mut out = RouteComparison {
        max_rel_discrepancy: 0.0,
        max_abs_complex_discrepancy: 0.0,
        n_compared: 0,
        floor,
    };
    for (r, c, va) in a.entries() {
        let vb = b.values[r * a.size() + c];
        out.max_abs_complex_discrepancy = out.max_abs_complex_discrepancy.max((va - vb).norm());
        if va.norm() > floor {
            out.n_compared += 1;
            out.max_rel_discrepancy = out.max_rel_discrepancy.max((va.norm() - vb.norm()).abs() / va.norm());
        }
    }
    Ok(out)
}

fn check_inputs(sigma: &SymbolField, sys: &GaborSystem) -> Result<()> {
    if sigma.grid != sys.grid() {
        return Err(Error::GridMismatch);
    }
    Ok(())
}

fn to_dd(s: &Signal) -> Vec<Cdd> {
    s.values.iter().map(|&v| Cdd::from_c64(v)).collect()
}

/// Centered transform in place: `v_l <- sum_k v_k e^{-2 pi i (l-N/2)(k-N/2)/N}`.
fn centered_forward_dd(fft: &DdFft, v: &mut [Cdd]) {
    for (k, x) in v.iter_mut().enumerate() {
        *x = x.neg_if(k % 2 == 1);
    }
    fft.process(v, false);
    for (k, x) in v.iter_mut().enumerate() {
        *x = x.neg_if(k % 2 == 1);
    }
}

/// Direct quadrature: apply the Weyl kernel to each atom `pi(mu) g` and take
/// inner products with every `pi(lambda) g`. Double-double throughout.
pub fn gabor_matrix_direct(sigma: &SymbolField, sys: &GaborSystem, opts: &MatrixOptions) -> Result<GaborMatrix> {
    check_inputs(sigma, sys)?;
    let lat = &sys.lattice;
    let n = lat.grid.n_points;
    let dx = lat.grid.spacing();
    let l = lat.len();
    let kern = weyl_kernel(sigma);
    let roots = roots_of_unity(n);
    let g = to_dd(&sys.window);
    let fft = DdFft::new(n);
    let retained = retention_mask(lat, opts);
    let slices = lat.time_slices();
    let b = lat.freq_step();
    let cols: Vec<Vec<Complex64>> = (0..l)
        .into_par_iter()
        .map(|mu| {
            let idx = lat.points()[mu];
            let shift = lat.time_shift(idx.m);
            let step = (idx.n * b as i64).rem_euclid(n as i64) as usize;
            let u: Vec<Cdd> = (0..n)
                .map(|k| g[(k + n - shift) % n] * roots[(step * ((k + n - n / 2) % n)) % n].conj())
                .collect();
            let w: Vec<Cdd> = (0..n)
                .map(|i| {
                    let row = &kern[i * n..(i + 1) * n];
                    let mut acc = Cdd::ZERO;
                    for (kk, uk) in row.iter().zip(&u) {
                        acc += *kk * *uk;
                    }
                    acc.scale(dx)
                })
                .collect();
            let mut col = vec![Complex64::new(0.0, 0.0); l];
            let mut p = vec![Cdd::ZERO; n];
            for (m, positions) in &slices {
                if !positions.iter().any(|&pos| retained[pos * l + mu]) {
                    continue;
                }
                let sh = lat.time_shift(*m);
                for k in 0..n {
                    p[k] = w[k] * g[(k + n - sh) % n].conj();
                }
                centered_forward_dd(&fft, &mut p);
                for &pos in positions {
                    if retained[pos * l + mu] {
                        col[pos] = p[lat.freq_bin(lat.points()[pos].n)].scale(dx).to_c64();
                    }
                }
            }
            col
        })
        .collect();
    let mut values = vec![Complex64::new(0.0, 0.0); l * l];
    for (mu, col) in cols.iter().enumerate() {
        for lam in 0..l {
            values[lam * l + mu] = col[lam];
        }
    }
    Ok(GaborMatrix::assemble(lat, Route::Direct, &sys.window.label, &sigma.label, values, retained))
}

/// Discrete Wigner window of `g` on the symbol grid (`2N x N`):
/// `Phi(p, l) = 2 dx sum_delta g((p+delta)/2) conj(g((p-delta)/2)) e^{-2 pi i delta dx xi_l}`
/// over `delta` in `[-N/2, N/2)` with the parity of `p`.
pub fn wigner_window(g: &Signal) -> Vec<Cdd> {
    let n = g.grid.n_points;
    let dx = g.grid.spacing();
    let gd = to_dd(g);
    let fft = DdFft::new(n);
    let rows: Vec<Vec<Cdd>> = (0..2 * n)
        .into_par_iter()
        .map(|p| {
            let mut c = vec![Cdd::ZERO; n];
            let half = (n / 2) as i64;
            for delta in -half..half {
                if (delta - p as i64).rem_euclid(2) != 0 {
                    continue;
                }
                let i = ((p as i64 + delta) / 2).rem_euclid(n as i64) as usize;
                let k = ((p as i64 - delta) / 2).rem_euclid(n as i64) as usize;
                c[delta.rem_euclid(n as i64) as usize] = gd[i] * gd[k].conj();
            }
            fft.process(&mut c, false);
            c.iter().map(|v| v.scale(2.0 * dx).neg_if(p % 2 == 1)).collect()
        })
        .collect();
    rows.concat()
}

/// STFT route: `entry(lambda, mu) = e^{-pi i (lambda_2 + mu_2) d_1}
/// V_Phi sigma((lambda + mu)/2, j(lambda - mu))` with `d = lambda - mu`
/// wrapped and `Phi` the discrete Wigner window of `g`. For each retained
/// difference the STFT is only needed on the coset of midpoints, so the
/// spectrum is folded onto the lattice and transformed at lattice size.
pub fn gabor_matrix_stft(sigma: &SymbolField, sys: &GaborSystem, opts: &MatrixOptions) -> Result<GaborMatrix> {
    check_inputs(sigma, sys)?;
    let lat = &sys.lattice;
    let n = lat.grid.n_points;
    let n2 = 2 * n;
    let (a, b) = (lat.time_step() as i64, lat.freq_step() as i64);
    let (lt, lf) = (lat.time_count(), lat.freq_count());
    let l = lat.len();
    let retained = retention_mask(lat, opts);

    let mut groups: BTreeMap<(i64, i64), Vec<(usize, usize)>> = BTreeMap::new();
    for row in 0..l {
        for col in 0..l {
            if retained[row * l + col] {
                let d = wrapped_difference(lat, lat.points()[row], lat.points()[col]);
                groups.entry(d).or_default().push((row, col));
            }
        }
    }
    if groups.keys().any(|&(_, dn)| (dn * b) % 2 != 0) {
        return Err(Error::OffGridMidpoint);
    }

    let mut sig_hat: Vec<Cdd> = sigma.values.iter().map(|&v| Cdd::from_c64(v)).collect();
    fft2(&mut sig_hat, n2, n, false);
    let mut phi_hat = wigner_window(&sys.window);
    fft2(&mut phi_hat, n2, n, false);
    let phi_hat: Vec<Cdd> = phi_hat.iter().map(|v| v.conj()).collect();
    let roots2 = roots_of_unity(n2);
    // dA / (2N N) with dA = dx/2 * dxi = 1/(2N)
    let scale = 1.0 / (4.0 * (n as f64).powi(3));

    let results: Vec<Vec<(usize, usize, Complex64)>> = groups
        .par_iter()
        .map(|(&(dm, dn), pairs)| {
            let k1 = dn * b;
            let k2 = -dm * a;
            let p0 = (a * dm.rem_euclid(2)) as usize;
            let h = dn * b / 2;
            let q0 = h.rem_euclid(b) as usize;
            let mut fold = vec![Cdd::ZERO; lt * lf];
            for u1 in 0..n2 {
                let s_row = (u1 as i64 + k1).rem_euclid(n2 as i64) as usize * n;
                let ph_base = u1 * p0;
                for u2 in 0..n {
                    let su = sig_hat[s_row + (u2 as i64 + k2).rem_euclid(n as i64) as usize];
                    let prod = su * phi_hat[u1 * n + u2];
                    let e = (ph_base + 2 * u2 * q0) % n2;
                    fold[(u1 % lt) * lf + (u2 % lf)] += prod * roots2[e].conj();
                }
            }
            fft2(&mut fold, lt, lf, true);
            let sign = if (k1 + k2).rem_euclid(2) == 1 { -scale } else { scale };
            pairs
                .iter()
                .map(|&(row, col)| {
                    let mu = lat.points()[col];
                    let r = (mu.m + dm.div_euclid(2)).rem_euclid(lt as i64) as usize;
                    let t = (mu.n + h.div_euclid(b)).rem_euclid(lf as i64) as usize;
                    let x = (2 * mu.n + dn) * a * b * dm;
                    let phase = roots2[x.rem_euclid(n2 as i64) as usize];
                    (row, col, (phase * fold[r * lf + t]).scale(sign).to_c64())
                })
                .collect()
        })
        .collect();

    let mut values = vec![Complex64::new(0.0, 0.0); l * l];
    for (row, col, v) in results.into_iter().flatten() {
        values[row * l + col] = v;
    }
    Ok(GaborMatrix::assemble(lat, Route::Stft, &sys.window.label, &sigma.label, values, retained))
}

pub fn gabor_matrix(sigma: &SymbolField, sys: &GaborSystem, route: Route, opts: &MatrixOptions) -> Result<GaborMatrix> {
    match route {
        Route::Direct => gabor_matrix_direct(sigma, sys, opts),
        Route::Stft => gabor_matrix_stft(sigma, sys, opts),
        Route::Synthetic => Err(Error::BadParams("synthetic matrices are built with GaborMatrix::synthetic".into())),
    }
}

/// `V_Phi sigma(u, v)` on the full symbol grid of `u`, for frequency offsets
/// `v = (k1 dxi, k2 dx)`, with `Phi` the discrete Wigner window of `g`.
pub struct SymbolStft {
    n: usize,
    dx: f64,
    dxi: f64,
    sig_hat: Vec<Complex64>,
    phi_hat_conj: Vec<Complex64>,
}

impl SymbolStft {
    pub fn new(sigma: &SymbolField, window: &Signal) -> Result<Self> {
        if sigma.grid != window.grid {
            return Err(Error::GridMismatch);
        }
        let n = sigma.grid.n_points;
        let mut sh: Vec<Cdd> = sigma.values.iter().map(|&v| Cdd::from_c64(v)).collect();
        fft2(&mut sh, 2 * n, n, false);
        let mut ph = wigner_window(window);
        fft2(&mut ph, 2 * n, n, false);
        Ok(SymbolStft {
            n,
            dx: sigma.grid.spacing(),
            dxi: sigma.grid.freq_spacing(),
            sig_hat: sh.iter().map(|v| v.to_c64()).collect(),
            phi_hat_conj: ph.iter().map(|v| v.to_c64().conj()).collect(),
        })
    }

    pub fn v_point(&self, k1: i64, k2: i64) -> PhasePoint {
        PhasePoint::new(k1 as f64 * self.dxi, k2 as f64 * self.dx)
    }

    /// Position `u` of slice element `(p, q)`, wrapped into the centred period.
    pub fn u_point(&self, p: usize, q: usize) -> PhasePoint {
        let n = self.n as i64;
        let pw = (p as i64 + n).rem_euclid(2 * n) - n;
        let qw = (q as i64 + n / 2).rem_euclid(n) - n / 2;
        PhasePoint::new(pw as f64 * self.dx / 2.0, qw as f64 * self.dxi)
    }

    /// Row-major `2N x N` array; element `(p, q)` is at `u = (p dx/2, q dxi)`.
    pub fn slice(&self, k1: i64, k2: i64) -> Vec<Complex64> {
        let n = self.n;
        let n2 = 2 * n;
        let mut data: Vec<Complex64> = (0..n2 * n)
            .map(|i| {
                let (u1, u2) = (i / n, i % n);
                let s = self.sig_hat[(u1 as i64 + k1).rem_euclid(n2 as i64) as usize * n
                    + (u2 as i64 + k2).rem_euclid(n as i64) as usize];
                s * self.phi_hat_conj[i]
            })
            .collect();
        let mut planner = FftPlanner::new();
        let row_fft = planner.plan_fft_inverse(n);
        for row in data.chunks_mut(n) {
            row_fft.process(row);
        }
        let col_fft = planner.plan_fft_inverse(n2);
        let mut col = vec![Complex64::new(0.0, 0.0); n2];
        for c in 0..n {
            for r in 0..n2 {
                col[r] = data[r * n + c];
            }
            col_fft.process(&mut col);
            for r in 0..n2 {
                data[r * n + c] = col[r];
            }
        }
        let sign = if (k1 + k2).rem_euclid(2) == 1 { -1.0 } else { 1.0 };
        let scale = sign / (4.0 * (n as f64).powi(3));
        data.iter_mut().for_each(|v| *v *= scale);
        data
    }
}

#[cfg(test)]
mod tests {
    use super::super::{build_symbol, rotate_j, SymbolSpec};
    use super::*;
    use crate::grid::Grid;

    fn system(n: usize) -> GaborSystem {
        let grid = Grid::new(8.0, n).unwrap();
        let lat = Lattice::new(grid, 0.5, 0.5, None).unwrap();
        GaborSystem::new(Signal::gaussian(grid), lat).unwrap()
    }

    #[test]
    fn wigner_window_at_origin() {
        let sys = system(128);
        let phi = wigner_window(&sys.window);
        // origin is row N of the half-step grid, column N/2
        let v = phi[128 * 128 + 64].to_c64();
        assert!((v.re - 2.0).abs() < 1e-12 && v.im.abs() < 1e-12);
    }

    #[test]
    fn constant_symbol_gives_gram_matrix() {
        let sys = system(64);
        let sigma = build_symbol(&SymbolSpec::Constant { value: 1.0 }, sys.grid()).unwrap();
        let m = gabor_matrix_direct(&sigma, &sys, &MatrixOptions::default()).unwrap();
        for (r, c, v) in m.entries().step_by(97) {
            let pts = sys.lattice.points();
            let gram = sys.atom(&sys.window, pts[c]).inner(&sys.atom(&sys.window, pts[r])).unwrap();
            assert!((v - gram).norm() < 1e-13);
        }
    }

    #[test]
    fn routes_agree_small() {
        let sys = system(64);
        let sigma = build_symbol(&SymbolSpec::Gaussian { width: 1.0 }, sys.grid()).unwrap();
        let d = gabor_matrix_direct(&sigma, &sys, &MatrixOptions::default()).unwrap();
        let s = gabor_matrix_stft(&sigma, &sys, &MatrixOptions::default()).unwrap();
        let cmp = compare_routes(&d, &s).unwrap();
        assert!(cmp.max_rel_discrepancy < 1e-6, "{cmp:?}");
        assert!(cmp.max_abs_complex_discrepancy < 1e-14, "{cmp:?}");
    }

    #[test]
    fn real_symbol_gives_hermitian_matrix() {
        let sys = system(64);
        let sigma = build_symbol(&SymbolSpec::Cauchy { width: 1.0 }, sys.grid()).unwrap();
        let m = gabor_matrix_stft(&sigma, &sys, &MatrixOptions::default()).unwrap();
        for (r, c, v) in m.entries() {
            assert!((v - m.get(c, r).unwrap().conj()).norm() < 1e-10);
        }
    }

    #[test]
    fn entries_read_back_symbol_stft() {
        let sys = system(64);
        let sigma = build_symbol(&SymbolSpec::Sine { omega_x: 0.25, omega_xi: 0.25 }, sys.grid()).unwrap();
        let m = gabor_matrix_stft(&sigma, &sys, &MatrixOptions::default()).unwrap();
        let vs = SymbolStft::new(&sigma, &sys.window).unwrap();
        let lat = &sys.lattice;
        let n = 64usize;
        for (r, c, v) in m.entries().step_by(53) {
            let d = m.difference_point(r, c);
            let jv = rotate_j(d);
            let k1 = (jv.x / sys.grid().freq_spacing()).round() as i64;
            let k2 = (jv.xi / sys.grid().spacing()).round() as i64;
            let mu = lat.phase_point(lat.points()[c]);
            let u = PhasePoint::new(mu.x + d.x / 2.0, mu.xi + d.xi / 2.0);
            let p = ((u.x / (sys.grid().spacing() / 2.0)).round() as i64).rem_euclid(2 * n as i64) as usize;
            let q = ((u.xi / sys.grid().freq_spacing()).round() as i64).rem_euclid(n as i64) as usize;
            let direct = vs.slice(k1, k2)[p * n + q];
            assert!((direct.norm() - v.norm()).abs() <= 1e-9 * v.norm().max(1e-6), "{direct} {v}");
        }
    }
}
