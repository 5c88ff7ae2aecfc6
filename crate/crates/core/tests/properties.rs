use gabor_diag::decay::{factorial_exponential_check, fit_decay_points, lp_mechanism_on, weight, DecayFitOptions, WeightParams};
use gabor_diag::frames::{analysis, frame_bounds, hermite_functions, GaborSystem, Lattice};
use gabor_diag::io::{num, read_container, write_container};
use gabor_diag::tf::{stft, tf_shift, wigner};
use gabor_diag::weyl::{build_symbol, gabor_matrix, MatrixOptions, Route, SymbolSpec};
use gabor_diag::{Grid, PhasePoint, Signal};
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

fn grid(n: usize) -> Grid {
    Grid::new(8.0, n).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn stft_is_covariant(seed in 0u64..1000, a in -20i64..20, b in -20i64..20) {
        let n = 64;
        let g = grid(n);
        let f = Signal::random(g, seed);
        let w = Signal::gaussian(g);
        let z = PhasePoint::new(a as f64 * g.spacing(), b as f64 * g.freq_spacing());
        let v = stft(&f, &w).unwrap();
        let vs = stft(&tf_shift(&f, z).unwrap(), &w).unwrap();
        for j in 0..n {
            for l in 0..n {
                let js = (j as i64 - a).rem_euclid(n as i64) as usize;
                let ls = (l as i64 - b).rem_euclid(n as i64) as usize;
                prop_assert!((vs.get(j, l).norm() - v.get(js, ls).norm()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn moyal_orthogonality(s1 in 0u64..1000, s2 in 0u64..1000, k in 0usize..4) {
        let g = grid(64);
        let (f1, f2) = (Signal::random(g, s1), Signal::random(g, s2 + 1000));
        let hs = hermite_functions(g, 3).unwrap();
        let (w1, w2) = (&hs[0], &hs[k]);
        let v1 = stft(&f1, w1).unwrap();
        let v2 = stft(&f2, w2).unwrap();
        let lhs: Complex64 = v1.values.iter().zip(&v2.values).map(|(a, b)| a * b.conj()).sum::<Complex64>()
            * g.spacing() * g.freq_spacing();
        let rhs = f1.inner(&f2).unwrap() * w1.inner(w2).unwrap().conj();
        prop_assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn wigner_matches_reflected_stft(seed in 0u64..1000) {
        let n = 256;
        let g = grid(n);
        // localized away from the period boundary, where the lag sum wraps
        let mut f = Signal::random(g, seed);
        for (v, x) in f.values.iter_mut().zip(g.points()) {
            *v *= (-PI * x * x / 2.25).exp();
        }
        let w = Signal::gaussian(g);
        let wd = wigner(&f, &w).unwrap();
        let v = stft(&f, &w.reflected()).unwrap();
        for j in n / 4..3 * n / 4 {
            for l in n / 4..3 * n / 4 {
                let z = wd.point(j, l);
                let rhs = Complex64::from_polar(2.0, 4.0 * PI * z.x * z.xi) * v.get(2 * j - n / 2, 2 * l - n / 2);
                prop_assert!((wd.get(j, l) - rhs).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn frame_inequality_holds(seed in 0u64..10_000) {
        let g = grid(64);
        let sys = GaborSystem::new(Signal::gaussian(g), Lattice::new(g, 0.5, 0.5, None).unwrap()).unwrap();
        let b = frame_bounds(&sys).unwrap();
        let f = Signal::random(g, seed);
        let e = analysis(&sys, &f).unwrap().energy();
        let f2 = f.norm().powi(2);
        prop_assert!(e >= b.lower * f2 * (1.0 - 1e-9));
        prop_assert!(e <= b.upper * f2 * (1.0 + 1e-9));
    }

    #[test]
    fn real_symbol_gives_hermitian_matrix(width in 0.5f64..3.0, cauchy in any::<bool>()) {
        let g = grid(32);
        let sys = GaborSystem::new(Signal::gaussian(g), Lattice::new(g, 0.5, 0.5, None).unwrap()).unwrap();
        let spec = if cauchy { SymbolSpec::Cauchy { width } } else { SymbolSpec::Gaussian { width } };
        let m = gabor_matrix(&build_symbol(&spec, g).unwrap(), &sys, Route::Stft, &MatrixOptions::default()).unwrap();
        let scale = m.max_entry();
        for (r, c, v) in m.entries() {
            if let Some(t) = m.get(c, r) {
                prop_assert!((v - t.conj()).norm() <= 1e-14 * scale);
            }
        }
    }

    #[test]
    fn growing_weight_is_submultiplicative(
        s in 1.0f64..4.0, eps in 0.01f64..2.0,
        x1 in -10.0f64..10.0, y1 in -10.0f64..10.0, x2 in -10.0f64..10.0, y2 in -10.0f64..10.0,
    ) {
        let w = WeightParams::new(s, eps, 1.0).unwrap();
        let (a, b) = (PhasePoint::new(x1, y1), PhasePoint::new(x2, y2));
        let sum = PhasePoint::new(x1 + x2, y1 + y2);
        // compare exponents to avoid overflow
        prop_assert!(weight(sum, &w).ln() <= weight(a, &w).ln() + weight(b, &w).ln() + 1e-9);
    }

    #[test]
    fn sorted_entries_obey_lp_bound(mags in prop::collection::vec(0.0f64..10.0, 1..200)) {
        let mut col = mags;
        col.sort_by(|a, b| b.total_cmp(a));
        let ps: Vec<f64> = (1..=8).map(|k| 1.0 / k as f64).collect();
        prop_assert!(lp_mechanism_on(&[col], &ps).pass);
    }

    #[test]
    fn decay_fit_recovers_exact_model(s in 0.5f64..3.0, eps in 0.05f64..2.0, c in 0.1f64..10.0) {
        let pts: Vec<(f64, f64)> = (0..60)
            .map(|i| 0.25 * i as f64)
            .map(|r| (r, c * (-eps * r.powf(1.0 / s)).exp()))
            .filter(|p| p.1 > 1e-300)
            .collect();
        let opts = DecayFitOptions { noise_floor: 0.0, min_decades: 0.0, ..Default::default() };
        let f = fit_decay_points(&pts, s, &opts).unwrap();
        prop_assert!((f.params.eps - eps).abs() <= 1e-9 * eps.max(1.0));
        prop_assert!((f.params.c - c).abs() <= 1e-9 * c);
    }

    #[test]
    fn exponential_decay_gives_unit_factorial_prefactor(r in 0.5f64..3.0, eps in 0.3f64..3.0) {
        let xs: Vec<f64> = (0..=2000).map(|i| -50.0 + 0.05 * i as f64).collect();
        let h: Vec<f64> = xs.iter().map(|x| (-eps * x.abs().powf(1.0 / r)).exp()).collect();
        let rep = factorial_exponential_check(&xs, &h, r, eps, 8).unwrap();
        prop_assert!(rep.prefactor <= 1.0 + 1e-9, "K = {}", rep.prefactor);
    }

    #[test]
    fn numbers_round_trip_through_text(v in any::<f64>().prop_filter("finite", |v| v.is_finite())) {
        prop_assert_eq!(num(v).parse::<f64>().unwrap(), v);
    }

    #[test]
    fn container_round_trips(data in prop::collection::vec((any::<f64>(), any::<f64>()), 0..64)) {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.bin");
        let values: Vec<Complex64> = data.iter().map(|&(a, b)| Complex64::new(a, b)).collect();
        write_container(&p, &serde_json::json!({ "len": values.len() }), &values).unwrap();
        let (_, back) = read_container(&p).unwrap();
        prop_assert_eq!(back.len(), values.len());
        for (a, b) in back.iter().zip(&values) {
            prop_assert_eq!(a.re.to_bits(), b.re.to_bits());
            prop_assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
    }
}

#[test]
fn half_class_weight_is_not_submultiplicative() {
    let w = WeightParams::new(0.5, 1.0, 1.0).unwrap();
    let z = PhasePoint::new(1.0, 0.0);
    let twice = PhasePoint::new(2.0, 0.0);
    // e^{4} > e^{1} e^{1}
    assert!(weight(twice, &w) > weight(z, &w) * weight(z, &w));
}
