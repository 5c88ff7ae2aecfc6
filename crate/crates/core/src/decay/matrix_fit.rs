use super::{fit_decay_points, DecayFit, DecayFitOptions};
use crate::error::{Error, Result};
use crate::weyl::GaborMatrix;
use std::collections::BTreeMap;

/// Largest retained `|entry|` for each distinct distance `|lambda - mu|`,
/// sorted by distance.
pub fn decay_envelope(m: &GaborMatrix) -> Vec<(f64, f64)> {
    let mut env: BTreeMap<i64, (f64, f64)> = BTreeMap::new();
    for (r, c, v) in m.entries() {
        let d = m.difference_point(r, c).norm();
        let e = env.entry((d * 1e9).round() as i64).or_insert((d, 0.0));
        e.1 = e.1.max(v.norm());
    }
    env.into_values().collect()
}

/// Regress `log|entry|` on `|lambda - mu|^{1/s}` over the distance envelope.
pub fn fit_matrix_decay(m: &GaborMatrix, s: f64, opts: &DecayFitOptions) -> Result<DecayFit> {
    fit_decay_points(&decay_envelope(m), s, opts)
}

/// The candidate with the smallest max residual; among candidates within 5%
/// of that residual the smallest `s` wins.
pub fn estimate_s(m: &GaborMatrix, candidates: &[f64], opts: &DecayFitOptions) -> Result<(f64, DecayFit)> {
    if candidates.is_empty() {
        return Err(Error::BadParams("s candidates must be nonempty".into()));
    }
    let env = decay_envelope(m);
    let mut fits = candidates
        .iter()
        .map(|&s| fit_decay_points(&env, s, opts).map(|f| (s, f)))
        .collect::<Result<Vec<_>>>()?;
    fits.sort_by(|a, b| a.0.total_cmp(&b.0));
    let best = fits.iter().map(|f| f.1.max_residual).fold(f64::INFINITY, f64::min);
    let cutoff = best + 0.05 * best.abs();
    Ok(fits.into_iter().find(|f| f.1.max_residual <= cutoff).expect("best candidate is within cutoff"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decay::WeightParams;
    use crate::frames::Lattice;
    use crate::grid::Grid;
    use crate::weyl::MatrixOptions;

    fn lattice() -> Lattice {
        Lattice::new(Grid::new(8.0, 128).unwrap(), 0.5, 0.5, None).unwrap()
    }

    #[test]
    fn synthetic_exponential_is_recovered() {
        let w = WeightParams::new(1.0, -2.0, 1.0).unwrap();
        let m = GaborMatrix::synthetic(&lattice(), &w, &MatrixOptions::default());
        let opts = DecayFitOptions { noise_floor: 0.0, min_decades: 1.0, ..Default::default() };
        let fit = fit_matrix_decay(&m, 1.0, &opts).unwrap();
        assert!((fit.params.eps - 2.0).abs() < 1e-9);
        assert!((fit.params.c - 1.0).abs() < 1e-9);
        assert!((fit.r_squared - 1.0).abs() < 1e-9);
    }

    #[test]
    fn synthetic_gaussian_selects_half() {
        let w = WeightParams::new(0.5, -1.0, 1.0).unwrap();
        let m = GaborMatrix::synthetic(&lattice(), &w, &MatrixOptions::default());
        let opts = DecayFitOptions { min_decades: 1.0, ..Default::default() };
        let (s, _) = estimate_s(&m, &[0.5, 1.0, 2.0], &opts).unwrap();
        assert_eq!(s, 0.5);
        assert!(estimate_s(&m, &[], &opts).is_err());
    }
}
