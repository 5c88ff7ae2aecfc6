use crate::error::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvolutionReport {
    pub s: f64,
    pub eps: f64,
    /// Exponent of the majorant `e^{-eps' |lambda|^{1/s}}`.
    pub majorant_eps: f64,
    pub alpha: f64,
    pub beta: f64,
    pub radius: f64,
    pub eval_radius: f64,
    pub max_ratio: f64,
    pub conv_at_origin: f64,
    pub tail_bound: f64,
}

/// `2 pi int_r0^inf t e^{-eps t^{1/s}} dt / (alpha beta)`, a bound on the lattice
/// sum of the weight outside the disc of radius `r0 + cell diagonal`.
fn tail_bound(s: f64, eps: f64, r0: f64, alpha: f64, beta: f64) -> f64 {
    let f = |t: f64| t * (-eps * t.powf(1.0 / s)).exp();
    let h = 1e-3;
    let mut acc = 0.0;
    let mut t = r0.max(0.0);
    loop {
        let v = h * (f(t) + 4.0 * f(t + h / 2.0) + f(t + h)) / 6.0;
        acc += v;
        t += h;
        if v < 1e-30 * acc.max(1e-300) || t > r0 + 1e4 {
            break;
        }
    }
    2.0 * std::f64::consts::PI * acc / (alpha * beta)
}

/// Discrete convolution `sum_nu w(lambda - nu) w(nu)` of `w = e^{-eps |.|^{1/s}}` over
/// lattice points `|nu| <= radius`, against the majorant `e^{-eps' |lambda|^{1/s}}`
/// (`eps' = eps` for `s >= 1`, `eps 2^{-1/s}` below), for `|lambda| <= eval_radius`.
pub fn weight_convolution_check(
    s: f64,
    eps: f64,
    alpha: f64,
    beta: f64,
    radius: f64,
    eval_radius: f64,
) -> Result<ConvolutionReport> {
    if !(s >= 0.5 && eps > 0.0 && alpha > 0.0 && beta > 0.0 && radius > 0.0) {
        return Err(Error::BadParams(format!(
            "need s >= 1/2 and positive eps, spacing and radius (s = {s}, eps = {eps}, alpha = {alpha}, beta = {beta}, radius = {radius})"
        )));
    }
    let tail = tail_bound(s, eps, radius - alpha.hypot(beta), alpha, beta);
    if tail > 1e-12 {
        return Err(Error::RadiusTooSmall(tail));
    }
    if !(eval_radius >= 0.0 && eval_radius <= radius) {
        return Err(Error::BadParams(format!("evaluation radius {eval_radius} must lie in [0, {radius}]")));
    }
    let majorant_eps = if s >= 1.0 { eps } else { eps * 2f64.powf(-1.0 / s) };
    let w = |m: i64, n: i64| (-eps * (m as f64 * alpha).hypot(n as f64 * beta).powf(1.0 / s)).exp();

    let mr = (radius / alpha).floor() as i64;
    let nr = (radius / beta).floor() as i64;
    let me = (eval_radius / alpha).floor() as i64;
    let ne = (eval_radius / beta).floor() as i64;
    // weight table over all index differences that can occur
    let (tm, tn) = (mr + me, nr + ne);
    let width = (2 * tn + 1) as usize;
    let table: Vec<f64> = (-tm..=tm).flat_map(|m| (-tn..=tn).map(move |n| w(m, n))).collect();
    let at = |m: i64, n: i64| table[(m + tm) as usize * width + (n + tn) as usize];

    let in_disc = |m: i64, n: i64, r: f64| (m as f64 * alpha).hypot(n as f64 * beta) <= r;
    let support: Vec<(i64, i64, f64)> = (-mr..=mr)
        .flat_map(|m| (-nr..=nr).map(move |n| (m, n)))
        .filter(|&(m, n)| in_disc(m, n, radius))
        .map(|(m, n)| (m, n, at(m, n)))
        .collect();
    let targets: Vec<(i64, i64)> = (-me..=me)
        .flat_map(|m| (-ne..=ne).map(move |n| (m, n)))
        .filter(|&(m, n)| in_disc(m, n, eval_radius))
        .collect();
    let ratios: Vec<(i64, i64, f64)> = targets
        .par_iter()
        .map(|&(lm, ln)| {
            let conv: f64 = support.iter().map(|&(m, n, wv)| at(lm - m, ln - n) * wv).sum();
            let r = (lm as f64 * alpha).hypot(ln as f64 * beta);
            (lm, ln, conv / (-majorant_eps * r.powf(1.0 / s)).exp())
        })
        .collect();
    let max_ratio = ratios.iter().map(|r| r.2).fold(0.0, f64::max);
    let conv_at_origin = support.iter().map(|&(_, _, wv)| wv * wv).sum();
    Ok(ConvolutionReport {
        s,
        eps,
        majorant_eps,
        alpha,
        beta,
        radius,
        eval_radius,
        max_ratio,
        conv_at_origin,
        tail_bound: tail,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn origin_term_and_majorant() {
        let rep = weight_convolution_check(0.5, 1.0, 0.5, 0.5, 10.0, 5.0).unwrap();
        assert_eq!(rep.majorant_eps, 0.25);
        assert!(rep.conv_at_origin >= 1.0);
        assert!(rep.max_ratio.is_finite() && rep.max_ratio >= rep.conv_at_origin);
    }

    #[test]
    fn small_radius_is_rejected() {
        assert!(matches!(weight_convolution_check(1.0, 1.0, 0.5, 0.5, 5.0, 2.0), Err(Error::RadiusTooSmall(_))));
    }
}
