//! Exponential decay `|h(x)| <= e^{-eps |x|^{1/r}}` against factorial power
//! bounds `|x^alpha h(x)| <= K C^alpha (alpha!)^r`, in both directions.
//!
//! Run with `cargo run --example factorial_check`.

use gabor_diag::decay::factorial_exponential_check;

fn main() -> gabor_diag::Result<()> {
    let xs: Vec<f64> = (0..=4000).map(|i| -40.0 + 0.02 * i as f64).collect();
    let cases: [(&str, f64, f64, fn(f64) -> f64); 3] = [
        ("e^{-|x|}", 1.0, 1.0, |x: f64| (-x.abs()).exp()),
        ("e^{-x^2}", 0.5, 1.0, |x: f64| (-x * x).exp()),
        ("e^{-sqrt|x|}", 2.0, 1.0, |x: f64| (-x.abs().sqrt()).exp()),
    ];
    for (name, r, eps, h) in cases {
        let hs: Vec<f64> = xs.iter().map(|&x| h(x)).collect();
        let rep = factorial_exponential_check(&xs, &hs, r, eps, 8)?;
        println!("{name}: r = {r}, C = {:.4}, K = {:.4}, pass = {}", rep.c, rep.prefactor, rep.pass);
        if let Some(c) = rep.converse {
            println!(
                "  back: C' = {:.4}, eps' = {:.4}, sup |h| e^(eps'|x|^(1/r)) on |x| <= {:.2} is {:.4}",
                c.c_prime, c.eps_prime, c.x_range, c.k_prime
            );
        }
    }
    Ok(())
}
