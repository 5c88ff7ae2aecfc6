//! Mixed `L^{p,q}` norms of the STFT, with and without a frequency weight.
//!
//! Run with `cargo run --example modulation_norm`.

use gabor_diag::decay::WeightParams;
use gabor_diag::tf::{modulation_norm, tf_shift, FreqWeight};
use gabor_diag::{Grid, PhasePoint, Signal};

fn main() -> gabor_diag::Result<()> {
    let grid = Grid::new(8.0, 128)?;
    let g = Signal::gaussian(grid);
    let f = Signal::random(grid, 2);
    println!("||V_g f||_(2,2) = {:.12}, ||f|| ||g|| = {:.12}", modulation_norm(&f, &g, 2.0, 2.0, &FreqWeight::Unit)?, f.norm() * g.norm());

    let sub = FreqWeight::Subexponential(WeightParams::new(1.0, 0.5, 1.0)?);
    let poly = FreqWeight::Polynomial { t: 2.0 };
    for xi in [0.0, 2.0, 4.0] {
        let h = tf_shift(&g, PhasePoint::new(1.0, xi))?;
        println!(
            "pi(1, {xi}) g: unweighted (1,1) {:.5}, (1 + |xi|)^2 {:.5}, e^(|xi|/2) {:.5}",
            modulation_norm(&h, &g, 1.0, 1.0, &FreqWeight::Unit)?,
            modulation_norm(&h, &g, 1.0, 1.0, &poly)?,
            modulation_norm(&h, &g, 1.0, 1.0, &sub)?
        );
    }
    Ok(())
}
