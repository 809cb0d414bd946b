//! Value a Gaussian gamble in closed form and turn the value into a
//! certainty equivalent.
//!
//! ```text
//! cargo run --example closed_form_valuation
//! ```

use gaussian_cpt::prelude::*;

fn main() -> Result<()> {
    let w = WeightingParams::new(0.37, 0.61)?;
    let value = ValueParams::new(2.25, 2.25, 1.0, 1.0, 1.0, 1.0)?;
    let agent = CptAgent::new(value, w, w);

    println!(
        "{:>6} {:>6} {:>12} {:>12} {:>12} {:>12}",
        "mu", "sigma", "loss", "gain", "total", "CE"
    );
    for (mu, sigma) in [(0.5, 1.0), (0.0, 1.0), (1.0, 1.0), (0.5, 0.1), (0.5, 3.0), (-1.0, 2.0)] {
        let g = GaussianGamble::new(mu, sigma)?;
        let b = cpt_value(&agent, &g);
        let ce = certainty_equivalent(&agent, &g)?;
        println!(
            "{mu:>6.2} {sigma:>6.2} {:>12.6} {:>12.6} {:>12.6} {:>12.6}",
            b.loss_part, b.gain_part, b.total, ce
        );
    }

    // Under the distortion the gamble looks like two Gaussians with moved
    // means and inflated spread.
    let g = GaussianGamble::new(0.5, 1.0)?;
    let i = cpt_value(&agent, &g).intermediates;
    println!(
        "loss side sees N({:.6}, {:.6}^2), gain side sees N({:.6}, {:.6}^2)",
        i.loss_mean, i.loss_sd, i.gain_mean, i.gain_sd
    );

    // A sure reward bypasses the distortion.
    println!("sure reward of -1: {}", cpt_value_degenerate(&agent, -1.0));
    Ok(())
}
