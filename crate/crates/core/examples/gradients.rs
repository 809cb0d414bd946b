//! Analytic sensitivities of the valuation in all twelve parameters, next to
//! central finite differences.
//!
//! ```text
//! cargo run --example gradients
//! ```

use gaussian_cpt::prelude::*;
use gaussian_cpt::valuation::{cpt_gradient, CptGradient};

fn total(theta: &[f64; 12]) -> f64 {
    let [mu, sigma, p0m, gm, p0p, gp, mm, vm, am, mp, vp, ap] = *theta;
    let value = ValueParams::new_unchecked(SideShape::new(mm, vm, am), SideShape::new(mp, vp, ap));
    let agent = CptAgent::new(
        value,
        WeightingParams::new_unchecked(p0m, gm),
        WeightingParams::new_unchecked(p0p, gp),
    );
    cpt_value(&agent, &GaussianGamble::new(mu, sigma).unwrap()).total
}

fn main() -> Result<()> {
    let theta = [0.5, 1.0, 0.37, 0.61, 0.37, 0.61, 2.25, 2.25, 1.0, 1.0, 1.0, 1.0];
    let [mu, sigma, p0m, gm, p0p, gp, mm, vm, am, mp, vp, ap] = theta;
    let agent = CptAgent::new(
        ValueParams::new(mm, vm, am, mp, vp, ap)?,
        WeightingParams::new(p0m, gm)?,
        WeightingParams::new(p0p, gp)?,
    );
    let grad = cpt_gradient(&agent, &GaussianGamble::new(mu, sigma)?).to_array();

    println!("{:>12} {:>16} {:>16}", "parameter", "analytic", "finite diff");
    for (k, name) in CptGradient::NAMES.iter().enumerate() {
        let h = 1e-6 * theta[k].abs().max(1.0);
        let (mut up, mut down) = (theta, theta);
        up[k] += h;
        down[k] -= h;
        let fd = (total(&up) - total(&down)) / (2.0 * h);
        println!("{name:>12} {:>16.10} {fd:>16.10}", grad[k]);
    }
    Ok(())
}
