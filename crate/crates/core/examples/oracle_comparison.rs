//! Check the closed form against adaptive quadrature and Monte Carlo on
//! random agents and gambles.
//!
//! ```text
//! cargo run --release --example oracle_comparison
//! ```

use gaussian_cpt::oracle::{monte_carlo_value, quadrature_value, OracleConfig};
use gaussian_cpt::rng::DEFAULT_SEED;
use gaussian_cpt::sampling::{random_pairs, ParameterBox};
use gaussian_cpt::valuation::cpt_value;

fn main() -> gaussian_cpt::Result<()> {
    let cfg = OracleConfig::new(1e-10, 200_000, DEFAULT_SEED)?;
    let pairs = random_pairs(10, DEFAULT_SEED, &ParameterBox::default());
    println!(
        "{:>4} {:>14} {:>10} {:>14} {:>8}",
        "draw", "closed form", "|quad-cf|", "monte carlo", "z"
    );
    for (i, (agent, g)) in pairs.iter().enumerate() {
        let closed = cpt_value(agent, g).total;
        let quad = quadrature_value(agent, g, &cfg)?;
        // a fresh stream per draw keeps the Monte Carlo errors independent
        let mc = monte_carlo_value(agent, g, &cfg.with_samples(cfg.mc_samples(), DEFAULT_SEED + i as u64)?);
        let z = (mc.estimate - closed) / mc.std_error;
        println!(
            "{i:>4} {closed:>14.8} {:>10.2e} {:>14.8} {z:>8.3}",
            (quad - closed).abs(),
            mc.estimate
        );
    }
    Ok(())
}
