//! Adoption when joining is more attractive the more others join: the fixed
//! point `q = Ψ(q)` of the social adoption map.
//!
//! ```text
//! cargo run --release --example social_equilibrium
//! ```

use std::path::Path;

use gaussian_cpt::population::scenario::load_scenario;
use gaussian_cpt::population::{adoption_fraction, equilibrium, psi};

fn main() -> gaussian_cpt::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios/town.json");
    let scn = load_scenario(&path)?;
    let program = scn.program.clone().expect("scenario fixes a program");

    println!("without social utility: q = {:.4}", adoption_fraction(&scn, &program)?);
    println!("{:>6} {:>8}", "q", "psi(q)");
    for i in 0..=10 {
        let q = i as f64 / 10.0;
        println!("{q:>6.2} {:>8.4}", psi(&scn, &program, q)?);
    }
    let eq = equilibrium(&scn, &program, 1e-10)?;
    println!(
        "fixed point q* = {:.6}, residual = {:.2e}, after {} evaluations",
        eq.q,
        eq.residual,
        eq.steps.len()
    );
    Ok(())
}
