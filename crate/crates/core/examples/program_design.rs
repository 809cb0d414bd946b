//! Pick the program that maximizes the designer's gain over a small
//! population, by lattice search and by smoothed ascent.
//!
//! ```text
//! cargo run --release --example program_design
//! ```

use std::path::Path;

use gaussian_cpt::population::scenario::load_scenario;
use gaussian_cpt::population::{adoption_fraction, optimize_program, Method};

fn main() -> gaussian_cpt::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios/town.json");
    let scn = load_scenario(&path)?;
    for method in [Method::Grid, Method::Ascent] {
        let best = optimize_program(&scn, method, 200, 1)?;
        println!(
            "{method:?}: P* = {:.4?}, gain = {:.6}, adoption = {:.4}, evaluations = {}",
            best.program.controls(),
            best.gain,
            adoption_fraction(&scn, &best.program)?,
            best.trace.len()
        );
    }
    Ok(())
}
