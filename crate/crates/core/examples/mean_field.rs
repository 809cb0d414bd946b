//! Adoption under a personality distribution instead of a finite list: a
//! seeded Monte Carlo estimate of the adoption probability, and its
//! convergence in the number of draws.
//!
//! ```text
//! cargo run --release --example mean_field
//! ```

use std::path::Path;

use gaussian_cpt::population::mean_field_adoption;
use gaussian_cpt::population::scenario::load_scenario;

fn main() -> gaussian_cpt::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios/mean_field.json");
    let scn = load_scenario(&path)?;
    let program = scn.program.clone().expect("scenario fixes a program");
    println!("{:>9} {:>10} {:>10}", "draws", "adoption", "std err");
    for samples in [1_000, 10_000, 100_000, 1_000_000] {
        let q = mean_field_adoption(&scn, &program, samples, 11)?;
        println!("{samples:>9} {:>10.5} {:>10.5}", q.estimate, q.std_error);
    }
    Ok(())
}
