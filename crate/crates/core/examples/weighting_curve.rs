//! Inverse-S probability weighting: the curve, its crossover and its
//! inflection point, for a few curvatures.
//!
//! ```text
//! cargo run --example weighting_curve
//! ```

use gaussian_cpt::prelude::*;

fn main() -> Result<()> {
    let p0 = 0.37;
    for gamma in [0.3, 0.61, 1.0] {
        let w = WeightingParams::new(p0, gamma)?;
        let (crossover, slope) = w.crossover_slope();
        println!("p0 = {p0}, gamma = {gamma}");
        println!(
            "  crossover w({}) = {}, slope there = {slope}",
            crossover.get(),
            w.distort(crossover).get()
        );
        match w.inflection_point() {
            Ok(p) => println!("  concave below, convex above p* = {:.6}", p.get()),
            Err(e) => println!("  {e}"),
        }
        println!("  {:>6} {:>10} {:>10}", "p", "w(p)", "w'(p)");
        for i in 0..=10 {
            let p = Probability::new(i as f64 / 10.0)?;
            let slope = w.derivative(p).map_or("-".to_string(), |d| format!("{d:.6}"));
            println!("  {:>6.2} {:>10.6} {:>10}", p.get(), w.distort(p).get(), slope);
        }
    }
    Ok(())
}
