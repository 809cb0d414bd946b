//! Closed-form against quadrature throughput.
//!
//! ```text
//! cargo run --release --example benchmark -- 100000
//! ```

use gaussian_cpt::cli::bench;
use gaussian_cpt::rng::DEFAULT_SEED;

fn main() -> gaussian_cpt::Result<()> {
    let n = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(10_000);
    let r = bench(n, DEFAULT_SEED)?;
    println!("{n} valuations");
    println!(
        "  closed form: {:>10.3} s  {:>12.0} /s",
        r.closed_form_seconds,
        r.closed_form_per_second()
    );
    println!(
        "  quadrature:  {:>10.3} s  {:>12.0} /s",
        r.quadrature_seconds,
        r.quadrature_per_second()
    );
    println!("  speedup: {:.1}x", r.speedup());
    Ok(())
}
