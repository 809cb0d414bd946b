//! Frozen values from an independent high-precision integration of the
//! valuation integral (`tests/fixtures/generate.py`).

use gaussian_cpt::cli::AgentSpec;
use gaussian_cpt::normal::{cdf, pdf, Probability};
use gaussian_cpt::prelude::*;
use serde_json::Value;

fn fixtures() -> Value {
    serde_json::from_str(include_str!("fixtures/regression.json")).unwrap()
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

fn close(actual: f64, expected: f64, tol: f64) {
    assert!(
        (actual - expected).abs() <= tol * expected.abs().max(1.0),
        "{actual} vs {expected}"
    );
}

#[test]
fn normal_kernel() {
    let fx = &fixtures()["normal"];
    close(cdf(1.0), f(&fx["cdf_at_1"]), 2e-16);
    close(pdf(1.0), f(&fx["pdf_at_1"]), 2e-16);
}

#[test]
fn weighting_function() {
    let fx = &fixtures()["weighting"];
    let w = WeightingParams::new(f(&fx["p0"]), f(&fx["gamma"])).unwrap();
    close(
        w.distort(Probability::new(0.1).unwrap()).get(),
        f(&fx["w_at_0_1"]),
        1e-14,
    );
    close(
        w.derivative(Probability::new(0.25).unwrap()).unwrap(),
        f(&fx["w_prime_at_0_25"]),
        1e-14,
    );
}

#[test]
fn partial_expectations() {
    let fx = &fixtures()["partial_expectations"];
    let gain = &fx["gain"];
    let shape = SideShape::new(f(&gain["m"]), f(&gain["V"]), f(&gain["a"]));
    close(
        shape.partial_expectation(f(&gain["mean"]), f(&gain["sd"])),
        f(&gain["value"]),
        1e-13,
    );

    // loss side: E[v(Z) 1{Z ≤ 0}] = -G(-mean, sd) under the loss shape
    let loss = &fx["loss"];
    let shape = SideShape::new(f(&loss["m"]), f(&loss["V"]), f(&loss["a"]));
    let value = -shape.partial_expectation(-f(&loss["mean"]), f(&loss["sd"]));
    close(value, f(&loss["value"]), 1e-13);
}

fn fixture_case() -> (Value, CptAgent, GaussianGamble) {
    let fx = fixtures()["valuation"].clone();
    let agent = AgentSpec::parse(&fx["agent"].to_string()).unwrap();
    let g = GaussianGamble::new(f(&fx["mu"]), f(&fx["sigma"])).unwrap();
    (fx, agent, g)
}

#[test]
fn valuation_breakdown() {
    let (fx, agent, g) = fixture_case();
    let b = cpt_value(&agent, &g);
    close(b.total, f(&fx["total"]), 1e-13);
    close(b.loss_part, f(&fx["loss_part"]), 1e-13);
    close(b.gain_part, f(&fx["gain_part"]), 1e-13);
    assert_eq!(b.total, b.loss_part + b.gain_part);
}

#[test]
fn certainty_equivalent_round_trips() {
    let (fx, agent, g) = fixture_case();
    let ce = certainty_equivalent(&agent, &g).unwrap();
    close(ce, f(&fx["certainty_equivalent"]), 1e-12);
    close(agent.value.value(ce), cpt_value(&agent, &g).total, 1e-12);
}

#[test]
fn gradient() {
    let (fx, agent, g) = fixture_case();
    let grad = cpt_gradient(&agent, &g).to_array();
    for (name, value) in gaussian_cpt::valuation::CptGradient::NAMES.iter().zip(grad) {
        close(value, f(&fx["gradient"][name]), 1e-12);
    }
}
