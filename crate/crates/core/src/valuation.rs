//! Closed-form valuation of Gaussian gambles.
//!
//! The loss part is `E[v(Z⁻) 1{Z⁻ ≤ 0}]` with `Z⁻` the Gaussian whose
//! distribution function is `w⁻ ∘ F`; the gain part is `E[v(Z⁺) 1{Z⁺ ≥ 0}]`
//! with `Z⁺` the Gaussian whose tail is `w⁺ ∘ (1 - F)`. Both reduce to
//! three truncated Gaussian moments: `E[Z 1{Z ≥ 0}]`, `P(Z ≥ 0)` and
//! `E[e^{-aZ} 1{Z ≥ 0}]`. Atoms at zero carry no value since `v(0) = 0`.

use rayon::prelude::*;

use crate::error::{CptError, Result};
use crate::normal;
use crate::value::{positive_part_mean, truncated_exp_moment, GaussianGamble, SideShape, ValueParams};
use crate::weighting::WeightingParams;

/// Value function plus separate loss and gain weighting functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CptAgent {
    pub value: ValueParams,
    pub w_minus: WeightingParams,
    pub w_plus: WeightingParams,
}

impl CptAgent {
    pub fn new(value: ValueParams, w_minus: WeightingParams, w_plus: WeightingParams) -> Self {
        CptAgent { value, w_minus, w_plus }
    }

    /// Linear value `m x`, no distortion: values a gamble at `m μ`.
    pub fn risk_neutral(m: f64) -> Result<Self> {
        Ok(CptAgent::new(
            ValueParams::linear(m)?,
            WeightingParams::identity(),
            WeightingParams::identity(),
        ))
    }

    /// Both sides share `shape` and `w`; valuations are odd in `μ`.
    pub fn mirrored(shape: SideShape, w: WeightingParams) -> Self {
        CptAgent::new(ValueParams::new_unchecked(shape, shape), w, w)
    }
}

/// Distorted-Gaussian parameters used by the closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Intermediates {
    /// Mean of the loss Gaussian, `μ - σ(1/γ⁻ - 1)Φ⁻¹(p₀⁻)`.
    pub loss_mean: f64,
    pub loss_sd: f64,
    /// Mean of the gain Gaussian, `μ + σ(1/γ⁺ - 1)Φ⁻¹(p₀⁺)`.
    pub gain_mean: f64,
    pub gain_sd: f64,
    pub loss_x: f64,
    pub gain_x: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValuationBreakdown {
    pub total: f64,
    /// Always `<= 0`.
    pub loss_part: f64,
    /// Always `>= 0`.
    pub gain_part: f64,
    pub intermediates: Intermediates,
}

/// Closed-form valuation of `g` by `agent`.
pub fn cpt_value(agent: &CptAgent, g: &GaussianGamble) -> ValuationBreakdown {
    let lo = agent.w_minus.stabilize_cdf(g);
    let hi = agent.w_plus.stabilize_tail(g);
    let loss_part = agent.value.loss_partial_expectation(&lo);
    let gain_part = agent.value.gain_partial_expectation(&hi);
    ValuationBreakdown {
        total: loss_part + gain_part,
        loss_part,
        gain_part,
        intermediates: Intermediates {
            loss_mean: lo.mean,
            loss_sd: lo.sd,
            gain_mean: hi.mean,
            gain_sd: hi.sd,
            loss_x: lo.standardized_mean(),
            gain_x: hi.standardized_mean(),
        },
    }
}

/// Valuation of the sure reward `mu`. Distortion is irrelevant because
/// the distribution function is a step and `w(0) = 0`, `w(1) = 1`.
pub fn cpt_value_degenerate(agent: &CptAgent, mu: f64) -> f64 {
    agent.value.value(mu)
}

/// The sure amount valued the same as the gamble.
pub fn certainty_equivalent(agent: &CptAgent, g: &GaussianGamble) -> Result<f64> {
    agent.value.inverse(cpt_value(agent, g).total)
}

/// Partial derivatives of the total valuation.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CptGradient {
    pub mu: f64,
    pub sigma: f64,
    pub p0_minus: f64,
    pub gamma_minus: f64,
    pub p0_plus: f64,
    pub gamma_plus: f64,
    pub m_minus: f64,
    pub v_minus: f64,
    pub a_minus: f64,
    pub m_plus: f64,
    pub v_plus: f64,
    pub a_plus: f64,
}

impl CptGradient {
    /// Entry names, in [`CptGradient::to_array`] order.
    pub const NAMES: [&'static str; 12] = [
        "mu",
        "sigma",
        "p0_minus",
        "gamma_minus",
        "p0_plus",
        "gamma_plus",
        "m_minus",
        "V_minus",
        "a_minus",
        "m_plus",
        "V_plus",
        "a_plus",
    ];

    pub fn to_array(&self) -> [f64; 12] {
        [
            self.mu,
            self.sigma,
            self.p0_minus,
            self.gamma_minus,
            self.p0_plus,
            self.gamma_plus,
            self.m_minus,
            self.v_minus,
            self.a_minus,
            self.m_plus,
            self.v_plus,
            self.a_plus,
        ]
    }
}

/// Derivatives of `G(mean, sd) = E[shape(Z) 1{Z ≥ 0}]`.
struct SideGradient {
    mean: f64,
    sd: f64,
    slope: f64,
    offset: f64,
    rate: f64,
}

fn side_gradient(shape: &SideShape, mean: f64, sd: f64) -> SideGradient {
    let x = mean / sd;
    let mass = normal::cdf(x);
    let density = normal::pdf(x);
    let SideShape {
        slope: m,
        offset: v,
        rate: a,
    } = *shape;
    // k = E[e^{-aZ} 1{Z ≥ 0}]; its Gaussian factor satisfies
    // e^{-aμ + (aσ)²/2} n(x - aσ) = n(x), which keeps every term below finite.
    let k = truncated_exp_moment(a, mean, sd);
    SideGradient {
        mean: m * mass + v * a * k,
        sd: m * density + v * (a * density - a * a * sd * k),
        slope: positive_part_mean(mean, sd),
        offset: mass - k,
        rate: v * (sd * density + (mean - a * sd * sd) * k),
    }
}

/// Analytic gradient of the total valuation in all twelve parameters.
pub fn cpt_gradient(agent: &CptAgent, g: &GaussianGamble) -> CptGradient {
    let lo = agent.w_minus.stabilize_cdf(g);
    let hi = agent.w_plus.stabilize_tail(g);
    let sigma = g.sigma();

    // loss part L = -G⁻(-loss_mean, sd)
    let gl = side_gradient(agent.value.losses(), -lo.mean, lo.sd);
    let dl_dmean = gl.mean;
    let dl_dsd = -gl.sd;
    // gain part G⁺(gain_mean, sd)
    let gg = side_gradient(agent.value.gains(), hi.mean, hi.sd);

    let (gm, qm) = (agent.w_minus.gamma(), agent.w_minus.crossover_quantile());
    let (gp, qp) = (agent.w_plus.gamma(), agent.w_plus.crossover_quantile());
    let cm = 1.0 / gm - 1.0;
    let cp = 1.0 / gp - 1.0;

    // loss_mean = μ - σ cm qm, loss_sd = σ/gm
    // gain_mean = μ + σ cp qp, gain_sd = σ/gp
    let mu = dl_dmean + gg.mean;
    let d_sigma = dl_dmean * (-cm * qm) + dl_dsd / gm + gg.mean * (cp * qp) + gg.sd / gp;
    let dq_dp0 = |q: f64| 1.0 / normal::pdf(q);
    let p0_minus = dl_dmean * (-sigma * cm * dq_dp0(qm));
    let gamma_minus = dl_dmean * (sigma * qm / (gm * gm)) + dl_dsd * (-sigma / (gm * gm));
    let p0_plus = gg.mean * (sigma * cp * dq_dp0(qp));
    let gamma_plus = gg.mean * (-sigma * qp / (gp * gp)) + gg.sd * (-sigma / (gp * gp));

    CptGradient {
        mu,
        sigma: d_sigma,
        p0_minus,
        gamma_minus,
        p0_plus,
        gamma_plus,
        m_minus: -gl.slope,
        v_minus: -gl.offset,
        a_minus: -gl.rate,
        m_plus: gg.slope,
        v_plus: gg.offset,
        a_plus: gg.rate,
    }
}

/// Totals for paired agents and gambles, in input order. Elements are
/// evaluated in parallel; each is the same pure computation as
/// [`cpt_value`], so results are bit-identical to a sequential loop.
pub fn batch_value(agents: &[CptAgent], gambles: &[GaussianGamble]) -> Result<Vec<f64>> {
    if agents.len() != gambles.len() {
        return Err(CptError::Argument(format!(
            "batch length mismatch: {} agents, {} gambles",
            agents.len(),
            gambles.len()
        )));
    }
    Ok(agents
        .par_iter()
        .zip(gambles.par_iter())
        .map(|(a, g)| cpt_value(a, g).total)
        .collect())
}
