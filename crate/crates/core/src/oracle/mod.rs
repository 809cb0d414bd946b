//! Reference valuations that do not use the closed form.
//!
//! [`quadrature_value`] integrates the value function against the densities
//! of the distorted loss and gain Gaussians numerically; [`monte_carlo_value`]
//! samples them. Neither touches the truncated-moment formulas in
//! [`crate::valuation`]; they share only the normal primitives, the value
//! function itself, and the weighting module's stabilization transform.

pub mod quadrature;

use crate::error::{CptError, Result};
use crate::normal;
use crate::rng;
use crate::valuation::CptAgent;
use crate::value::GaussianGamble;

/// Half-width of the integration window, in distorted standard deviations.
pub const TRUNCATION_SDS: f64 = 12.0;

const MAX_INTERVALS: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    abs_tol: f64,
    mc_samples: usize,
    seed: u64,
}

impl OracleConfig {
    pub fn new(abs_tol: f64, mc_samples: usize, seed: u64) -> Result<Self> {
        if !(abs_tol >= 1e-12) {
            return Err(CptError::constraint(
                "abs_tol >= 1e-12",
                format!("got abs_tol = {abs_tol}"),
            ));
        }
        if mc_samples < 1 {
            return Err(CptError::constraint("mc_samples >= 1", "got 0 samples"));
        }
        Ok(OracleConfig {
            abs_tol,
            mc_samples,
            seed,
        })
    }

    pub fn abs_tol(&self) -> f64 {
        self.abs_tol
    }

    pub fn mc_samples(&self) -> usize {
        self.mc_samples
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn with_abs_tol(self, abs_tol: f64) -> Result<Self> {
        Self::new(abs_tol, self.mc_samples, self.seed)
    }

    pub fn with_samples(self, mc_samples: usize, seed: u64) -> Result<Self> {
        Self::new(self.abs_tol, mc_samples, seed)
    }
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            abs_tol: 1e-10,
            mc_samples: 1_000_000,
            seed: rng::DEFAULT_SEED,
        }
    }
}

/// Loss and gain integrals, each computed to half the configured tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureParts {
    pub loss_part: f64,
    pub gain_part: f64,
    pub error: f64,
}

impl QuadratureParts {
    pub fn total(&self) -> f64 {
        self.loss_part + self.gain_part
    }
}

/// `∫_{-∞}^0 v(r) f⁻(r) dr + ∫_0^∞ v(r) f⁺(r) dr` by adaptive quadrature,
/// in the standardized variable `r = mean + sd·t`, `|t| ≤ 12`.
pub fn quadrature_parts(agent: &CptAgent, g: &GaussianGamble, cfg: &OracleConfig) -> Result<QuadratureParts> {
    let lo = agent.w_minus.stabilize_cdf(g);
    let hi = agent.w_plus.stabilize_tail(g);
    let v = &agent.value;
    let tol = 0.5 * cfg.abs_tol;

    // loss side: r ≤ 0  ⇔  t ≤ -mean/sd
    let loss_upper = (-lo.mean / lo.sd).min(TRUNCATION_SDS);
    let loss = if loss_upper > -TRUNCATION_SDS {
        quadrature::integrate(
            |t| v.value((lo.mean + lo.sd * t).min(0.0)) * normal::pdf(t),
            -TRUNCATION_SDS,
            loss_upper,
            tol,
            MAX_INTERVALS,
        )?
    } else {
        quadrature::Integral {
            value: 0.0,
            error: 0.0,
            intervals: 0,
        }
    };

    let gain_lower = (-hi.mean / hi.sd).max(-TRUNCATION_SDS);
    let gain = if gain_lower < TRUNCATION_SDS {
        quadrature::integrate(
            |t| v.value((hi.mean + hi.sd * t).max(0.0)) * normal::pdf(t),
            gain_lower,
            TRUNCATION_SDS,
            tol,
            MAX_INTERVALS,
        )?
    } else {
        quadrature::Integral {
            value: 0.0,
            error: 0.0,
            intervals: 0,
        }
    };

    Ok(QuadratureParts {
        loss_part: loss.value,
        gain_part: gain.value,
        error: loss.error + gain.error,
    })
}

/// Total valuation by adaptive quadrature.
pub fn quadrature_value(agent: &CptAgent, g: &GaussianGamble, cfg: &OracleConfig) -> Result<f64> {
    quadrature_parts(agent, g, cfg).map(|p| p.total())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
}

/// Monte Carlo valuation: averages `v(z⁻)1{z⁻ ≤ 0} + v(z⁺)1{z⁺ ≥ 0}` over
/// independent draws from the distorted loss and gain Gaussians.
/// Deterministic in `cfg.seed`.
pub fn monte_carlo_value(agent: &CptAgent, g: &GaussianGamble, cfg: &OracleConfig) -> McEstimate {
    let lo = agent.w_minus.stabilize_cdf(g);
    let hi = agent.w_plus.stabilize_tail(g);
    let v = &agent.value;
    let mut stream = rng::stream(cfg.seed);

    // Welford
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for i in 0..cfg.mc_samples {
        let z_loss = lo.mean + lo.sd * rng::standard_normal(&mut stream);
        let z_gain = hi.mean + hi.sd * rng::standard_normal(&mut stream);
        let mut x = 0.0;
        if z_loss <= 0.0 {
            x += v.value(z_loss);
        }
        if z_gain >= 0.0 {
            x += v.value(z_gain);
        }
        let delta = x - mean;
        mean += delta / (i + 1) as f64;
        m2 += delta * (x - mean);
    }
    let n = cfg.mc_samples as f64;
    let variance = if cfg.mc_samples > 1 { m2 / (n - 1.0) } else { 0.0 };
    McEstimate {
        estimate: mean,
        std_error: (variance / n).sqrt(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::valuation::cpt_value;
    use crate::value::SideShape;
    use crate::weighting::WeightingParams;

    #[test]
    fn risk_neutral_quadrature_is_the_mean() {
        let agent = CptAgent::risk_neutral(1.0).unwrap();
        let g = GaussianGamble::new(1.0, 1.0).unwrap();
        let cfg = OracleConfig::default();
        assert!((quadrature_value(&agent, &g, &cfg).unwrap() - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn mirrored_quadrature_vanishes_at_zero_mean() {
        let agent = CptAgent::mirrored(SideShape::new(0.7, 1.1, 0.3), WeightingParams::new(0.6, 0.5).unwrap());
        let g = GaussianGamble::new(0.0, 1.3).unwrap();
        let cfg = OracleConfig::default();
        assert!(quadrature_value(&agent, &g, &cfg).unwrap().abs() <= 1e-10);
    }

    #[test]
    fn quadrature_agrees_with_closed_form_on_a_heavy_distortion() {
        let w = WeightingParams::new(0.06, 0.2).unwrap();
        let agent = CptAgent::new(
            crate::value::ValueParams::new(5.0, 5.0, 2.0, 4.0, 4.0, 1.0).unwrap(),
            w,
            w,
        );
        let g = GaussianGamble::new(-4.5, 4.9).unwrap();
        let q = quadrature_value(&agent, &g, &OracleConfig::default()).unwrap();
        assert!((q - cpt_value(&agent, &g).total).abs() <= 1e-8);
    }

    #[test]
    fn monte_carlo_is_deterministic_and_centered() {
        let agent = CptAgent::risk_neutral(1.0).unwrap();
        let g = GaussianGamble::new(0.0, 1.0).unwrap();
        let cfg = OracleConfig::new(1e-10, 100_000, 42).unwrap();
        let a = monte_carlo_value(&agent, &g, &cfg);
        let b = monte_carlo_value(&agent, &g, &cfg);
        assert_eq!(a, b);
        assert!(a.estimate.abs() <= 3.0 * a.std_error);
    }

    #[test]
    fn config_validation() {
        assert!(OracleConfig::new(1e-13, 1, 0).is_err());
        assert!(OracleConfig::new(1e-10, 0, 0).is_err());
        assert!(OracleConfig::new(f64::NAN, 10, 0).is_err());
    }
}
