//! Pluggable pieces of a scenario: parameter maps, gain functions, social
//! utilities and personality samplers, with the built-in implementations.

use crate::error::{CptError, Result};
use crate::rng::{self, Stream};
use crate::valuation::CptAgent;
use crate::value::GaussianGamble;

use super::Personality;

/// Maps a personality and program controls to CPT parameters and the
/// perceived gamble.
pub trait ParameterMap: Send + Sync {
    fn name(&self) -> &str;
    fn feature_dim(&self) -> usize;
    fn program_dim(&self) -> usize;
    fn theta(&self, person: &Personality, program: &[f64]) -> Result<(CptAgent, GaussianGamble)>;

    /// `(∂μ/∂P, ∂σ/∂P)`, when the map is differentiable.
    fn gamble_jacobian(&self, _person: &Personality, _program: &[f64]) -> Option<(Vec<f64>, Vec<f64>)> {
        None
    }
}

/// `μ = α₀ + eᵀAP`, `σ = softplus(β₀ + eᵀBP)`, with `A`, `B` of shape
/// `d_e × d_p`. Individuals without their own agent use `default_agent`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineMap {
    pub alpha0: f64,
    pub a: Vec<Vec<f64>>,
    pub beta0: f64,
    pub b: Vec<Vec<f64>>,
    pub default_agent: CptAgent,
}

impl AffineMap {
    pub fn new(alpha0: f64, a: Vec<Vec<f64>>, beta0: f64, b: Vec<Vec<f64>>, default_agent: CptAgent) -> Result<Self> {
        let d_e = a.len();
        if d_e == 0 || a[0].is_empty() {
            return Err(CptError::Argument("matrix A must be nonempty".into()));
        }
        let d_p = a[0].len();
        for (name, m) in [("A", &a), ("B", &b)] {
            if m.len() != d_e {
                return Err(CptError::Argument(format!(
                    "matrix {name} has {} rows, expected {d_e}",
                    m.len()
                )));
            }
            for (i, row) in m.iter().enumerate() {
                if row.len() != d_p {
                    return Err(CptError::Argument(format!(
                        "row {i} of matrix {name} has {} entries, expected {d_p}",
                        row.len()
                    )));
                }
                if row.iter().any(|x| !x.is_finite()) {
                    return Err(CptError::Argument(format!(
                        "row {i} of matrix {name} has a non-finite entry"
                    )));
                }
            }
        }
        if !(alpha0.is_finite() && beta0.is_finite()) {
            return Err(CptError::Argument("alpha0 and beta0 must be finite".into()));
        }
        Ok(AffineMap {
            alpha0,
            a,
            beta0,
            b,
            default_agent,
        })
    }

    fn bilinear(m: &[Vec<f64>], e: &[f64], p: &[f64]) -> f64 {
        m.iter()
            .zip(e)
            .map(|(row, &ei)| ei * row.iter().zip(p).map(|(x, y)| x * y).sum::<f64>())
            .sum()
    }

    // eᵀM
    fn row_combination(m: &[Vec<f64>], e: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; m.first().map_or(0, Vec::len)];
        for (row, &ei) in m.iter().zip(e) {
            for (o, x) in out.iter_mut().zip(row) {
                *o += ei * x;
            }
        }
        out
    }

    fn sigma_link(&self, e: &[f64], p: &[f64]) -> f64 {
        self.beta0 + Self::bilinear(&self.b, e, p)
    }
}

/// `ln(1 + eˣ)`, floored at the smallest positive normal.
pub fn softplus(x: f64) -> f64 {
    let y = if x > 35.0 { x } else { x.exp().ln_1p() };
    y.max(f64::MIN_POSITIVE)
}

fn logistic(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

impl ParameterMap for AffineMap {
    fn name(&self) -> &str {
        "affine"
    }

    fn feature_dim(&self) -> usize {
        self.a.len()
    }

    fn program_dim(&self) -> usize {
        self.a[0].len()
    }

    fn theta(&self, person: &Personality, program: &[f64]) -> Result<(CptAgent, GaussianGamble)> {
        let e = &person.features;
        let mu = self.alpha0 + Self::bilinear(&self.a, e, program);
        let sigma = softplus(self.sigma_link(e, program));
        let gamble = GaussianGamble::new(mu, sigma)?;
        Ok((person.agent.unwrap_or(self.default_agent), gamble))
    }

    fn gamble_jacobian(&self, person: &Personality, program: &[f64]) -> Option<(Vec<f64>, Vec<f64>)> {
        let e = &person.features;
        let dmu = Self::row_combination(&self.a, e);
        let slope = logistic(self.sigma_link(e, program));
        let dsigma = Self::row_combination(&self.b, e)
            .into_iter()
            .map(|x| slope * x)
            .collect();
        Some((dmu, dsigma))
    }
}

/// The designer's gain `g(P, q)` from adoption fraction `q`.
pub trait GainFunction: Send + Sync {
    fn name(&self) -> &str;
    fn gain(&self, program: &[f64], q: f64) -> f64;
    fn d_dq(&self, program: &[f64], q: f64) -> f64;
    fn grad_program(&self, program: &[f64], q: f64) -> Vec<f64>;
}

/// `g(P, q) = q`.
#[derive(Debug, Clone, Copy, Default)]
pub struct IdentityGain;

impl GainFunction for IdentityGain {
    fn name(&self) -> &str {
        "identity"
    }
    fn gain(&self, _program: &[f64], q: f64) -> f64 {
        q
    }
    fn d_dq(&self, _program: &[f64], _q: f64) -> f64 {
        1.0
    }
    fn grad_program(&self, program: &[f64], _q: f64) -> Vec<f64> {
        vec![0.0; program.len()]
    }
}

/// `g(P, q) = q - c‖P‖²`.
#[derive(Debug, Clone, Copy)]
pub struct QuadraticCostGain {
    pub c: f64,
}

impl GainFunction for QuadraticCostGain {
    fn name(&self) -> &str {
        "quadratic_cost"
    }
    fn gain(&self, program: &[f64], q: f64) -> f64 {
        q - self.c * program.iter().map(|x| x * x).sum::<f64>()
    }
    fn d_dq(&self, _program: &[f64], _q: f64) -> f64 {
        1.0
    }
    fn grad_program(&self, program: &[f64], _q: f64) -> Vec<f64> {
        program.iter().map(|x| -2.0 * self.c * x).collect()
    }
}

/// Extra reward from the adoption fraction of others; must be
/// nondecreasing on `[0, 1]`.
pub trait SocialUtility: Send + Sync {
    fn name(&self) -> &str;
    fn utility(&self, q: f64) -> f64;
}

/// `u(q) = κq`, `κ ≥ 0`.
#[derive(Debug, Clone, Copy)]
pub struct LinearSocial {
    kappa: f64,
}

impl LinearSocial {
    pub fn new(kappa: f64) -> Result<Self> {
        if !(kappa.is_finite() && kappa >= 0.0) {
            return Err(CptError::constraint("kappa >= 0", format!("got kappa = {kappa}")));
        }
        Ok(LinearSocial { kappa })
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }
}

impl SocialUtility for LinearSocial {
    fn name(&self) -> &str {
        "linear"
    }
    fn utility(&self, q: f64) -> f64 {
        self.kappa * q
    }
}

/// Rejects a social utility that decreases anywhere on a 1001-point grid.
pub fn check_nondecreasing(u: &dyn SocialUtility) -> Result<()> {
    let mut prev = u.utility(0.0);
    for i in 1..=1000 {
        let q = i as f64 / 1000.0;
        let next = u.utility(q);
        if !next.is_finite() || next < prev {
            return Err(CptError::constraint(
                "social utility nondecreasing on [0,1]",
                format!("u({q}) = {next} after {prev}"),
            ));
        }
        prev = next;
    }
    Ok(())
}

/// Draws personalities for mean-field computations.
pub trait PersonalitySampler: Send + Sync {
    fn name(&self) -> &str;
    fn sample(&self, rng: &mut Stream) -> Result<Personality>;
}

/// Always returns the same personality.
#[derive(Debug, Clone)]
pub struct PointMassSampler {
    pub person: Personality,
}

impl PersonalitySampler for PointMassSampler {
    fn name(&self) -> &str {
        "point"
    }
    fn sample(&self, _rng: &mut Stream) -> Result<Personality> {
        Ok(self.person.clone())
    }
}

/// Independent Gaussian features, `eᵢ ~ Normal(meanᵢ, stdᵢ)`.
#[derive(Debug, Clone)]
pub struct DiagonalGaussianSampler {
    mean: Vec<f64>,
    std: Vec<f64>,
}

impl DiagonalGaussianSampler {
    pub fn new(mean: Vec<f64>, std: Vec<f64>) -> Result<Self> {
        if mean.len() != std.len() {
            return Err(CptError::Argument(format!(
                "sampler mean has {} entries but std has {}",
                mean.len(),
                std.len()
            )));
        }
        if mean.iter().any(|x| !x.is_finite()) || std.iter().any(|s| !(s.is_finite() && *s >= 0.0)) {
            return Err(CptError::Argument(
                "sampler mean must be finite and std nonnegative".into(),
            ));
        }
        Ok(DiagonalGaussianSampler { mean, std })
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }
}

impl PersonalitySampler for DiagonalGaussianSampler {
    fn name(&self) -> &str {
        "gaussian"
    }
    fn sample(&self, rng: &mut Stream) -> Result<Personality> {
        let features = self
            .mean
            .iter()
            .zip(&self.std)
            .map(|(m, s)| m + s * rng::standard_normal(rng))
            .collect();
        Ok(Personality::new(features))
    }
}
