//! Normal distortion weighting functions
//! `w(p) = Φ(γ Φ⁻¹(p) + (1 - γ) Φ⁻¹(p₀))`.
//!
//! `p₀` is the crossover point (`w(p₀) = p₀`) and `γ` is the slope there.
//! Some formulations write the slope as `λ`; it is the same parameter.
//!
//! Composing `w` with a Gaussian distribution (or tail) function yields
//! another Gaussian distribution (tail) function, see
//! [`WeightingParams::stabilize_cdf`] and [`WeightingParams::stabilize_tail`].

use crate::error::{CptError, Result};
use crate::normal::{self, Probability};
use crate::value::GaussianGamble;

/// Crossover point `p₀ ∈ (0, 1)` and curvature `γ ∈ (0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightingParams {
    p0: f64,
    gamma: f64,
    /// Φ⁻¹(p₀)
    q0: f64,
}

impl WeightingParams {
    pub fn new(p0: f64, gamma: f64) -> Result<Self> {
        if !(p0 > 0.0 && p0 < 1.0) {
            return Err(CptError::constraint("0 < p0 < 1", format!("got p0 = {p0}")));
        }
        if !(gamma > 0.0 && gamma <= 1.0) {
            return Err(CptError::constraint("0 < gamma <= 1", format!("got gamma = {gamma}")));
        }
        Ok(Self::new_unchecked(p0, gamma))
    }

    /// Skips range validation. The formulas stay well defined for any
    /// `p0 ∈ (0,1)` and `gamma > 0`; finite-difference checks rely on this
    /// when they step across `gamma = 1`.
    pub fn new_unchecked(p0: f64, gamma: f64) -> Self {
        WeightingParams {
            p0,
            gamma,
            q0: normal::quantile(p0),
        }
    }

    /// The identity weighting function, crossing at one half.
    pub fn identity() -> Self {
        Self::new_unchecked(0.5, 1.0)
    }

    #[inline]
    pub fn p0(&self) -> f64 {
        self.p0
    }

    #[inline]
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Φ⁻¹(p₀).
    #[inline]
    pub fn crossover_quantile(&self) -> f64 {
        self.q0
    }

    #[inline]
    fn argument(&self, q: f64) -> f64 {
        self.gamma * q + (1.0 - self.gamma) * self.q0
    }

    /// `w(p)`. Exact at both endpoints and the identity when `γ = 1`.
    pub fn distort(&self, p: Probability) -> Probability {
        let p = p.get();
        if self.gamma == 1.0 || p == 0.0 || p == 1.0 {
            return Probability::saturating(p);
        }
        Probability::saturating(normal::cdf(self.argument(normal::quantile(p))))
    }

    /// `w'(p) = γ n(γΦ⁻¹(p) + (1-γ)Φ⁻¹(p₀)) / n(Φ⁻¹(p))` on the open interval.
    pub fn derivative(&self, p: Probability) -> Result<f64> {
        let p = p.get();
        if p <= 0.0 || p >= 1.0 {
            return Err(CptError::Domain {
                operation: "weighting derivative",
                argument: p,
            });
        }
        if self.gamma == 1.0 {
            return Ok(1.0);
        }
        let q = normal::quantile(p);
        let a = self.argument(q);
        // n(a)/n(q) = exp((q² - a²)/2)
        Ok(self.gamma * (0.5 * (q - a) * (q + a)).exp())
    }

    /// The unique point where `w''` changes sign:
    /// `p* = Φ(γ Φ⁻¹(p₀) / (1 + γ))`. Concave below, convex above.
    pub fn inflection_point(&self) -> Result<Probability> {
        if self.gamma >= 1.0 {
            return Err(CptError::NoInflection);
        }
        Ok(Probability::saturating(normal::cdf(
            self.gamma * self.q0 / (1.0 + self.gamma),
        )))
    }

    /// `(p₀, γ)`: the fixed point and the slope there.
    pub fn crossover_slope(&self) -> (Probability, f64) {
        (Probability::saturating(self.p0), self.gamma)
    }

    /// Gaussian image of `w ∘ F` for the gamble's distribution function `F`:
    /// mean `μ - σ(1/γ - 1)Φ⁻¹(p₀)`, deviation `σ/γ`.
    pub fn stabilize_cdf(&self, g: &GaussianGamble) -> DistortedGaussian {
        DistortedGaussian {
            mean: g.mu() - self.mean_shift(g.sigma()),
            sd: g.sigma() / self.gamma,
            orientation: Orientation::Cdf,
        }
    }

    /// Gaussian image of `w ∘ (1 - F)`: mean `μ + σ(1/γ - 1)Φ⁻¹(p₀)`,
    /// deviation `σ/γ`.
    pub fn stabilize_tail(&self, g: &GaussianGamble) -> DistortedGaussian {
        DistortedGaussian {
            mean: g.mu() + self.mean_shift(g.sigma()),
            sd: g.sigma() / self.gamma,
            orientation: Orientation::Tail,
        }
    }

    #[inline]
    fn mean_shift(&self, sigma: f64) -> f64 {
        sigma * (1.0 / self.gamma - 1.0) * self.q0
    }
}

/// Which function of the gamble was distorted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Cdf,
    Tail,
}

/// A Gaussian obtained by distorting a Gaussian gamble.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistortedGaussian {
    pub mean: f64,
    pub sd: f64,
    pub orientation: Orientation,
}

impl DistortedGaussian {
    /// Standardized mean `mean / sd`.
    #[inline]
    pub fn standardized_mean(&self) -> f64 {
        self.mean / self.sd
    }

    /// Distribution function of the distorted Gaussian at `x`.
    pub fn cdf(&self, x: f64) -> f64 {
        normal::cdf((x - self.mean) / self.sd)
    }

    /// Tail function `1 - F` at `x`, computed without cancellation.
    pub fn tail(&self, x: f64) -> f64 {
        normal::cdf((self.mean - x) / self.sd)
    }

    /// Density at `x`.
    pub fn density(&self, x: f64) -> f64 {
        normal::pdf((x - self.mean) / self.sd) / self.sd
    }

    /// Reinterprets as an undistorted gamble, e.g. to distort it again.
    pub fn as_gamble(&self) -> GaussianGamble {
        GaussianGamble::new_unchecked(self.mean, self.sd)
    }
}
