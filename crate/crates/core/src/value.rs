//! Piecewise exponential value functions and their Gaussian partial
//! expectations.
//!
//! On gains `v(x) = m⁺x + V⁺(1 - e^{-a⁺x})`; losses mirror the same shape,
//! `v(x) = -(m⁻|x| + V⁻(1 - e^{-a⁻|x|}))`. Each side approaches the line
//! `m x + V` exponentially at rate `a`:
//! `V⁺ + m⁺x - v(x) = V⁺e^{-a⁺x}` for `x ≥ 0`.

use crate::error::{CptError, Result};
use crate::normal;
use crate::weighting::{DistortedGaussian, Orientation};

/// Exponent beyond which the truncated exponential moment is assembled in
/// log space.
const LOG_SPACE_THRESHOLD: f64 = 700.0;

/// One side of a value function: `x ↦ m x + V(1 - e^{-a x})` for `x ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SideShape {
    /// Asymptotic slope `m`.
    pub slope: f64,
    /// Asymptote offset `V`.
    pub offset: f64,
    /// Convergence rate `a`.
    pub rate: f64,
}

impl SideShape {
    pub const fn new(slope: f64, offset: f64, rate: f64) -> Self {
        SideShape { slope, offset, rate }
    }

    /// The shape at `x ≥ 0`.
    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        self.slope * x + self.exponential_part(x)
    }

    #[inline]
    fn exponential_part(&self, x: f64) -> f64 {
        if self.offset == 0.0 || self.rate == 0.0 {
            0.0
        } else {
            -self.offset * (-self.rate * x).exp_m1()
        }
    }

    #[inline]
    fn derivative(&self, x: f64) -> f64 {
        self.slope + self.offset * self.rate * (-self.rate * x).exp()
    }

    /// Supremum of the shape on `[0, ∞)`.
    pub fn supremum(&self) -> f64 {
        if self.slope > 0.0 {
            f64::INFINITY
        } else if self.rate > 0.0 {
            self.offset
        } else {
            0.0
        }
    }

    fn is_degenerate(&self) -> bool {
        !(self.slope > 0.0 || (self.offset > 0.0 && self.rate > 0.0))
    }

    /// `E[shape(Z) 1{Z ≥ 0}]` for `Z ~ Normal(mean, sd)`.
    pub fn partial_expectation(&self, mean: f64, sd: f64) -> f64 {
        let x = mean / sd;
        let mut total = 0.0;
        if self.slope != 0.0 {
            total += self.slope * positive_part_mean(mean, sd);
        }
        if self.offset != 0.0 && self.rate != 0.0 {
            let mass = normal::cdf(x);
            let damped = truncated_exp_moment(self.rate, mean, sd);
            total += self.offset * (mass - damped);
        }
        total
    }

    /// Inverse of the shape on `[0, supremum)`.
    fn inverse(&self, y: f64) -> Result<f64> {
        debug_assert!(y >= 0.0);
        if y == 0.0 {
            return Ok(0.0);
        }
        let sup = self.supremum();
        if y >= sup {
            return Err(CptError::OutOfRange { target: y, bound: sup });
        }
        if self.slope == 0.0 {
            // V(1 - e^{-ac}) = y
            return Ok(-(-y / self.offset).ln_1p() / self.rate);
        }
        let exp_slope = if self.offset == 0.0 || self.rate == 0.0 {
            0.0
        } else {
            self.offset * self.rate
        };
        if exp_slope == 0.0 {
            return Ok(y / self.slope);
        }
        // The shape is concave, so Newton from a point left of the root
        // increases monotonically to it.
        let mut c = y / (self.slope + exp_slope);
        let upper = y / self.slope;
        for _ in 0..200 {
            let step = (y - self.eval(c)) / self.derivative(c);
            let next = (c + step).min(upper);
            if next <= c {
                break;
            }
            c = next;
        }
        Ok(c)
    }
}

/// `E[Z 1{Z ≥ 0}] = μΦ(μ/σ) + σ n(μ/σ)` for `Z ~ Normal(μ, σ)`.
#[inline]
pub fn positive_part_mean(mean: f64, sd: f64) -> f64 {
    let x = mean / sd;
    mean * normal::cdf(x) + sd * normal::pdf(x)
}

/// `E[e^{-aZ} 1{Z ≥ 0}] = e^{-aμ + (aσ)²/2} Φ(μ/σ - aσ)` for
/// `Z ~ Normal(μ, σ)`.
///
/// When the exponent exceeds 700 the product is formed as
/// `exp(exponent + ln Φ(·))`; the product itself is always at most one.
pub fn truncated_exp_moment(rate: f64, mean: f64, sd: f64) -> f64 {
    if rate == 0.0 {
        return normal::cdf(mean / sd);
    }
    let a_sd = rate * sd;
    let exponent = -rate * mean + 0.5 * a_sd * a_sd;
    let arg = mean / sd - a_sd;
    if exponent <= LOG_SPACE_THRESHOLD {
        exponent.exp() * normal::cdf(arg)
    } else {
        (exponent + normal::log_cdf(arg)).exp()
    }
}

/// Six-parameter piecewise exponential value function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValueParams {
    losses: SideShape,
    gains: SideShape,
}

impl ValueParams {
    /// Validates nonnegativity, loss-side dominance
    /// (`m⁻ ≥ m⁺`, `V⁻ ≥ V⁺`, `a⁻ ≥ a⁺`) and that neither side is flat.
    pub fn new(m_minus: f64, v_minus: f64, a_minus: f64, m_plus: f64, v_plus: f64, a_plus: f64) -> Result<Self> {
        let named = [
            ("m_minus", m_minus),
            ("V_minus", v_minus),
            ("a_minus", a_minus),
            ("m_plus", m_plus),
            ("V_plus", v_plus),
            ("a_plus", a_plus),
        ];
        for (name, x) in named {
            if !(x.is_finite() && x >= 0.0) {
                return Err(CptError::constraint(
                    format!("{name} >= 0"),
                    format!("got {name} = {x}"),
                ));
            }
        }
        let pairs = [
            ("m_minus >= m_plus", m_minus, m_plus),
            ("V_minus >= V_plus", v_minus, v_plus),
            ("a_minus >= a_plus", a_minus, a_plus),
        ];
        for (name, lo, hi) in pairs {
            if lo < hi {
                return Err(CptError::constraint(name, format!("got {lo} < {hi}")));
            }
        }
        let params = Self::new_unchecked(
            SideShape::new(m_minus, v_minus, a_minus),
            SideShape::new(m_plus, v_plus, a_plus),
        );
        if params.losses.is_degenerate() {
            return Err(CptError::constraint(
                "m_minus > 0 or (V_minus > 0 and a_minus > 0)",
                "loss side of the value function is flat",
            ));
        }
        if params.gains.is_degenerate() {
            return Err(CptError::constraint(
                "m_plus > 0 or (V_plus > 0 and a_plus > 0)",
                "gain side of the value function is flat",
            ));
        }
        Ok(params)
    }

    /// No validation; used by finite-difference checks that step across
    /// the ordering constraints.
    pub const fn new_unchecked(losses: SideShape, gains: SideShape) -> Self {
        ValueParams { losses, gains }
    }

    /// `v(x) = m x` on both sides.
    pub fn linear(m: f64) -> Result<Self> {
        Self::new(m, 0.0, 0.0, m, 0.0, 0.0)
    }

    #[inline]
    pub fn losses(&self) -> &SideShape {
        &self.losses
    }

    #[inline]
    pub fn gains(&self) -> &SideShape {
        &self.gains
    }

    /// Scales slopes and offsets on both sides by `k`.
    pub fn scaled(&self, k: f64) -> Self {
        let s = |side: &SideShape| SideShape::new(k * side.slope, k * side.offset, side.rate);
        Self::new_unchecked(s(&self.losses), s(&self.gains))
    }

    /// `v(x)`.
    pub fn value(&self, x: f64) -> f64 {
        if x >= 0.0 {
            self.gains.eval(x)
        } else {
            -self.losses.eval(-x)
        }
    }

    /// Solves `v(c) = y`.
    pub fn inverse(&self, y: f64) -> Result<f64> {
        if y.is_nan() {
            return Err(CptError::Argument("value target is NaN".into()));
        }
        if y >= 0.0 {
            self.gains.inverse(y)
        } else {
            self.losses.inverse(-y).map(|c| -c).map_err(|e| match e {
                CptError::OutOfRange { bound, .. } => CptError::OutOfRange {
                    target: y,
                    bound: -bound,
                },
                other => other,
            })
        }
    }

    /// `E[v(Z) 1{Z ≥ 0}]` for the tail-distorted gain Gaussian.
    pub fn gain_partial_expectation(&self, z: &DistortedGaussian) -> f64 {
        debug_assert_eq!(z.orientation, Orientation::Tail);
        self.gains.partial_expectation(z.mean, z.sd)
    }

    /// `E[v(Z) 1{Z ≤ 0}]` for the CDF-distorted loss Gaussian. Uses
    /// `Z → -Z`, which turns it into a gain-type expectation at `-mean`.
    pub fn loss_partial_expectation(&self, z: &DistortedGaussian) -> f64 {
        debug_assert_eq!(z.orientation, Orientation::Cdf);
        -self.losses.partial_expectation(-z.mean, z.sd)
    }
}

/// A Gaussian reward with mean `mu` and standard deviation `sigma > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianGamble {
    mu: f64,
    sigma: f64,
}

impl GaussianGamble {
    pub fn new(mu: f64, sigma: f64) -> Result<Self> {
        if !mu.is_finite() {
            return Err(CptError::InvalidGamble(format!("mean must be finite, got {mu}")));
        }
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(CptError::InvalidGamble(format!(
                "standard deviation must be positive and finite, got {sigma}"
            )));
        }
        Ok(GaussianGamble { mu, sigma })
    }

    pub(crate) const fn new_unchecked(mu: f64, sigma: f64) -> Self {
        GaussianGamble { mu, sigma }
    }

    #[inline]
    pub fn mu(&self) -> f64 {
        self.mu
    }

    #[inline]
    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Same deviation, mean moved by `delta`.
    pub fn shifted(&self, delta: f64) -> Result<Self> {
        Self::new(self.mu + delta, self.sigma)
    }
}
