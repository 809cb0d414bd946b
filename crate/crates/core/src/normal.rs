//! Standard normal primitives: density, distribution function, quantile.
//!
//! The quantile is Acklam's rational approximation followed by a single
//! Newton step against [`cdf`]. Upper-half arguments are reflected through
//! `1 - p`, which is exact for `p >= 0.5`, so both tails carry full relative
//! accuracy.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{CptError, Result};

/// 1/√(2π)
pub const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// A probability in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Probability(f64);

impl Probability {
    pub const ZERO: Probability = Probability(0.0);
    pub const ONE: Probability = Probability(1.0);
    pub const HALF: Probability = Probability(0.5);

    pub fn new(p: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&p) {
            Ok(Probability(p))
        } else {
            Err(CptError::constraint("0 <= p <= 1", format!("got p = {p}")))
        }
    }

    /// Clamps into `[0, 1]`; NaN maps to 0.
    pub fn saturating(p: f64) -> Self {
        if p.is_nan() {
            Probability(0.0)
        } else {
            Probability(p.clamp(0.0, 1.0))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

impl From<Probability> for f64 {
    fn from(p: Probability) -> f64 {
        p.0
    }
}

/// Standard normal density n(x).
#[inline]
pub fn pdf(x: f64) -> f64 {
    INV_SQRT_2PI * (-0.5 * x * x).exp()
}

/// Standard normal distribution function Φ(x).
#[inline]
pub fn cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

/// `ln Φ(x)`, finite far into the lower tail where Φ itself underflows.
pub fn log_cdf(x: f64) -> f64 {
    if x > 0.0 {
        (-0.5 * libm::erfc(x * FRAC_1_SQRT_2)).ln_1p()
    } else if x > -30.0 {
        cdf(x).ln()
    } else {
        // Mills-ratio asymptotic series; the truncation error at |x| >= 30 is
        // below 1e-17 relative.
        let r = 1.0 / (x * x);
        let series = 1.0 - r * (1.0 - 3.0 * r * (1.0 - 5.0 * r * (1.0 - 7.0 * r)));
        -0.5 * x * x - (-x).ln() - 0.5 * (2.0 * PI).ln() + series.ln()
    }
}

/// Quantile function Φ⁻¹(p).
///
/// `p = 0` and `p = 1` return `-∞` and `+∞`, so that `cdf(quantile(p))`
/// reproduces the endpoints exactly. Arguments outside `[0, 1]` give NaN.
pub fn quantile(p: f64) -> f64 {
    if !(0.0..=1.0).contains(&p) {
        return f64::NAN;
    }
    if p == 0.0 {
        return f64::NEG_INFINITY;
    }
    if p == 1.0 {
        return f64::INFINITY;
    }
    if p > 0.5 {
        return -lower_quantile(1.0 - p);
    }
    lower_quantile(p)
}

/// [`quantile`] on a checked probability.
#[inline]
pub fn quantile_of(p: Probability) -> f64 {
    quantile(p.get())
}

// p in (0, 0.5]
fn lower_quantile(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    const P_LOW: f64 = 0.02425;

    let x = if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    };

    let density = pdf(x);
    if density > 0.0 {
        x - (cdf(x) - p) / density
    } else {
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cdf_reference_points() {
        assert_eq!(cdf(0.0), 0.5);
        assert!((cdf(40.0) - 1.0).abs() <= 1e-15);
        // within one ulp
        assert!((cdf(1.0) - 0.841_344_746_068_542_9).abs() <= 2e-16);
        for &x in &[0.1, 0.7, 1.5, 3.0, 6.0, 9.0] {
            assert!((cdf(-x) - (1.0 - cdf(x))).abs() <= 1e-15, "x = {x}");
        }
    }

    #[test]
    fn pdf_reference_points() {
        assert_eq!(pdf(0.0), 0.398_942_280_401_432_7);
        assert_eq!(pdf(2.0), pdf(-2.0));
        assert!((pdf(1.0) - 0.241_970_724_519_143_37).abs() <= 1e-16);
    }

    #[test]
    fn quantile_reference_points() {
        assert_eq!(quantile(0.5), 0.0);
        assert!((quantile(0.841_344_746_068_542_9) - 1.0).abs() <= 1e-10);
        assert_eq!(quantile(0.0), f64::NEG_INFINITY);
        assert_eq!(quantile(1.0), f64::INFINITY);
        assert!(quantile(-0.1).is_nan());
        assert!(quantile(1.1).is_nan());
        assert_eq!(cdf(quantile(0.0)), 0.0);
        assert_eq!(cdf(quantile(1.0)), 1.0);
    }

    #[test]
    fn quantile_is_odd_about_one_half() {
        for &p in &[0.5, 0.6, 0.9, 0.999, 1.0 - 1e-12] {
            assert_eq!(quantile(p), -quantile(1.0 - p), "p={p}");
        }
    }

    #[test]
    fn log_cdf_matches_direct_and_asymptotic_regimes() {
        for &x in &[-29.0, -10.0, -1.0, 0.0, 2.0, 8.0] {
            let direct = if x > 0.0 { (-cdf(-x)).ln_1p() } else { cdf(x).ln() };
            assert!((log_cdf(x) - direct).abs() <= 1e-13 * direct.abs().max(1e-300), "x={x}");
        }
        // continuity across the series switch
        let below = log_cdf(-30.000_000_001);
        let above = log_cdf(-29.999_999_999);
        assert!((below - above).abs() < 1e-6);
        assert!(log_cdf(-1e3).is_finite());
    }

    #[test]
    fn probability_rejects_outside_unit_interval() {
        assert!(Probability::new(-1e-18).is_err());
        assert!(Probability::new(1.0 + 1e-15).is_err());
        assert!(Probability::new(f64::NAN).is_err());
        assert_eq!(Probability::saturating(2.0).get(), 1.0);
    }
}
