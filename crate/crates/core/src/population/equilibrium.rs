//! Fixed point of the social adoption map.
//!
//! With social utility `u`, each individual's mean reward becomes
//! `μ(e, P) + u(q)` where `q` is the adoption fraction, giving the map
//! `Ψ(q) = (1/N) Σ 1{V(θ(eₙ, P, u(q))) > 0}`. `Ψ` is a nondecreasing step
//! function with values in `{0, 1/N, …, 1}`, so an exact fixed point need
//! not exist; bisection on `Ψ(q) - q` brackets a crossing instead.

use crate::error::{CptError, Result};

use super::{adopters, PopulationScenario, Program};

/// `Ψ(q)`.
pub fn psi(scn: &PopulationScenario, program: &Program, q: f64) -> Result<f64> {
    let social = scn
        .social
        .as_ref()
        .ok_or_else(|| CptError::scenario("social", "scenario has no social utility"))?;
    let n = scn.individuals()?.len();
    Ok(adopters(scn, program, social.utility(q))? as f64 / n as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumStep {
    pub q: f64,
    pub psi: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Equilibrium {
    pub q: f64,
    /// `|q - Ψ(q)|`
    pub residual: f64,
    /// Every `(q, Ψ(q))` evaluated, in order.
    pub steps: Vec<EquilibriumStep>,
}

/// Bisects `h(q) = Ψ(q) - q` on `[0, 1]` from the midpoint until the bracket
/// is narrower than `tol`, then returns the better of the bracket's left end
/// and its image. `|q - Ψ(q)| <= max(tol, 1/N)` on return. With several
/// fixed points, the one bracketed first is returned.
pub fn equilibrium(scn: &PopulationScenario, program: &Program, tol: f64) -> Result<Equilibrium> {
    if !(tol > 0.0) {
        return Err(CptError::Argument(format!("tolerance must be positive, got {tol}")));
    }
    let mut steps = Vec::new();
    let eval = |q: f64, steps: &mut Vec<EquilibriumStep>| -> Result<f64> {
        let p = psi(scn, program, q)?;
        steps.push(EquilibriumStep { q, psi: p });
        Ok(p)
    };

    // h(0) = Ψ(0) >= 0 and h(1) = Ψ(1) - 1 <= 0
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let width = tol.max(1e-12);
    while hi - lo > width {
        let mid = 0.5 * (lo + hi);
        let p = eval(mid, &mut steps)?;
        if p == mid {
            return Ok(Equilibrium {
                q: mid,
                residual: 0.0,
                steps,
            });
        }
        if p > mid {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    // Ψ(lo) >= lo and Ψ(lo) <= Ψ(hi) <= hi, so Ψ(lo) lies in the bracket and
    // so does Ψ(Ψ(lo)).
    let p_lo = eval(lo, &mut steps)?;
    let image = p_lo;
    let p_image = eval(image, &mut steps)?;
    let (q, residual) = if (p_image - image).abs() <= (p_lo - lo).abs() {
        (image, (p_image - image).abs())
    } else {
        (lo, (p_lo - lo).abs())
    };
    Ok(Equilibrium { q, residual, steps })
}
