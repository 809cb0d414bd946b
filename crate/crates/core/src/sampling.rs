//! Random agents and gambles for sweeps, benchmarks and property checks.

use crate::rng::{self, Stream};
use crate::valuation::CptAgent;
use crate::value::{GaussianGamble, ValueParams};
use crate::weighting::WeightingParams;

/// Closed ranges for each parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParameterBox {
    pub p0: (f64, f64),
    pub gamma: (f64, f64),
    pub slope: (f64, f64),
    pub offset: (f64, f64),
    pub rate: (f64, f64),
    pub mu: (f64, f64),
    pub sigma: (f64, f64),
}

impl Default for ParameterBox {
    fn default() -> Self {
        ParameterBox {
            p0: (0.05, 0.95),
            gamma: (0.2, 1.0),
            slope: (0.0, 5.0),
            offset: (0.0, 5.0),
            rate: (0.0, 2.0),
            mu: (-5.0, 5.0),
            sigma: (0.1, 5.0),
        }
    }
}

fn ordered_pair(rng: &mut Stream, range: (f64, f64)) -> (f64, f64) {
    let x = rng::uniform(rng, range.0, range.1);
    let y = rng::uniform(rng, range.0, range.1);
    (x.max(y), x.min(y))
}

/// A valid agent: the larger of each drawn pair goes to the loss side.
pub fn random_agent(rng: &mut Stream, bx: &ParameterBox) -> CptAgent {
    let (m_minus, m_plus) = ordered_pair(rng, bx.slope);
    let (v_minus, v_plus) = ordered_pair(rng, bx.offset);
    let (a_minus, a_plus) = ordered_pair(rng, bx.rate);
    let value = ValueParams::new(m_minus, v_minus, a_minus, m_plus, v_plus, a_plus)
        .expect("continuous draws are nondegenerate");
    let w = |rng: &mut Stream| {
        WeightingParams::new(
            rng::uniform(rng, bx.p0.0, bx.p0.1),
            rng::uniform(rng, bx.gamma.0, bx.gamma.1),
        )
        .expect("box lies inside the weighting domain")
    };
    let w_minus = w(rng);
    let w_plus = w(rng);
    CptAgent::new(value, w_minus, w_plus)
}

pub fn random_gamble(rng: &mut Stream, bx: &ParameterBox) -> GaussianGamble {
    GaussianGamble::new(
        rng::uniform(rng, bx.mu.0, bx.mu.1),
        rng::uniform(rng, bx.sigma.0, bx.sigma.1),
    )
    .expect("box has positive sigma")
}

/// `n` draws from one seeded stream.
pub fn random_pairs(n: usize, seed: u64, bx: &ParameterBox) -> Vec<(CptAgent, GaussianGamble)> {
    let mut rng = rng::stream(seed);
    (0..n)
        .map(|_| {
            let agent = random_agent(&mut rng, bx);
            let gamble = random_gamble(&mut rng, bx);
            (agent, gamble)
        })
        .collect()
}
