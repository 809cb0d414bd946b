//! Random small scenarios and brute-force re-evaluations shared by the
//! population tests and the acceptance suite.
#![allow(dead_code)]

use std::sync::Arc;

use gaussian_cpt::population::{
    AffineMap, IdentityGain, LinearSocial, Personality, Population, PopulationScenario, Program, ProgramBox,
    QuadraticCostGain, SocialUtility,
};
use gaussian_cpt::rng::{self, Stream};
use gaussian_cpt::sampling::{random_agent, ParameterBox};
use gaussian_cpt::valuation::{cpt_value, CptAgent};
use gaussian_cpt::value::GaussianGamble;

/// The pieces of a random finite scenario, kept so tests can recompute
/// everything by hand.
pub struct SmallWorld {
    pub scenario: PopulationScenario,
    pub features: Vec<Vec<f64>>,
    pub agents: Vec<CptAgent>,
    pub alpha0: f64,
    pub a: Vec<Vec<f64>>,
    pub beta0: f64,
    pub b: Vec<Vec<f64>>,
    pub cost: f64,
    pub kappa: f64,
    pub bounds: Vec<(f64, f64)>,
}

pub fn small_world(seed: u64, n: usize, d_e: usize, d_p: usize, kappa: f64) -> SmallWorld {
    let mut s: Stream = rng::stream(seed);
    let bx = ParameterBox::default();
    let features: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..d_e).map(|_| rng::uniform(&mut s, 0.2, 2.0)).collect())
        .collect();
    let agents: Vec<CptAgent> = (0..n).map(|_| random_agent(&mut s, &bx)).collect();
    let matrix = |s: &mut Stream, lo: f64, hi: f64| -> Vec<Vec<f64>> {
        (0..d_e)
            .map(|_| (0..d_p).map(|_| rng::uniform(s, lo, hi)).collect())
            .collect()
    };
    let a = matrix(&mut s, 0.2, 1.5);
    let b = matrix(&mut s, -0.3, 0.3);
    let alpha0 = rng::uniform(&mut s, -3.0, -0.5);
    let beta0 = rng::uniform(&mut s, -0.5, 1.0);
    let cost = rng::uniform(&mut s, 0.0, 0.1);
    let bounds: Vec<(f64, f64)> = (0..d_p).map(|_| (0.0, rng::uniform(&mut s, 1.0, 4.0))).collect();
    let controls: Vec<f64> = bounds.iter().map(|&(lo, hi)| 0.5 * (lo + hi)).collect();

    let people = features
        .iter()
        .zip(&agents)
        .map(|(e, &agent)| Personality::with_agent(e.clone(), agent))
        .collect();
    let map = AffineMap::new(alpha0, a.clone(), beta0, b.clone(), agents[0]).unwrap();
    let program_box = ProgramBox::new(bounds.clone()).unwrap();
    let program = Program::new(controls, &program_box).unwrap();
    let social: Arc<dyn SocialUtility> = Arc::new(LinearSocial::new(kappa).unwrap());
    let gain: Arc<dyn gaussian_cpt::population::GainFunction> = if cost > 0.0 {
        Arc::new(QuadraticCostGain { c: cost })
    } else {
        Arc::new(IdentityGain)
    };
    let scenario = PopulationScenario::new(
        Population::Finite(people),
        Arc::new(map),
        gain,
        Some(social),
        program_box,
        Some(program),
    )
    .unwrap();
    SmallWorld {
        scenario,
        features,
        agents,
        alpha0,
        a,
        beta0,
        b,
        cost,
        kappa,
        bounds,
    }
}

impl SmallWorld {
    fn gamble(&self, i: usize, p: &[f64], shift: f64) -> GaussianGamble {
        let e = &self.features[i];
        let mut mu = self.alpha0 + shift;
        let mut z = self.beta0;
        for (r, &er) in e.iter().enumerate() {
            for (c, &pc) in p.iter().enumerate() {
                mu += er * self.a[r][c] * pc;
                z += er * self.b[r][c] * pc;
            }
        }
        let sigma = if z > 35.0 { z } else { z.exp().ln_1p() };
        GaussianGamble::new(mu, sigma.max(f64::MIN_POSITIVE)).unwrap()
    }

    /// Number of individuals with a strictly positive valuation.
    pub fn adopters(&self, p: &[f64], shift: f64) -> usize {
        (0..self.features.len())
            .filter(|&i| cpt_value(&self.agents[i], &self.gamble(i, p, shift)).total > 0.0)
            .count()
    }

    pub fn gain(&self, p: &[f64]) -> f64 {
        let q = self.adopters(p, 0.0) as f64 / self.features.len() as f64;
        if self.cost > 0.0 {
            q - self.cost * p.iter().map(|x| x * x).sum::<f64>()
        } else {
            q
        }
    }

    pub fn psi(&self, p: &[f64], q: f64) -> f64 {
        self.adopters(p, self.kappa * q) as f64 / self.features.len() as f64
    }

    /// The largest `k` with `k^d <= budget`, then the row-major lattice and
    /// its first maximizer.
    pub fn brute_force_optimum(&self, budget: usize) -> (Vec<f64>, f64) {
        let d = self.bounds.len();
        let mut k = 1;
        while (k + 1usize).pow(d as u32) <= budget {
            k += 1;
        }
        let mut best: Option<(Vec<f64>, f64)> = None;
        for index in 0..k.pow(d as u32) {
            let mut rest = index;
            let mut p = vec![0.0; d];
            for j in (0..d).rev() {
                let i = rest % k;
                rest /= k;
                let (lo, hi) = self.bounds[j];
                p[j] = if k == 1 {
                    0.5 * (lo + hi)
                } else {
                    lo + (hi - lo) * i as f64 / (k - 1) as f64
                };
            }
            let g = self.gain(&p);
            if best.as_ref().is_none_or(|(_, bg)| g > *bg) {
                best = Some((p, g));
            }
        }
        best.unwrap()
    }
}
