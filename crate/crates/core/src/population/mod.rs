//! Large-population applications of the closed-form valuation.
//!
//! Each individual `n` has a personality `eₙ`; a program `P` induces a
//! Gaussian gamble and CPT parameters `θ(eₙ, P)` through a
//! [`ParameterMap`]. Individual `n` adopts when its valuation is strictly
//! positive, which is the same event as a positive certainty equivalent
//! because `v` is strictly increasing with `v(0) = 0`.

mod equilibrium;
mod functions;
mod optimize;
pub mod scenario;

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{CptError, Result};
use crate::oracle::McEstimate;
use crate::rng::{self, Stream};
use crate::valuation::{cpt_value, CptAgent};
use crate::value::GaussianGamble;

pub use equilibrium::{equilibrium, psi, Equilibrium, EquilibriumStep};
pub use functions::{
    check_nondecreasing, softplus, AffineMap, DiagonalGaussianSampler, GainFunction, IdentityGain, LinearSocial,
    ParameterMap, PersonalitySampler, PointMassSampler, QuadraticCostGain, SocialUtility,
};
pub use optimize::{optimize_program, Method, Optimum, TraceEntry};

/// Personality traits of one individual. `agent`, when present, overrides
/// the parameter map's default CPT parameters for this individual.
#[derive(Debug, Clone, PartialEq)]
pub struct Personality {
    pub features: Vec<f64>,
    pub agent: Option<CptAgent>,
}

impl Personality {
    pub fn new(features: Vec<f64>) -> Self {
        Personality { features, agent: None }
    }

    pub fn with_agent(features: Vec<f64>, agent: CptAgent) -> Self {
        Personality {
            features,
            agent: Some(agent),
        }
    }
}

/// Per-coordinate closed intervals bounding the program controls.
#[derive(Debug, Clone, PartialEq)]
pub struct ProgramBox {
    bounds: Vec<(f64, f64)>,
}

impl ProgramBox {
    pub fn new(bounds: Vec<(f64, f64)>) -> Result<Self> {
        if bounds.is_empty() {
            return Err(CptError::Argument("program box needs at least one coordinate".into()));
        }
        for (i, &(lo, hi)) in bounds.iter().enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(CptError::Argument(format!(
                    "program bound {i} must be a finite interval with lo <= hi, got [{lo}, {hi}]"
                )));
            }
        }
        Ok(ProgramBox { bounds })
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn center(&self) -> Program {
        Program {
            controls: self.bounds.iter().map(|&(lo, hi)| 0.5 * (lo + hi)).collect(),
        }
    }

    /// False when some coordinate interval is a single point.
    pub fn has_volume(&self) -> bool {
        self.bounds.iter().all(|&(lo, hi)| hi > lo)
    }

    pub fn contains(&self, controls: &[f64]) -> bool {
        controls.len() == self.dim()
            && controls
                .iter()
                .zip(&self.bounds)
                .all(|(&x, &(lo, hi))| x >= lo && x <= hi)
    }

    pub(crate) fn project(&self, controls: &mut [f64]) {
        for (x, &(lo, hi)) in controls.iter_mut().zip(&self.bounds) {
            *x = x.clamp(lo, hi);
        }
    }
}

/// A point in the program box.
#[derive(Debug, Clone, PartialEq)]
pub struct Program {
    controls: Vec<f64>,
}

impl Program {
    pub fn new(controls: Vec<f64>, bx: &ProgramBox) -> Result<Self> {
        if !bx.contains(&controls) {
            return Err(CptError::Argument(format!(
                "program {controls:?} lies outside its bounds {:?}",
                bx.bounds()
            )));
        }
        Ok(Program { controls })
    }

    pub(crate) fn from_controls(controls: Vec<f64>) -> Self {
        Program { controls }
    }

    pub fn controls(&self) -> &[f64] {
        &self.controls
    }
}

/// Who is in the population.
#[derive(Clone)]
pub enum Population {
    /// An explicit list of individuals.
    Finite(Vec<Personality>),
    /// A personality distribution, approximated by `count` draws from `seed`
    /// whenever a finite population is needed.
    MeanField {
        sampler: Arc<dyn PersonalitySampler>,
        count: usize,
        seed: u64,
    },
}

/// Everything needed to evaluate programs on a population.
#[derive(Clone)]
pub struct PopulationScenario {
    pub population: Population,
    pub parameter_map: Arc<dyn ParameterMap>,
    pub gain: Arc<dyn GainFunction>,
    pub social: Option<Arc<dyn SocialUtility>>,
    pub program_box: ProgramBox,
    /// The program used by equilibrium computations, if fixed in advance.
    pub program: Option<Program>,
}

impl std::fmt::Debug for PopulationScenario {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let population = match &self.population {
            Population::Finite(v) => format!("Finite({} individuals)", v.len()),
            Population::MeanField { sampler, count, seed } => {
                format!("MeanField({}, count={count}, seed={seed})", sampler.name())
            }
        };
        f.debug_struct("PopulationScenario")
            .field("population", &population)
            .field("parameter_map", &self.parameter_map.name())
            .field("gain", &self.gain.name())
            .field("social", &self.social.as_ref().map(|s| s.name().to_string()))
            .field("program_box", &self.program_box)
            .field("program", &self.program)
            .finish()
    }
}

impl PopulationScenario {
    /// Checks the population is nonempty and that feature and program
    /// dimensions agree with the parameter map.
    pub fn new(
        population: Population,
        parameter_map: Arc<dyn ParameterMap>,
        gain: Arc<dyn GainFunction>,
        social: Option<Arc<dyn SocialUtility>>,
        program_box: ProgramBox,
        program: Option<Program>,
    ) -> Result<Self> {
        if program_box.dim() != parameter_map.program_dim() {
            return Err(CptError::scenario(
                "program.bounds",
                format!(
                    "program has {} coordinates but the parameter map expects {}",
                    program_box.dim(),
                    parameter_map.program_dim()
                ),
            ));
        }
        match &population {
            Population::Finite(individuals) => {
                if individuals.is_empty() {
                    return Err(CptError::scenario("population.individuals", "population is empty"));
                }
                for (i, person) in individuals.iter().enumerate() {
                    check_features(person, parameter_map.as_ref(), &format!("population.individuals[{i}]"))?;
                }
            }
            Population::MeanField { count, .. } => {
                if *count == 0 {
                    return Err(CptError::scenario(
                        "population.sampler.count",
                        "sample count must be positive",
                    ));
                }
            }
        }
        if let Some(p) = &program {
            if !program_box.contains(p.controls()) {
                return Err(CptError::scenario(
                    "program.controls",
                    "program lies outside its bounds",
                ));
            }
        }
        Ok(PopulationScenario {
            population,
            parameter_map,
            gain,
            social,
            program_box,
            program,
        })
    }

    /// The individuals of a finite population.
    pub fn individuals(&self) -> Result<&[Personality]> {
        match &self.population {
            Population::Finite(v) => Ok(v),
            Population::MeanField { .. } => Err(CptError::scenario(
                "population",
                "operation needs a finite population; materialize the sampler first",
            )),
        }
    }

    /// Replaces a mean-field population by its `count` seeded draws; a
    /// finite population is returned unchanged.
    pub fn materialize(&self) -> Result<PopulationScenario> {
        match &self.population {
            Population::Finite(_) => Ok(self.clone()),
            Population::MeanField { sampler, count, seed } => {
                let mut stream = rng::stream(*seed);
                let individuals = (0..*count)
                    .map(|_| sampler.sample(&mut stream))
                    .collect::<Result<Vec<_>>>()?;
                let mut out = self.clone();
                out.population = Population::Finite(individuals);
                Ok(out)
            }
        }
    }

    fn sampler(&self) -> Result<&Arc<dyn PersonalitySampler>> {
        match &self.population {
            Population::MeanField { sampler, .. } => Ok(sampler),
            Population::Finite(_) => Err(CptError::scenario(
                "population",
                "mean-field operation needs a personality sampler",
            )),
        }
    }

    fn theta(
        &self,
        person: &Personality,
        program: &Program,
        path: impl FnOnce() -> String,
    ) -> Result<(CptAgent, GaussianGamble)> {
        self.parameter_map
            .theta(person, program.controls())
            .map_err(|e| CptError::scenario(path(), e.to_string()))
    }
}

fn check_features(person: &Personality, map: &dyn ParameterMap, path: &str) -> Result<()> {
    if person.features.len() != map.feature_dim() {
        return Err(CptError::scenario(
            format!("{path}.features"),
            format!(
                "expected {} features, found {}",
                map.feature_dim(),
                person.features.len()
            ),
        ));
    }
    if let Some(i) = person.features.iter().position(|x| !x.is_finite()) {
        return Err(CptError::scenario(
            format!("{path}.features[{i}]"),
            "feature is not finite",
        ));
    }
    Ok(())
}

/// Adoption count with every mean shifted by `shift`. Ties at zero do not
/// adopt. Evaluated in parallel; the count is order-independent and the
/// first failing index (in input order) is reported.
fn adopters(scn: &PopulationScenario, program: &Program, shift: f64) -> Result<usize> {
    let individuals = scn.individuals()?;
    let decisions: Vec<Result<bool>> = individuals
        .par_iter()
        .enumerate()
        .map(|(i, person)| {
            let path = || format!("population.individuals[{i}]");
            let (agent, gamble) = scn.theta(person, program, path)?;
            let gamble = if shift != 0.0 {
                gamble
                    .shifted(shift)
                    .map_err(|e| CptError::scenario(path(), e.to_string()))?
            } else {
                gamble
            };
            Ok(cpt_value(&agent, &gamble).total > 0.0)
        })
        .collect();
    let mut count = 0;
    for d in decisions {
        if d? {
            count += 1;
        }
    }
    Ok(count)
}

/// Fraction of the finite population whose valuation of `program` is
/// strictly positive.
pub fn adoption_fraction(scn: &PopulationScenario, program: &Program) -> Result<f64> {
    let n = scn.individuals()?.len();
    Ok(adopters(scn, program, 0.0)? as f64 / n as f64)
}

/// `g(P, adoption_fraction(P))`.
pub fn program_gain(scn: &PopulationScenario, program: &Program) -> Result<f64> {
    let q = adoption_fraction(scn, program)?;
    Ok(scn.gain.gain(program.controls(), q))
}

const MEAN_FIELD_CHUNK: usize = 1 << 16;

/// Estimates the adoption probability under the personality distribution
/// from `samples` seeded draws. Draws are generated sequentially in chunks
/// and evaluated in parallel, so the result depends only on `seed`.
pub fn mean_field_adoption(
    scn: &PopulationScenario,
    program: &Program,
    samples: usize,
    seed: u64,
) -> Result<McEstimate> {
    if samples == 0 {
        return Err(CptError::Argument(
            "mean-field adoption needs at least one sample".into(),
        ));
    }
    let sampler = scn.sampler()?;
    let mut stream: Stream = rng::stream(seed);
    let mut adopted = 0usize;
    let mut done = 0usize;
    while done < samples {
        let len = MEAN_FIELD_CHUNK.min(samples - done);
        let chunk = (0..len)
            .map(|_| sampler.sample(&mut stream))
            .collect::<Result<Vec<_>>>()
            .map_err(|e| CptError::scenario("population.sampler", e.to_string()))?;
        let decisions: Vec<Result<bool>> = chunk
            .par_iter()
            .enumerate()
            .map(|(i, person)| {
                let (agent, gamble) =
                    scn.theta(person, program, || format!("population.sampler[draw {}]", done + i))?;
                Ok(cpt_value(&agent, &gamble).total > 0.0)
            })
            .collect();
        for d in decisions {
            if d? {
                adopted += 1;
            }
        }
        done += len;
    }
    let q = adopted as f64 / samples as f64;
    Ok(McEstimate {
        estimate: q,
        std_error: (q * (1.0 - q) / samples as f64).sqrt(),
    })
}
