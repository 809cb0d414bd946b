//! JSON scenario documents.
//!
//! ```json
//! {
//!   "agent": { "p0_minus": 0.37, "gamma_minus": 0.61, ... },
//!   "population": { "individuals": [ { "features": [1.0, 0.2] }, ... ] },
//!   "parameter_map": { "name": "affine", "alpha0": -1.0, "A": [[1.0], [0.5]],
//!                      "beta0": 0.0, "B": [[0.0], [0.0]] },
//!   "gain": { "name": "quadratic_cost", "c": 0.05 },
//!   "social": { "name": "linear", "kappa": 1.0 },
//!   "program": { "bounds": [[0.0, 2.0]], "controls": [1.0] }
//! }
//! ```
//!
//! `population` holds either `individuals` (each optionally with its own
//! `agent`) or a `sampler`: `{"kind": "gaussian", "mean": [...], "std": [...],
//! "count": n, "seed": s}` or `{"kind": "point", "features": [...], "count": n}`.
//! `gain` defaults to `identity`; `social` is optional. Errors carry the path
//! of the offending entry.

use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;

use crate::cli::AgentSpec;
use crate::error::{CptError, Result};
use crate::rng;

use super::functions::{
    check_nondecreasing, AffineMap, DiagonalGaussianSampler, GainFunction, IdentityGain, LinearSocial, ParameterMap,
    PersonalitySampler, PointMassSampler, QuadraticCostGain, SocialUtility,
};
use super::{Personality, Population, PopulationScenario, Program, ProgramBox};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioDoc {
    agent: AgentSpec,
    population: PopulationDoc,
    parameter_map: MapDoc,
    #[serde(default)]
    gain: Option<GainDoc>,
    #[serde(default)]
    social: Option<SocialDoc>,
    program: ProgramDoc,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PopulationDoc {
    #[serde(default)]
    individuals: Option<Vec<IndividualDoc>>,
    #[serde(default)]
    sampler: Option<SamplerDoc>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct IndividualDoc {
    features: Vec<f64>,
    #[serde(default)]
    agent: Option<AgentSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
enum SamplerDoc {
    #[serde(rename = "gaussian")]
    Gaussian {
        mean: Vec<f64>,
        std: Vec<f64>,
        count: usize,
        #[serde(default = "default_seed")]
        seed: u64,
    },
    #[serde(rename = "point")]
    Point {
        features: Vec<f64>,
        count: usize,
        #[serde(default = "default_seed")]
        seed: u64,
    },
}

fn default_seed() -> u64 {
    rng::DEFAULT_SEED
}

#[derive(Debug, Deserialize)]
#[serde(tag = "name", deny_unknown_fields)]
enum MapDoc {
    #[serde(rename = "affine")]
    Affine {
        alpha0: f64,
        #[serde(rename = "A")]
        a: Vec<Vec<f64>>,
        beta0: f64,
        #[serde(rename = "B")]
        b: Vec<Vec<f64>>,
    },
}

#[derive(Debug, Deserialize)]
#[serde(tag = "name", deny_unknown_fields)]
enum GainDoc {
    #[serde(rename = "identity")]
    Identity,
    #[serde(rename = "quadratic_cost")]
    QuadraticCost { c: f64 },
}

#[derive(Debug, Deserialize)]
#[serde(tag = "name", deny_unknown_fields)]
enum SocialDoc {
    #[serde(rename = "linear")]
    Linear { kappa: f64 },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProgramDoc {
    bounds: Vec<[f64; 2]>,
    #[serde(default)]
    controls: Option<Vec<f64>>,
}

fn at(path: &str) -> impl Fn(CptError) -> CptError + '_ {
    move |e| match e {
        CptError::Scenario { .. } => e,
        other => CptError::scenario(path, other.to_string()),
    }
}

/// Parses and validates a scenario document.
pub fn parse_scenario(json: &str) -> Result<PopulationScenario> {
    let de = &mut serde_json::Deserializer::from_str(json);
    let doc: ScenarioDoc = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        CptError::scenario(path, e.into_inner().to_string())
    })?;

    let default_agent = doc.agent.to_agent().map_err(at("agent"))?;

    let parameter_map: Arc<dyn ParameterMap> = match doc.parameter_map {
        MapDoc::Affine { alpha0, a, beta0, b } => {
            Arc::new(AffineMap::new(alpha0, a, beta0, b, default_agent).map_err(at("parameter_map"))?)
        }
    };

    let population = match (doc.population.individuals, doc.population.sampler) {
        (Some(individuals), None) => {
            let people = individuals
                .into_iter()
                .enumerate()
                .map(|(i, ind)| {
                    let agent =
                        ind.agent.map(|a| a.to_agent()).transpose().map_err(|e| {
                            CptError::scenario(format!("population.individuals[{i}].agent"), e.to_string())
                        })?;
                    Ok(Personality {
                        features: ind.features,
                        agent,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Population::Finite(people)
        }
        (None, Some(sampler)) => {
            let (sampler, count, seed): (Arc<dyn PersonalitySampler>, usize, u64) = match sampler {
                SamplerDoc::Gaussian { mean, std, count, seed } => {
                    let s = DiagonalGaussianSampler::new(mean, std).map_err(at("population.sampler"))?;
                    if s.dim() != parameter_map.feature_dim() {
                        return Err(CptError::scenario(
                            "population.sampler.mean",
                            format!("expected {} features, found {}", parameter_map.feature_dim(), s.dim()),
                        ));
                    }
                    (Arc::new(s), count, seed)
                }
                SamplerDoc::Point { features, count, seed } => {
                    if features.len() != parameter_map.feature_dim() {
                        return Err(CptError::scenario(
                            "population.sampler.features",
                            format!(
                                "expected {} features, found {}",
                                parameter_map.feature_dim(),
                                features.len()
                            ),
                        ));
                    }
                    (
                        Arc::new(PointMassSampler {
                            person: Personality::new(features),
                        }),
                        count,
                        seed,
                    )
                }
            };
            Population::MeanField { sampler, count, seed }
        }
        _ => {
            return Err(CptError::scenario(
                "population",
                "exactly one of `individuals` or `sampler` is required",
            ))
        }
    };

    let gain: Arc<dyn GainFunction> = match doc.gain {
        None | Some(GainDoc::Identity) => Arc::new(IdentityGain),
        Some(GainDoc::QuadraticCost { c }) => {
            if !c.is_finite() {
                return Err(CptError::scenario("gain.c", "cost must be finite"));
            }
            Arc::new(QuadraticCostGain { c })
        }
    };

    let social: Option<Arc<dyn SocialUtility>> = match doc.social {
        None => None,
        Some(SocialDoc::Linear { kappa }) => {
            let u = LinearSocial::new(kappa).map_err(at("social.kappa"))?;
            check_nondecreasing(&u).map_err(at("social"))?;
            Some(Arc::new(u))
        }
    };

    let program_box =
        ProgramBox::new(doc.program.bounds.iter().map(|b| (b[0], b[1])).collect()).map_err(at("program.bounds"))?;
    let program = doc
        .program
        .controls
        .map(|c| Program::new(c, &program_box))
        .transpose()
        .map_err(at("program.controls"))?;

    PopulationScenario::new(population, parameter_map, gain, social, program_box, program)
}

/// Reads and parses a scenario file.
pub fn load_scenario(path: &Path) -> Result<PopulationScenario> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CptError::scenario(path.display().to_string(), e.to_string()))?;
    parse_scenario(&text)
}
