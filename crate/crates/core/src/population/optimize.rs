//! Program design: maximize `g(P, adoption_fraction(P))` over the program box.

use rayon::prelude::*;

use crate::error::{CptError, Result};
use crate::rng;
use crate::valuation::{cpt_gradient, cpt_value};

use super::{program_gain, PopulationScenario, Program};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Exhaustive search of a regular lattice.
    Grid,
    /// Multi-start projected ascent on a logistic smoothing of the adoption
    /// indicator, with annealed temperature.
    Ascent,
}

impl std::str::FromStr for Method {
    type Err = CptError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "grid" => Ok(Method::Grid),
            "ascent" => Ok(Method::Ascent),
            other => Err(CptError::Argument(format!(
                "unknown method `{other}` (expected grid or ascent)"
            ))),
        }
    }
}

/// One evaluated program and its (unsmoothed) gain.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceEntry {
    pub controls: Vec<f64>,
    pub gain: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Optimum {
    pub program: Program,
    pub gain: f64,
    pub trace: Vec<TraceEntry>,
}

/// Largest `k` with `k^dim <= budget`, at least 1.
fn points_per_axis(budget: usize, dim: usize) -> usize {
    let mut k = 1usize;
    while (k + 1).checked_pow(dim as u32).is_some_and(|n| n <= budget) {
        k += 1;
    }
    k
}

/// The lattice searched by [`Method::Grid`], in row-major order (last
/// coordinate fastest). One point per axis means the box center.
pub fn grid_lattice(scn: &PopulationScenario, budget: usize) -> Vec<Vec<f64>> {
    let bounds = scn.program_box.bounds();
    let k = points_per_axis(budget, bounds.len());
    let axis = |&(lo, hi): &(f64, f64)| -> Vec<f64> {
        if k == 1 {
            vec![0.5 * (lo + hi)]
        } else {
            (0..k).map(|i| lo + (hi - lo) * i as f64 / (k - 1) as f64).collect()
        }
    };
    let axes: Vec<Vec<f64>> = bounds.iter().map(axis).collect();
    let mut points = vec![Vec::with_capacity(bounds.len())];
    for values in &axes {
        points = points
            .into_iter()
            .flat_map(|prefix| {
                values.iter().map(move |&x| {
                    let mut p = prefix.clone();
                    p.push(x);
                    p
                })
            })
            .collect();
    }
    points
}

/// Searches the program box with at most `budget` gain evaluations.
/// The returned gain is exactly `program_gain` at the returned program, and
/// the trace lists every evaluation made.
pub fn optimize_program(scn: &PopulationScenario, method: Method, budget: usize, seed: u64) -> Result<Optimum> {
    if budget == 0 {
        return Err(CptError::Argument("optimization budget must be at least 1".into()));
    }
    if !scn.program_box.has_volume() {
        return Err(CptError::Argument("program box has zero volume".into()));
    }
    let scn = scn.materialize()?;
    let trace = match method {
        Method::Grid => grid_trace(&scn, budget)?,
        Method::Ascent => ascent_trace(&scn, budget, seed)?,
    };
    let best = trace
        .iter()
        .enumerate()
        .fold(None::<(usize, f64)>, |best, (i, t)| match best {
            Some((_, g)) if g >= t.gain => best,
            _ => Some((i, t.gain)),
        })
        .map(|(i, _)| i)
        .expect("budget >= 1 gives a nonempty trace");
    Ok(Optimum {
        program: Program::from_controls(trace[best].controls.clone()),
        gain: trace[best].gain,
        trace,
    })
}

fn grid_trace(scn: &PopulationScenario, budget: usize) -> Result<Vec<TraceEntry>> {
    grid_lattice(scn, budget)
        .into_iter()
        .map(|controls| {
            let gain = program_gain(scn, &Program::from_controls(controls.clone()))?;
            Ok(TraceEntry { controls, gain })
        })
        .collect()
}

const MAX_STARTS: usize = 4;
const INITIAL_STEP: f64 = 0.25;
const STEP_DECAY: f64 = 0.9;
const TEMPERATURE_DECAY: f64 = 0.8;
const MIN_TEMPERATURE_RATIO: f64 = 1e-3;

/// Smoothed adoption `mean σ(total/τ)` and its gradient in the controls.
fn smoothed_adoption(scn: &PopulationScenario, controls: &[f64], tau: f64) -> Result<(f64, Vec<f64>)> {
    let individuals = scn.individuals()?;
    let program = Program::from_controls(controls.to_vec());
    let dim = controls.len();
    let parts: Vec<Result<(f64, Vec<f64>)>> = individuals
        .par_iter()
        .enumerate()
        .map(|(i, person)| {
            let (agent, gamble) = scn.theta(person, &program, || format!("population.individuals[{i}]"))?;
            let (dmu, dsigma) = scn.parameter_map.gamble_jacobian(person, controls).ok_or_else(|| {
                CptError::Argument(format!(
                    "parameter map `{}` provides no derivatives; use the grid method",
                    scn.parameter_map.name()
                ))
            })?;
            let total = cpt_value(&agent, &gamble).total;
            let grad = cpt_gradient(&agent, &gamble);
            let s = 1.0 / (1.0 + (-total / tau).exp());
            let ds = s * (1.0 - s) / tau;
            let g: Vec<f64> = (0..dim)
                .map(|j| ds * (grad.mu * dmu[j] + grad.sigma * dsigma[j]))
                .collect();
            Ok((s, g))
        })
        .collect();
    let n = individuals.len() as f64;
    let mut q = 0.0;
    let mut grad = vec![0.0; dim];
    for part in parts {
        let (s, g) = part?;
        q += s;
        for (acc, x) in grad.iter_mut().zip(g) {
            *acc += x;
        }
    }
    grad.iter_mut().for_each(|x| *x /= n);
    Ok((q / n, grad))
}

fn initial_temperature(scn: &PopulationScenario, controls: &[f64]) -> Result<f64> {
    let program = Program::from_controls(controls.to_vec());
    let individuals = scn.individuals()?;
    let mut sum = 0.0;
    for (i, person) in individuals.iter().enumerate() {
        let (agent, gamble) = scn.theta(person, &program, || format!("population.individuals[{i}]"))?;
        sum += cpt_value(&agent, &gamble).total.abs();
    }
    Ok((sum / individuals.len() as f64).max(1e-6))
}

fn ascent_trace(scn: &PopulationScenario, budget: usize, seed: u64) -> Result<Vec<TraceEntry>> {
    let bx = &scn.program_box;
    let widths: Vec<f64> = bx.bounds().iter().map(|&(lo, hi)| hi - lo).collect();
    let starts = budget.min(MAX_STARTS);
    let mut stream = rng::stream(seed);
    let mut trace = Vec::with_capacity(budget);

    for start in 0..starts {
        let iterations = budget / starts + usize::from(start < budget % starts);
        let mut controls: Vec<f64> = if start == 0 {
            bx.center().controls().to_vec()
        } else {
            bx.bounds()
                .iter()
                .map(|&(lo, hi)| rng::uniform(&mut stream, lo, hi))
                .collect()
        };
        let tau0 = initial_temperature(scn, &controls)?;
        for k in 0..iterations {
            let program = Program::from_controls(controls.clone());
            let gain = program_gain(scn, &program)?;
            trace.push(TraceEntry {
                controls: controls.clone(),
                gain,
            });
            if k + 1 == iterations {
                break;
            }
            let tau = tau0 * TEMPERATURE_DECAY.powi(k as i32).max(MIN_TEMPERATURE_RATIO);
            let (q, dq) = smoothed_adoption(scn, &controls, tau)?;
            let dg_dq = scn.gain.d_dq(&controls, q);
            let dg_dp = scn.gain.grad_program(&controls, q);
            let direction: Vec<f64> = (0..controls.len())
                .map(|j| (dg_dq * dq[j] + dg_dp[j]) * widths[j])
                .collect();
            let norm = direction.iter().map(|x| x * x).sum::<f64>().sqrt();
            if !(norm > 0.0 && norm.is_finite()) {
                // flat smoothed objective: jump to a fresh random point
                controls = bx
                    .bounds()
                    .iter()
                    .map(|&(lo, hi)| rng::uniform(&mut stream, lo, hi))
                    .collect();
                continue;
            }
            let step = INITIAL_STEP * STEP_DECAY.powi(k as i32);
            for j in 0..controls.len() {
                controls[j] += step * widths[j] * direction[j] / norm;
            }
            bx.project(&mut controls);
        }
    }
    Ok(trace)
}
