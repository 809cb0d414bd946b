//! The `gcpt` command line.
//!
//! Commands print JSON or CSV on stdout and diagnostics on stderr. Exit
//! codes: 0 success, 1 check failure, 2 usage or validation error.
//! [`run`] executes a command in-process and returns its output, so the
//! binary is a thin wrapper.

mod agent;
pub mod output;

use std::ffi::OsString;
use std::hint::black_box;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use rayon::prelude::*;

pub use agent::AgentSpec;
use output::{csv_num, num, Json};

use crate::error::{CptError, Result};
use crate::normal::Probability;
use crate::oracle::{quadrature_value, OracleConfig};
use crate::population::scenario::load_scenario;
use crate::population::{adoption_fraction, equilibrium, optimize_program, Method};
use crate::rng::DEFAULT_SEED;
use crate::sampling::{random_pairs, ParameterBox};
use crate::valuation::{certainty_equivalent, cpt_gradient, cpt_value, cpt_value_degenerate, CptAgent, CptGradient};
use crate::value::GaussianGamble;
use crate::weighting::WeightingParams;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "gcpt",
    version,
    about = "Closed-form cumulative prospect theory for Gaussian gambles"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, clap::Args)]
pub struct GambleArgs {
    /// Agent JSON file.
    pub agent_file: PathBuf,
    /// Mean of the gamble.
    #[arg(long, allow_negative_numbers = true)]
    pub mu: f64,
    /// Standard deviation of the gamble; 0 means a sure reward.
    #[arg(long)]
    pub sigma: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Valuation breakdown as JSON.
    Value(GambleArgs),
    /// Certainty equivalent as JSON.
    Ce(GambleArgs),
    /// Gradient in all twelve parameters as JSON.
    Grad(GambleArgs),
    /// CSV table of the weighting function and its derivative.
    WeightTable {
        #[arg(long)]
        p0: f64,
        #[arg(long)]
        gamma: f64,
        #[arg(long, default_value_t = 101)]
        points: usize,
    },
    /// Compare the closed form with adaptive quadrature on random draws.
    OracleCheck {
        #[arg(long, default_value_t = 500)]
        draws: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Search a scenario's program box for the best program.
    Optimize {
        scenario: PathBuf,
        #[arg(long, default_value = "grid")]
        method: String,
        #[arg(long, default_value_t = 1000)]
        budget: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Trace CSV destination.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Social-game fixed point for a scenario's program.
    Equilibrium {
        scenario: PathBuf,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Trace CSV destination.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Time closed-form against quadrature valuations.
    Bench {
        #[arg(long, default_value_t = 100_000)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

/// Captured result of one command.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            stdout,
            stderr: String::new(),
            code: EXIT_OK,
        }
    }

    fn usage(err: impl std::fmt::Display) -> Self {
        Outcome {
            stdout: String::new(),
            stderr: format!("error: {err}\n"),
            code: EXIT_USAGE,
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli.command),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                Outcome::ok(text)
            } else {
                Outcome {
                    stdout: String::new(),
                    stderr: text,
                    code,
                }
            }
        }
    }
}

pub fn execute(command: &Command) -> Outcome {
    let result = match command {
        Command::Value(args) => cmd_value(args),
        Command::Ce(args) => cmd_ce(args),
        Command::Grad(args) => cmd_grad(args),
        Command::WeightTable { p0, gamma, points } => cmd_weight_table(*p0, *gamma, *points),
        Command::OracleCheck { draws, seed, tol } => return cmd_oracle_check(*draws, *seed, *tol),
        Command::Optimize {
            scenario,
            method,
            budget,
            seed,
            out,
        } => cmd_optimize(scenario, method, *budget, *seed, out.as_deref()),
        Command::Equilibrium { scenario, tol, out } => cmd_equilibrium(scenario, *tol, out.as_deref()),
        Command::Bench { n, seed } => cmd_bench(*n, *seed),
    };
    result.unwrap_or_else(Outcome::usage)
}

/// Reads and validates an agent file.
pub fn load_agent(path: &Path) -> Result<CptAgent> {
    let text = std::fs::read_to_string(path).map_err(|e| CptError::Argument(format!("{}: {e}", path.display())))?;
    AgentSpec::parse(&text)
}

enum Gamble {
    Sure(f64),
    Gaussian(GaussianGamble),
}

fn gamble_inputs(args: &GambleArgs) -> Result<(CptAgent, Gamble)> {
    if !args.mu.is_finite() {
        return Err(CptError::Argument(format!("--mu must be finite, got {}", args.mu)));
    }
    if !(args.sigma >= 0.0) || !args.sigma.is_finite() {
        return Err(CptError::Argument(format!(
            "--sigma must be finite and nonnegative, got {}",
            args.sigma
        )));
    }
    let agent = load_agent(&args.agent_file)?;
    let gamble = if args.sigma == 0.0 {
        Gamble::Sure(args.mu)
    } else {
        Gamble::Gaussian(GaussianGamble::new(args.mu, args.sigma)?)
    };
    Ok((agent, gamble))
}

fn cmd_value(args: &GambleArgs) -> Result<Outcome> {
    let (agent, gamble) = gamble_inputs(args)?;
    let doc = match gamble {
        Gamble::Sure(mu) => {
            let total = cpt_value_degenerate(&agent, mu);
            Json::object([
                ("total", Json::Num(total)),
                ("loss_part", Json::Num(total.min(0.0))),
                ("gain_part", Json::Num(total.max(0.0))),
                ("intermediates", Json::Null),
            ])
        }
        Gamble::Gaussian(g) => {
            let b = cpt_value(&agent, &g);
            let i = b.intermediates;
            Json::object([
                ("total", Json::Num(b.total)),
                ("loss_part", Json::Num(b.loss_part)),
                ("gain_part", Json::Num(b.gain_part)),
                (
                    "intermediates",
                    Json::object([
                        ("loss_mean", Json::Num(i.loss_mean)),
                        ("loss_sd", Json::Num(i.loss_sd)),
                        ("gain_mean", Json::Num(i.gain_mean)),
                        ("gain_sd", Json::Num(i.gain_sd)),
                        ("loss_x", Json::Num(i.loss_x)),
                        ("gain_x", Json::Num(i.gain_x)),
                    ]),
                ),
            ])
        }
    };
    Ok(Outcome::ok(doc.render()))
}

fn cmd_ce(args: &GambleArgs) -> Result<Outcome> {
    let (agent, gamble) = gamble_inputs(args)?;
    let (ce, total) = match gamble {
        // v is strictly increasing, so a sure reward is its own certainty equivalent
        Gamble::Sure(mu) => (mu, cpt_value_degenerate(&agent, mu)),
        Gamble::Gaussian(g) => (certainty_equivalent(&agent, &g)?, cpt_value(&agent, &g).total),
    };
    let doc = Json::object([("certainty_equivalent", Json::Num(ce)), ("total", Json::Num(total))]);
    Ok(Outcome::ok(doc.render()))
}

fn cmd_grad(args: &GambleArgs) -> Result<Outcome> {
    let (agent, gamble) = gamble_inputs(args)?;
    let g = match gamble {
        Gamble::Sure(_) => {
            return Err(CptError::Argument(
                "the gradient needs --sigma > 0 (the valuation is not differentiable in sigma at 0)".into(),
            ))
        }
        Gamble::Gaussian(g) => g,
    };
    let grad = cpt_gradient(&agent, &g).to_array();
    let doc = Json::object(CptGradient::NAMES.iter().zip(grad).map(|(k, v)| (*k, Json::Num(v))));
    Ok(Outcome::ok(doc.render()))
}

fn cmd_weight_table(p0: f64, gamma: f64, points: usize) -> Result<Outcome> {
    let w = WeightingParams::new(p0, gamma)?;
    if points < 2 {
        return Err(CptError::Argument(format!("--points must be at least 2, got {points}")));
    }
    let mut out = String::from("p,w,w_prime\n");
    for i in 0..points {
        let p = if i == points - 1 {
            1.0
        } else {
            i as f64 / (points - 1) as f64
        };
        let prob = Probability::new(p)?;
        let slope = w.derivative(prob).map(csv_num).unwrap_or_default();
        out.push_str(&format!("{},{},{}\n", num(p), num(w.distort(prob).get()), slope));
    }
    Ok(Outcome::ok(out))
}

fn cmd_oracle_check(draws: usize, seed: u64, tol: f64) -> Outcome {
    if draws == 0 {
        return Outcome::usage("--draws must be at least 1");
    }
    if !(tol >= 0.0) {
        return Outcome::usage(format!("--tol must be nonnegative, got {tol}"));
    }
    let cfg = OracleConfig::default();
    let pairs = random_pairs(draws, seed, &ParameterBox::default());
    let rows: Vec<(f64, Result<f64>)> = pairs
        .par_iter()
        .map(|(agent, g)| (cpt_value(agent, g).total, quadrature_value(agent, g, &cfg)))
        .collect();

    let mut stdout = String::from("draw,closed_form,quadrature,abs_diff\n");
    let mut stderr = String::new();
    let mut worst: Option<(usize, f64)> = None;
    let mut failed_quadrature = 0usize;
    for (i, (closed, quad)) in rows.iter().enumerate() {
        match quad {
            Ok(q) => {
                let diff = (closed - q).abs();
                stdout.push_str(&format!("{i},{},{},{}\n", num(*closed), num(*q), csv_num(diff)));
                if worst.is_none_or(|(_, d)| diff > d || diff.is_nan()) {
                    worst = Some((i, diff));
                }
            }
            Err(e) => {
                failed_quadrature += 1;
                stdout.push_str(&format!("{i},{},,\n", num(*closed)));
                stderr.push_str(&format!("draw {i}: {e}\n"));
            }
        }
    }

    let max_diff = worst.map_or(f64::NAN, |(_, d)| d);
    let pass = failed_quadrature == 0 && max_diff <= tol;
    stderr.push_str(&format!(
        "oracle-check: draws={draws} seed={seed} tol={} max_abs_diff={} quadrature_failures={failed_quadrature} result={}\n",
        num(tol),
        num(max_diff),
        if pass { "pass" } else { "fail" }
    ));
    if !pass {
        if let Some((i, diff)) = worst {
            let (agent, g) = &pairs[i];
            let spec = AgentSpec::from_agent(agent);
            let doc = Json::object([
                ("draw", Json::Int(i as u64)),
                ("abs_diff", Json::Num(diff)),
                ("agent", agent_json(&spec)),
                ("mu", Json::Num(g.mu())),
                ("sigma", Json::Num(g.sigma())),
            ]);
            stderr.push_str("worst draw: ");
            stderr.push_str(&doc.render());
        }
    }
    Outcome {
        stdout,
        stderr,
        code: if pass { EXIT_OK } else { EXIT_CHECK_FAILED },
    }
}

fn agent_json(s: &AgentSpec) -> Json {
    Json::object([
        ("p0_minus", Json::Num(s.p0_minus)),
        ("gamma_minus", Json::Num(s.gamma_minus)),
        ("p0_plus", Json::Num(s.p0_plus)),
        ("gamma_plus", Json::Num(s.gamma_plus)),
        ("m_minus", Json::Num(s.m_minus)),
        ("V_minus", Json::Num(s.v_minus)),
        ("a_minus", Json::Num(s.a_minus)),
        ("m_plus", Json::Num(s.m_plus)),
        ("V_plus", Json::Num(s.v_plus)),
        ("a_plus", Json::Num(s.a_plus)),
    ])
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    if let Some(path) = path {
        std::fs::write(path, text).map_err(|e| CptError::Argument(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn cmd_optimize(scenario: &Path, method: &str, budget: usize, seed: u64, out: Option<&Path>) -> Result<Outcome> {
    let method: Method = method.parse()?;
    let scn = load_scenario(scenario)?;
    let best = optimize_program(&scn, method, budget, seed)?;
    let adoption = adoption_fraction(&scn.materialize()?, &best.program)?;

    let dim = scn.program_box.dim();
    let mut trace = String::from("step");
    for j in 0..dim {
        trace.push_str(&format!(",p{j}"));
    }
    trace.push_str(",gain\n");
    for (i, entry) in best.trace.iter().enumerate() {
        trace.push_str(&i.to_string());
        for &c in &entry.controls {
            trace.push(',');
            trace.push_str(&csv_num(c));
        }
        trace.push(',');
        trace.push_str(&csv_num(entry.gain));
        trace.push('\n');
    }
    write_out(out, &trace)?;

    let doc = Json::object([
        ("method", Json::Str(method_name(method).into())),
        ("program", Json::numbers(best.program.controls())),
        ("gain", Json::Num(best.gain)),
        ("adoption", Json::Num(adoption)),
        ("evaluations", Json::Int(best.trace.len() as u64)),
    ]);
    Ok(Outcome::ok(doc.render()))
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Grid => "grid",
        Method::Ascent => "ascent",
    }
}

fn cmd_equilibrium(scenario: &Path, tol: f64, out: Option<&Path>) -> Result<Outcome> {
    let scn = load_scenario(scenario)?.materialize()?;
    let program = scn
        .program
        .clone()
        .ok_or_else(|| CptError::scenario("program.controls", "equilibrium needs a fixed program"))?;
    let eq = equilibrium(&scn, &program, tol)?;

    let mut trace = String::from("step,q,psi\n");
    for (i, s) in eq.steps.iter().enumerate() {
        trace.push_str(&format!("{i},{},{}\n", num(s.q), num(s.psi)));
    }
    write_out(out, &trace)?;

    let doc = Json::object([
        ("q", Json::Num(eq.q)),
        ("residual", Json::Num(eq.residual)),
        ("population", Json::Int(scn.individuals()?.len() as u64)),
        ("evaluations", Json::Int(eq.steps.len() as u64)),
    ]);
    Ok(Outcome::ok(doc.render()))
}

/// Timings from [`bench`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchReport {
    pub n: usize,
    pub seed: u64,
    pub closed_form_seconds: f64,
    pub quadrature_seconds: f64,
    pub quadrature_failures: usize,
}

impl BenchReport {
    pub fn closed_form_per_second(&self) -> f64 {
        self.n as f64 / self.closed_form_seconds
    }

    pub fn quadrature_per_second(&self) -> f64 {
        self.n as f64 / self.quadrature_seconds
    }

    pub fn speedup(&self) -> f64 {
        self.quadrature_seconds / self.closed_form_seconds
    }
}

/// Times `n` closed-form and `n` quadrature valuations, both sequential, on
/// the same seeded draws.
pub fn bench(n: usize, seed: u64) -> Result<BenchReport> {
    if n == 0 {
        return Err(CptError::Argument("--n must be at least 1".into()));
    }
    let pairs = random_pairs(n, seed, &ParameterBox::default());
    let cfg = OracleConfig::default();

    let start = Instant::now();
    for (agent, g) in &pairs {
        black_box(cpt_value(black_box(agent), black_box(g)));
    }
    let closed = start.elapsed().as_secs_f64();

    let mut failures = 0;
    let start = Instant::now();
    for (agent, g) in &pairs {
        if black_box(quadrature_value(black_box(agent), black_box(g), &cfg)).is_err() {
            failures += 1;
        }
    }
    let quad = start.elapsed().as_secs_f64();

    Ok(BenchReport {
        n,
        seed,
        closed_form_seconds: closed.max(f64::MIN_POSITIVE),
        quadrature_seconds: quad.max(f64::MIN_POSITIVE),
        quadrature_failures: failures,
    })
}

fn cmd_bench(n: usize, seed: u64) -> Result<Outcome> {
    let r = bench(n, seed)?;
    let doc = Json::object([
        ("n", Json::Int(r.n as u64)),
        ("seed", Json::Int(r.seed)),
        ("closed_form_seconds", Json::Num(r.closed_form_seconds)),
        ("quadrature_seconds", Json::Num(r.quadrature_seconds)),
        ("closed_form_per_second", Json::Num(r.closed_form_per_second())),
        ("quadrature_per_second", Json::Num(r.quadrature_per_second())),
        ("speedup", Json::Num(r.speedup())),
        ("quadrature_failures", Json::Int(r.quadrature_failures as u64)),
    ]);
    Ok(Outcome::ok(doc.render()))
}
