//! Population-based search behind one interface, with exact budget accounting.
//!
//! Every strategy keeps real-valued positions; candidates are rounded and
//! clamped only when handed to the objective. A run stops when the evaluation
//! budget is spent: the last batch of an iteration is truncated to what is
//! left, so `eval_count` always equals the budget.

mod abc;
mod config;
mod de;
mod es;
mod ga;
mod hs;
mod pso;
mod sapde;
mod swarm;
mod util;

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::candidate::{Bounds, Candidate, Evaluation, JpegObjective};
use crate::error::{Error, Result};
use crate::metrics::{median_dispersion, population_diversity};
use crate::scalar::Real;

pub use config::{AlgorithmId, OptimizerConfig, ParamSpec, DEFAULT_BUDGET, DEFAULT_POPULATION};
pub use pso::logistic_map;

/// Something to minimise over an integer box.
pub trait Problem: Sync {
    /// Extra per-evaluation detail kept for the best candidate.
    type Info: Clone + Send;

    fn bounds(&self) -> &Bounds;

    /// Objective value of an in-bounds integer vector.
    fn evaluate(&self, genes: &[i32]) -> Result<(f64, Self::Info)>;
}

impl Problem for JpegObjective {
    type Info = Evaluation;

    fn bounds(&self) -> &Bounds {
        static DEFAULT: std::sync::OnceLock<Bounds> = std::sync::OnceLock::new();
        DEFAULT.get_or_init(Bounds::default)
    }

    fn evaluate(&self, genes: &[i32]) -> Result<(f64, Evaluation)> {
        let e = JpegObjective::evaluate(self, &Candidate::new(genes.to_vec())?)?;
        Ok((e.objective, e))
    }
}

/// Sum of squared distances to a fixed integer vector.
#[derive(Debug, Clone)]
pub struct SphereProblem {
    pub target: Vec<i32>,
    pub bounds: Bounds,
}

impl SphereProblem {
    pub fn new(target: Vec<i32>, bounds: Bounds) -> Result<Self> {
        if target.len() != bounds.dim() {
            return Err(Error::InvalidConfig("target and bounds differ in dimension".into()));
        }
        Ok(Self { target, bounds })
    }
}

impl Problem for SphereProblem {
    type Info = ();

    fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    fn evaluate(&self, genes: &[i32]) -> Result<(f64, ())> {
        let s = genes.iter().zip(&self.target).map(|(&g, &t)| ((g - t) as f64).powi(2)).sum();
        Ok((s, ()))
    }
}

/// What a strategy sees of the run: bounds, randomness and a metered objective.
pub trait Evaluator<T: Real> {
    fn bounds(&self) -> &Bounds;
    fn rng(&mut self) -> &mut ChaCha8Rng;
    fn budget(&self) -> usize;
    fn used(&self) -> usize;

    fn remaining(&self) -> usize {
        self.budget() - self.used()
    }

    /// Fraction of the budget spent, in `[0, 1]`.
    fn progress(&self) -> f64 {
        self.used() as f64 / self.budget() as f64
    }

    /// Evaluates positions in order; returns fewer values than requested when
    /// the budget runs out part-way.
    fn evaluate(&mut self, xs: &[Vec<T>]) -> Result<Vec<f64>>;
}

struct Best<I> {
    genes: Vec<i32>,
    objective: f64,
    info: I,
}

struct Ctx<'a, P: Problem> {
    problem: &'a P,
    rng: ChaCha8Rng,
    budget: usize,
    used: usize,
    total: f64,
    best: Option<Best<P::Info>>,
}

impl<P: Problem, T: Real> Evaluator<T> for Ctx<'_, P> {
    fn bounds(&self) -> &Bounds {
        self.problem.bounds()
    }

    fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn budget(&self) -> usize {
        self.budget
    }

    fn used(&self) -> usize {
        self.used
    }

    fn evaluate(&mut self, xs: &[Vec<T>]) -> Result<Vec<f64>> {
        let n = xs.len().min(self.budget - self.used);
        let bounds = self.problem.bounds();
        let genes = xs[..n].iter().map(|x| bounds.repair(x)).collect::<Result<Vec<_>>>()?;
        let problem = self.problem;
        let results: Vec<Result<(f64, P::Info)>> = genes.par_iter().map(|g| problem.evaluate(g)).collect();
        self.used += n;
        let mut out = Vec::with_capacity(n);
        for (g, r) in genes.into_iter().zip(results) {
            let (f, info) = r?;
            if f.is_nan() {
                return Err(Error::InvalidObjective("objective returned NaN".into()));
            }
            if self.best.as_ref().is_none_or(|b| f < b.objective) {
                self.best = Some(Best { genes: g, objective: f, info });
            }
            self.total += f;
            out.push(f);
        }
        Ok(out)
    }
}

pub(crate) trait Strategy<T: Real>: Send {
    /// Creates and evaluates the initial population.
    fn init(&mut self, ev: &mut dyn Evaluator<T>) -> Result<()>;
    /// One iteration; must evaluate at least one position.
    fn step(&mut self, ev: &mut dyn Evaluator<T>) -> Result<()>;
    fn positions(&self) -> &[Vec<T>];
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub iteration: usize,
    pub evaluations: usize,
    pub best_objective: f64,
    pub population_size: usize,
    /// Mean Euclidean distance to the mean position.
    pub diversity: f64,
    /// Mean absolute deviation from the per-gene median, averaged over genes.
    pub dispersion: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult<I> {
    pub algorithm: AlgorithmId,
    pub seed: u64,
    pub best_genes: Vec<i32>,
    pub best_objective: f64,
    pub best_info: I,
    pub eval_count: usize,
    /// Mean objective of the initial population.
    pub initial_mean: f64,
    pub trace: Vec<TracePoint>,
    /// Positions per iteration, when requested.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snapshots: Option<Vec<Vec<Vec<f64>>>>,
    /// Seconds; excluded from reproducibility comparisons.
    pub wall_time: f64,
}

pub struct Optimizer<T: Real = f64> {
    config: OptimizerConfig,
    _scalar: std::marker::PhantomData<T>,
}

pub fn make_optimizer<T: Real>(config: OptimizerConfig) -> Result<Optimizer<T>> {
    config.validate()?;
    Ok(Optimizer { config, _scalar: std::marker::PhantomData })
}

fn build<T: Real>(c: &OptimizerConfig) -> Box<dyn Strategy<T>> {
    use AlgorithmId::*;
    let np = c.population_size;
    match c.algorithm {
        Ga => Box::new(ga::Ga::new(np, c, false)),
        Ma => Box::new(ga::Ga::new(np, c, true)),
        De => Box::new(de::De::new(np, c)),
        Sade => Box::new(de::Sade::new(np, c)),
        Jade => Box::new(de::Jade::new(np, c)),
        SapDe => Box::new(sapde::SapDe::new(np, c)),
        Pso => Box::new(pso::Pso::new(np, c)),
        Cpso => Box::new(pso::Cpso::new(np, c)),
        Clpso => Box::new(pso::Clpso::new(np, c)),
        Hpso => Box::new(pso::Hpso::new(np, c)),
        Ppso => Box::new(pso::Ppso::new(np, c)),
        Es => Box::new(es::Es::new(np, c, false)),
        LevyEs => Box::new(es::Es::new(np, c, true)),
        Abc => Box::new(abc::Abc::new(np, c)),
        Hs => Box::new(hs::Hs::new(np, c)),
        Gwo => Box::new(swarm::Gwo::new(np)),
        Woa => Box::new(swarm::Woa::new(np)),
        Sca => Box::new(swarm::Sca::new(np)),
    }
}

impl<T: Real> Optimizer<T> {
    pub fn config(&self) -> &OptimizerConfig {
        &self.config
    }

    /// Runs until the evaluation budget is spent.
    pub fn run<P: Problem>(&self, problem: &P) -> Result<RunResult<P::Info>> {
        let start = Instant::now();
        let mut strategy = build::<T>(&self.config);
        let mut ctx = Ctx {
            problem,
            rng: ChaCha8Rng::seed_from_u64(self.config.seed),
            budget: self.config.eval_budget,
            used: 0,
            total: 0.0,
            best: None,
        };
        let mut trace = Vec::new();
        let mut snapshots = self.config.record_snapshots.then(Vec::new);
        strategy.init(&mut ctx)?;
        if ctx.used == 0 {
            return Err(Error::EmptyInput("initial population"));
        }
        let initial_mean = ctx.total / ctx.used as f64;
        let mut iteration = 0;
        loop {
            let best = ctx.best.as_ref().map_or(f64::INFINITY, |b| b.objective);
            record(&mut trace, snapshots.as_mut(), iteration, ctx.used, best, strategy.positions());
            if ctx.used >= ctx.budget {
                break;
            }
            let before = ctx.used;
            strategy.step(&mut ctx)?;
            if ctx.used == before {
                return Err(Error::InvalidConfig(format!("{} made no evaluations in a step", self.config.algorithm)));
            }
            iteration += 1;
        }
        let best = ctx.best.ok_or(Error::EmptyInput("no evaluations"))?;
        Ok(RunResult {
            algorithm: self.config.algorithm,
            seed: self.config.seed,
            best_genes: best.genes,
            best_objective: best.objective,
            best_info: best.info,
            eval_count: ctx.used,
            initial_mean,
            trace,
            snapshots,
            wall_time: start.elapsed().as_secs_f64(),
        })
    }
}

fn record<T: Real>(
    trace: &mut Vec<TracePoint>,
    snapshots: Option<&mut Vec<Vec<Vec<f64>>>>,
    iteration: usize,
    evaluations: usize,
    best_objective: f64,
    positions: &[Vec<T>],
) {
    trace.push(TracePoint {
        iteration,
        evaluations,
        best_objective,
        population_size: positions.len(),
        diversity: population_diversity(positions).as_f64(),
        dispersion: median_dispersion(positions).as_f64(),
    });
    if let Some(s) = snapshots {
        s.push(positions.iter().map(|x| x.iter().map(|v| v.as_f64()).collect()).collect());
    }
}

/// Convenience: one seeded run of `config` on the JPEG objective.
pub fn run(config: OptimizerConfig, objective: &JpegObjective) -> Result<RunResult<Evaluation>> {
    make_optimizer::<f64>(config)?.run(objective)
}
