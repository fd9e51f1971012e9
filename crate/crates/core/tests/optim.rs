mod common;

use proptest::prelude::*;
use qtopt::optim::{Problem, RunResult};
use qtopt::{make_optimizer, AlgorithmId, JpegObjective, ObjectiveSpec, OptimizerConfig};

use common::{textured, toy_problem};

fn run(config: OptimizerConfig, dim: usize) -> RunResult<()> {
    make_optimizer::<f64>(config).unwrap().run(&toy_problem(dim)).unwrap()
}

fn strip_time<I: Clone>(r: &RunResult<I>) -> RunResult<I> {
    RunResult { wall_time: 0.0, ..r.clone() }
}

#[test]
fn every_algorithm_spends_exactly_the_budget_and_never_regresses() {
    for algo in AlgorithmId::ALL {
        for budget in [20, 47, 300] {
            let mut c = OptimizerConfig::new(algo, 3);
            c.eval_budget = budget;
            let r = run(c, 6);
            assert_eq!(r.eval_count, budget, "{algo}");
            assert_eq!(r.trace[0].evaluations, 20, "{algo}: initial pass");
            assert!(r.trace.windows(2).all(|w| w[1].best_objective <= w[0].best_objective), "{algo}");
            assert!(r.trace.windows(2).all(|w| w[1].evaluations > w[0].evaluations), "{algo}");
            assert_eq!(r.trace.last().unwrap().evaluations, budget);
            assert_eq!(r.trace.last().unwrap().best_objective, r.best_objective);
            let (f, ()) = toy_problem(6).evaluate(&r.best_genes).unwrap();
            assert_eq!(f, r.best_objective, "{algo}: best is re-evaluable");
            assert!(r.best_genes.iter().all(|g| (1..=255).contains(g)));
        }
    }
}

#[test]
fn budget_equal_to_population_is_one_pass() {
    for algo in AlgorithmId::ALL {
        let mut c = OptimizerConfig::new(algo, 9);
        c.eval_budget = 20;
        c.record_snapshots = true;
        let r = run(c, 4);
        assert_eq!(r.trace.len(), 1);
        let snap = &r.snapshots.unwrap()[0];
        let problem = toy_problem(4);
        let best = snap
            .iter()
            .map(|x| problem.evaluate(&problem.bounds().repair(x).unwrap()).unwrap().0)
            .fold(f64::INFINITY, f64::min);
        assert_eq!(best, r.best_objective, "{algo}");
    }
}

#[test]
fn seeded_runs_are_reproducible() {
    for algo in AlgorithmId::ALL {
        let c = OptimizerConfig { eval_budget: 200, ..OptimizerConfig::new(algo, 42) };
        let a = serde_json::to_string(&strip_time(&run(c.clone(), 5))).unwrap();
        let b = serde_json::to_string(&strip_time(&run(c.clone(), 5))).unwrap();
        assert_eq!(a, b, "{algo}");
        let other = serde_json::to_string(&strip_time(&run(OptimizerConfig { seed: 43, ..c }, 5))).unwrap();
        assert_ne!(a, other, "{algo}: seed has no effect");
    }
}

#[test]
fn single_precision_scalar_runs() {
    for algo in [AlgorithmId::Ga, AlgorithmId::Jade, AlgorithmId::Hpso, AlgorithmId::LevyEs] {
        let c = OptimizerConfig { eval_budget: 200, ..OptimizerConfig::new(algo, 1) };
        let r = make_optimizer::<f32>(c).unwrap().run(&toy_problem(5)).unwrap();
        assert_eq!(r.eval_count, 200);
        assert!(r.best_objective < r.initial_mean);
    }
}

#[test]
fn invalid_configs_are_rejected() {
    let base = OptimizerConfig::new(AlgorithmId::De, 0);
    assert!(make_optimizer::<f64>(OptimizerConfig { eval_budget: 19, ..base.clone() }).is_err());
    assert!(make_optimizer::<f64>(OptimizerConfig { population_size: 3, eval_budget: 10, ..base.clone() }).is_err());
    assert!(make_optimizer::<f64>(base.clone().with_param("bogus", 1.0)).is_err());
    assert!(make_optimizer::<f64>(base.clone().with_param("cr", 1.5)).is_err());
    let d = make_optimizer::<f64>(OptimizerConfig::new(AlgorithmId::Ga, 0)).unwrap();
    assert_eq!((d.config().population_size, d.config().eval_budget), (20, 1000));
    assert!("NOPE".parse::<AlgorithmId>().is_err());
}

/// Objective multiset of each recorded population, sorted ascending.
fn population_objectives(r: &RunResult<()>, dim: usize) -> Vec<Vec<f64>> {
    let problem = toy_problem(dim);
    r.snapshots
        .as_ref()
        .unwrap()
        .iter()
        .map(|pop| {
            let mut f: Vec<f64> = pop
                .iter()
                .map(|x| problem.evaluate(&problem.bounds().repair(x).unwrap()).unwrap().0)
                .collect();
            f.sort_by(f64::total_cmp);
            f
        })
        .collect()
}

#[test]
fn selection_only_ga_never_worsens_the_population() {
    for (algo, extra) in [(AlgorithmId::Ga, None), (AlgorithmId::Ma, Some("local_search"))] {
        let mut c = OptimizerConfig::new(algo, 4).with_param("pc", 0.0).with_param("pm", 0.0);
        if let Some(k) = extra {
            c = c.with_param(k, 0.0);
        }
        c.eval_budget = 400;
        c.record_snapshots = true;
        let pops = population_objectives(&run(c, 5), 5);
        for w in pops.windows(2) {
            assert!(w[1].iter().zip(&w[0]).all(|(a, b)| a <= b), "{algo}");
        }
    }
}

#[test]
fn es_without_step_size_keeps_its_best() {
    let c = OptimizerConfig { eval_budget: 300, ..OptimizerConfig::new(AlgorithmId::Es, 8) }.with_param("sigma", 0.0);
    let r = run(c, 5);
    assert!(r.trace.iter().all(|t| t.best_objective == r.trace[0].best_objective));
}

#[test]
fn diversity_is_traced() {
    let mut c = OptimizerConfig::new(AlgorithmId::Pso, 2);
    c.eval_budget = 200;
    let r = run(c, 5);
    assert!(r.trace.iter().all(|t| t.diversity >= 0.0 && t.dispersion >= 0.0));
    assert!(r.trace[0].diversity > 0.0);
}

#[test]
fn jpeg_objective_run_reports_a_consistent_best() {
    let image = textured(32, 24, 3, 1);
    let objective = JpegObjective::new(&ObjectiveSpec::new(image, 1500)).unwrap();
    let c = OptimizerConfig { eval_budget: 60, ..OptimizerConfig::new(AlgorithmId::Hpso, 1) };
    let r = qtopt::optim::run(c, &objective).unwrap();
    assert_eq!(objective.eval_count(), 60);
    assert_eq!(r.best_info.objective, r.best_objective);
    let again = objective.evaluate(&qtopt::Candidate::new(r.best_genes.clone()).unwrap()).unwrap();
    assert_eq!(again, r.best_info);
    let recomputed = (r.best_info.file_size as f64 - 1500.0).abs() / 1500.0 + 10.0 / r.best_info.psnr;
    assert!((recomputed - r.best_objective).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn budget_and_monotonicity_hold_for_any_seed(
        algo in prop::sample::select(AlgorithmId::ALL.to_vec()),
        seed in any::<u64>(),
        np in 4usize..30,
        extra in 0usize..80,
    ) {
        let c = OptimizerConfig { population_size: np, eval_budget: np + extra, ..OptimizerConfig::new(algo, seed) };
        let r = run(c, 3);
        prop_assert_eq!(r.eval_count, np + extra);
        prop_assert!(r.trace.windows(2).all(|w| w[1].best_objective <= w[0].best_objective));
        prop_assert!(r.best_genes.iter().all(|g| (1..=255).contains(g)));
    }
}
