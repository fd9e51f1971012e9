//! Runs every algorithm on the separable toy objective and prints how far
//! each gets relative to its initial population.
use qtopt::optim::SphereProblem;
use qtopt::{make_optimizer, AlgorithmId, Bounds, OptimizerConfig};

fn main() -> qtopt::Result<()> {
    let dim: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(10);
    let seeds: u64 = std::env::args().nth(2).and_then(|s| s.parse().ok()).unwrap_or(5);
    let bounds = Bounds::uniform(dim, 1, 255)?;
    let target: Vec<i32> = (0..dim).map(|i| 20 + (i as i32 * 37) % 200).collect();
    let problem = SphereProblem::new(target, bounds)?;
    for algo in AlgorithmId::ALL {
        let mut ratios = Vec::new();
        for seed in 0..seeds {
            let opt = make_optimizer::<f64>(OptimizerConfig::new(algo, seed))?;
            let res = opt.run(&problem)?;
            let init = res.initial_mean;
            ratios.push(res.best_objective / init);
        }
        ratios.sort_by(f64::total_cmp);
        let pass = ratios.iter().filter(|&&r| r <= 0.01).count();
        println!(
            "{:<8} median {:.5} worst {:.5} pass {}/{}",
            algo.name(),
            ratios[ratios.len() / 2],
            ratios[ratios.len() - 1],
            pass,
            ratios.len()
        );
    }
    Ok(())
}
