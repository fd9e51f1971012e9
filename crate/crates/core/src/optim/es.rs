//! (μ+λ) evolution strategy with Gaussian or Lévy-flight mutation and the
//! one-fifth success rule.

use std::f64::consts::PI;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use statrs::function::gamma::gamma;

use crate::candidate::Bounds;
use crate::error::Result;
use crate::scalar::Real;

use super::util::{clamp, lit, normal, Population};
use super::{Evaluator, OptimizerConfig, Strategy};

/// Offspring evaluated between step-size adjustments.
const WINDOW: usize = 10;
const SHRINK: f64 = 0.817;
pub const LEVY_BETA: f64 = 1.5;

/// Heavy-tailed step by Mantegna's algorithm.
pub fn mantegna_step(rng: &mut ChaCha8Rng, beta: f64) -> f64 {
    let num = gamma(1.0 + beta) * (PI * beta / 2.0).sin();
    let den = gamma((1.0 + beta) / 2.0) * beta * 2f64.powf((beta - 1.0) / 2.0);
    let sigma_u = (num / den).powf(1.0 / beta);
    let u = normal(rng) * sigma_u;
    let v = normal(rng);
    u / v.abs().powf(1.0 / beta)
}

pub(crate) struct Es<T> {
    np: usize,
    offspring: usize,
    /// Step size as a fraction of each gene's range.
    sigma: f64,
    levy: bool,
    window: (usize, usize),
    bounds: Bounds,
    pop: Population<T>,
}

impl<T: Real> Es<T> {
    pub fn new(np: usize, c: &OptimizerConfig, levy: bool) -> Self {
        Self {
            np,
            offspring: ((c.param("lambda") * np as f64).round() as usize).max(1),
            sigma: c.param("sigma"),
            levy,
            window: (0, 0),
            bounds: Bounds::default(),
            pop: Population::empty(),
        }
    }

    fn adapt(&mut self, success: bool) {
        self.window.0 += success as usize;
        self.window.1 += 1;
        if self.window.1 == WINDOW {
            let rate = self.window.0 as f64 / WINDOW as f64;
            if rate > 0.2 {
                self.sigma /= SHRINK;
            } else if rate < 0.2 {
                self.sigma *= SHRINK;
            }
            self.sigma = self.sigma.min(1.0);
            self.window = (0, 0);
        }
    }
}

impl<T: Real> Strategy<T> for Es<T> {
    fn init(&mut self, ev: &mut dyn Evaluator<T>) -> Result<()> {
        self.bounds = ev.bounds().clone();
        self.pop = Population::random(ev, self.np)?;
        Ok(())
    }

    fn step(&mut self, ev: &mut dyn Evaluator<T>) -> Result<()> {
        let rng = ev.rng();
        let mut parents = Vec::with_capacity(self.offspring);
        let children: Vec<Vec<T>> = (0..self.offspring)
            .map(|_| {
                let p = rng.random_range(0..self.pop.len());
                parents.push(p);
                let mut y: Vec<T> = self.pop.x[p]
                    .iter()
                    .enumerate()
                    .map(|(j, &x)| {
                        let z = if self.levy { mantegna_step(rng, LEVY_BETA) } else { normal(rng) };
                        x + lit(self.sigma * self.bounds.range(j) * z)
                    })
                    .collect();
                clamp(&self.bounds, &mut y);
                y
            })
            .collect();
        let f = ev.evaluate(&children)?;
        for (k, &fc) in f.iter().enumerate() {
            let success = fc < self.pop.f[parents[k]];
            self.adapt(success);
        }
        let n = f.len();
        self.pop.x.extend(children.into_iter().take(n));
        self.pop.f.extend(f);
        self.pop.truncate_best(self.np);
        Ok(())
    }

    fn positions(&self) -> &[Vec<T>] {
        &self.pop.x
    }
}
