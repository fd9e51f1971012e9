//! DE with self-adaptive population size (absolute encoding): each individual
//! carries its own F, CR and population-size vote π; the next generation has
//! `round(mean π)` members.

use crate::candidate::Bounds;
use crate::error::Result;
use crate::scalar::Real;

use super::de::{binomial, rand1};
use super::util::{clamp, lit, normal, pick, ranked, uniform, Population};
use super::{Evaluator, OptimizerConfig, Strategy};

pub(crate) const MIN_POPULATION: usize = 4;

#[derive(Debug, Clone, Copy)]
struct Genes {
    f: f64,
    cr: f64,
    pi: f64,
}

pub(crate) struct SapDe<T> {
    np: usize,
    max_size: usize,
    params: Vec<Genes>,
    bounds: Bounds,
    pop: Population<T>,
}

impl<T: Real> SapDe<T> {
    pub fn new(np: usize, c: &OptimizerConfig) -> Self {
        let max_size = ((c.param("max_growth") * np as f64).round() as usize).max(MIN_POPULATION);
        Self { np, max_size, params: Vec::new(), bounds: Bounds::default(), pop: Population::empty() }
    }

    /// Target size from the mean vote, clamped to `[4, max]`.
    pub(crate) fn next_size(votes: impl Iterator<Item = f64>, max: usize) -> usize {
        let (sum, n) = votes.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
        let mean = if n == 0 { MIN_POPULATION as f64 } else { sum / n as f64 };
        (mean.round().max(0.0) as usize).clamp(MIN_POPULATION, max)
    }

    fn resize(&mut self) {
        let size = Self::next_size(self.params.iter().map(|g| g.pi), self.max_size);
        let order = ranked(&self.pop.f);
        if size < self.pop.len() {
            let keep = &order[..size];
            self.pop.x = keep.iter().map(|&i| self.pop.x[i].clone()).collect();
            self.pop.f = keep.iter().map(|&i| self.pop.f[i]).collect();
            self.params = keep.iter().map(|&i| self.params[i]).collect();
        } else {
            // Grow by copying the best members; copies need no evaluation.
            let n = self.pop.len();
            for k in 0..size - n {
                let i = order[k % n];
                self.pop.x.push(self.pop.x[i].clone());
                self.pop.f.push(self.pop.f[i]);
                self.params.push(self.params[i]);
            }
        }
    }
}

impl<T: Real> Strategy<T> for SapDe<T> {
    fn init(&mut self, ev: &mut dyn Evaluator<T>) -> Result<()> {
        self.bounds = ev.bounds().clone();
        self.pop = Population::random(ev, self.np)?;
        let rng = ev.rng();
        self.params = (0..self.np)
            .map(|_| Genes { f: uniform(rng), cr: uniform(rng), pi: (self.np as f64 + normal(rng)).round() })
            .collect();
        Ok(())
    }

    fn step(&mut self, ev: &mut dyn Evaluator<T>) -> Result<()> {
        let n = self.pop.len();
        let rng = ev.rng();
        let mut child_params = Vec::with_capacity(n);
        let trials: Vec<Vec<T>> = (0..n)
            .map(|i| {
                let r = pick(rng, n, 3, &[i]);
                let (a, b, c) = (self.params[r[0]], self.params[r[1]], self.params[r[2]]);
                let g = Genes {
                    f: (a.f + normal(rng) * (b.f - c.f)).abs().min(2.0),
                    cr: (a.cr + normal(rng) * (b.cr - c.cr)).clamp(0.0, 1.0),
                    pi: (a.pi + (normal(rng) * (b.pi - c.pi)).round()).clamp(MIN_POPULATION as f64, self.max_size as f64),
                };
                child_params.push(g);
                let x = &self.pop.x;
                let v = rand1(&x[r[0]], &x[r[1]], &x[r[2]], lit(g.f));
                let mut u = binomial(rng, &x[i], &v, g.cr);
                clamp(&self.bounds, &mut u);
                u
            })
            .collect();
        let f = ev.evaluate(&trials)?;
        for (i, (u, fu)) in trials.into_iter().zip(f).enumerate() {
            if fu <= self.pop.f[i] {
                self.pop.x[i] = u;
                self.pop.f[i] = fu;
                self.params[i] = child_params[i];
            }
        }
        self.resize();
        Ok(())
    }

    fn positions(&self) -> &[Vec<T>] {
        &self.pop.x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_vote_is_clamped() {
        assert_eq!(SapDe::<f64>::next_size([1.0, 2.0, 3.0].into_iter(), 200), 4);
        assert_eq!(SapDe::<f64>::next_size([20.0, 21.0].into_iter(), 200), 21);
        assert_eq!(SapDe::<f64>::next_size([900.0].into_iter(), 200), 200);
    }
}
