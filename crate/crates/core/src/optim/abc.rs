//! Artificial bee colony: employed, onlooker and scout phases.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::candidate::Bounds;
use crate::error::Result;
use crate::scalar::Real;

use super::util::{clamp, lit, pick, random_position, uniform, Population};
use super::{Evaluator, OptimizerConfig, Strategy};

/// Selection weight of a source; larger is better.
pub(crate) fn fitness(f: f64) -> f64 {
    if f >= 0.0 {
        1.0 / (1.0 + f)
    } else {
        1.0 + f.abs()
    }
}

/// Index drawn with probability proportional to `weights`.
pub(crate) fn roulette<R: Rng + ?Sized>(rng: &mut R, weights: &[f64]) -> usize {
    let total: f64 = weights.iter().sum();
    let mut r = rng.random::<f64>() * total;
    for (i, &w) in weights.iter().enumerate() {
        if r < w {
            return i;
        }
        r -= w;
    }
    weights.len() - 1
}

/// `x_i + φ (x_r1 − x_r2)` on gene `j` only.
pub(crate) fn neighbour<T: Real>(x: &[T], r1: &[T], r2: &[T], j: usize, phi: f64) -> Vec<T> {
    let mut v = x.to_vec();
    v[j] = x[j] + lit::<T>(phi) * (r1[j] - r2[j]);
    v
}

pub(crate) struct Abc<T> {
    np: usize,
    limit_factor: f64,
    limit: usize,
    trials: Vec<usize>,
    bounds: Bounds,
    pop: Population<T>,
}

impl<T: Real> Abc<T> {
    pub fn new(np: usize, c: &OptimizerConfig) -> Self {
        Self {
            np,
            limit_factor: c.param("limit_factor"),
            limit: 0,
            trials: vec![0; np],
            bounds: Bounds::default(),
            pop: Population::empty(),
        }
    }

    fn propose(&self, rng: &mut ChaCha8Rng, i: usize) -> Vec<T> {
        let r = pick(rng, self.np, 2, &[i]);
        let j = rng.random_range(0..self.bounds.dim());
        let phi = 2.0 * uniform(rng) - 1.0;
        let mut v = neighbour(&self.pop.x[i], &self.pop.x[r[0]], &self.pop.x[r[1]], j, phi);
        clamp(&self.bounds, &mut v);
        v
    }

    fn greedy(&mut self, who: &[usize], cand: Vec<Vec<T>>, f: &[f64]) {
        for ((&i, v), &fv) in who.iter().zip(cand).zip(f) {
            if fv < self.pop.f[i] {
                self.pop.x[i] = v;
                self.pop.f[i] = fv;
                self.trials[i] = 0;
            } else {
                self.trials[i] += 1;
            }
        }
    }
}

impl<T: Real> Strategy<T> for Abc<T> {
    fn init(&mut self, ev: &mut dyn Evaluator<T>) -> Result<()> {
        self.bounds = ev.bounds().clone();
        self.limit = (self.limit_factor * (self.np * self.bounds.dim()) as f64).round() as usize;
        self.pop = Population::random(ev, self.np)?;
        Ok(())
    }

    fn step(&mut self, ev: &mut dyn Evaluator<T>) -> Result<()> {
        // Employed bees.
        let who: Vec<usize> = (0..self.np).collect();
        let cand: Vec<Vec<T>> = who.iter().map(|&i| self.propose(ev.rng(), i)).collect();
        let f = ev.evaluate(&cand)?;
        self.greedy(&who, cand, &f);

        // Onlookers pick sources by fitness.
        if ev.remaining() > 0 {
            let weights: Vec<f64> = self.pop.f.iter().map(|&f| fitness(f)).collect();
            let who: Vec<usize> = (0..self.np).map(|_| roulette(ev.rng(), &weights)).collect();
            let cand: Vec<Vec<T>> = who.iter().map(|&i| self.propose(ev.rng(), i)).collect();
            let f = ev.evaluate(&cand)?;
            self.greedy(&who, cand, &f);
        }

        // Scouts replace exhausted sources.
        let exhausted: Vec<usize> = (0..self.np).filter(|&i| self.trials[i] > self.limit).collect();
        if !exhausted.is_empty() && ev.remaining() > 0 {
            let fresh: Vec<Vec<T>> = exhausted.iter().map(|_| random_position(&self.bounds, ev.rng())).collect();
            let f = ev.evaluate(&fresh)?;
            for ((&i, x), fx) in exhausted.iter().zip(fresh).zip(f) {
                self.pop.x[i] = x;
                self.pop.f[i] = fx;
                self.trials[i] = 0;
            }
        }
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
    fn zero_phi_leaves_source() {
        let x = [1.0, 2.0, 3.0];
        assert_eq!(neighbour(&x, &[9.0, 9.0, 9.0], &[0.0, 0.0, 0.0], 1, 0.0), x.to_vec());
        assert_eq!(neighbour(&x, &[9.0, 9.0, 9.0], &[0.0, 0.0, 0.0], 1, 0.5), vec![1.0, 6.5, 3.0]);
    }

    #[test]
    fn onlooker_choice_follows_fitness() {
        use rand::SeedableRng;
        let objectives = [0.1, 0.5, 1.0, 3.0];
        let w: Vec<f64> = objectives.iter().map(|&f| fitness(f)).collect();
        let total: f64 = w.iter().sum();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let n = 100_000;
        let mut counts = [0usize; 4];
        for _ in 0..n {
            counts[roulette(&mut rng, &w)] += 1;
        }
        let chi2: f64 = counts
            .iter()
            .zip(&w)
            .map(|(&o, &wi)| {
                let e = n as f64 * wi / total;
                (o as f64 - e).powi(2) / e
            })
            .sum();
        // 99.9th percentile of χ² with 3 degrees of freedom.
        assert!(chi2 < 16.27, "chi2 = {chi2}, counts {counts:?}");
    }

    #[test]
    fn zero_limit_sends_stalled_sources_scouting() {
        use super::super::mock::Mock;
        let c = OptimizerConfig::new(super::super::AlgorithmId::Abc, 0).with_param("limit_factor", 0.0);
        let mut abc = Abc::<f64>::new(4, &c);
        // A constant objective never improves, so every visited source stalls.
        let mut ev = Mock::new(2, 1000, |_| 1.0);
        abc.init(&mut ev).unwrap();
        abc.step(&mut ev).unwrap();
        assert_eq!(ev.batches.len(), 4, "init, employed, onlooker, scout");
        assert_eq!(ev.batches[3].len(), 4);
        assert!(abc.trials.iter().all(|&t| t == 0));
    }

    #[test]
    fn equal_candidate_counts_as_trial() {
        let c = OptimizerConfig::new(super::super::AlgorithmId::Abc, 0);
        let mut abc = Abc::<f64>::new(4, &c);
        abc.pop = Population { x: vec![vec![1.0]; 4], f: vec![1.0; 4] };
        abc.greedy(&[2], vec![vec![1.0]], &[1.0]);
        assert_eq!(abc.trials, vec![0, 0, 1, 0]);
        abc.greedy(&[2], vec![vec![0.0]], &[0.5]);
        assert_eq!(abc.trials[2], 0);
    }
}
