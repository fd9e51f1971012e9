//! Harmony search: one new harmony per iteration, replacing the worst.

use rand::Rng;

use crate::candidate::Bounds;
use crate::error::Result;
use crate::scalar::Real;

use super::util::{clamp, lit, Population};
use super::{Evaluator, OptimizerConfig, Strategy};

pub(crate) struct Hs<T> {
    np: usize,
    hmcr: f64,
    par: f64,
    bandwidth: f64,
    bounds: Bounds,
    pop: Population<T>,
}

impl<T: Real> Hs<T> {
    pub fn new(np: usize, c: &OptimizerConfig) -> Self {
        Self {
            np,
            hmcr: c.param("hmcr"),
            par: c.param("par"),
            bandwidth: c.param("bandwidth"),
            bounds: Bounds::default(),
            pop: Population::empty(),
        }
    }

    pub(crate) fn improvise<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<T> {
        let mut h: Vec<T> = (0..self.bounds.dim())
            .map(|j| {
                if rng.random::<f64>() < self.hmcr {
                    let mut v = self.pop.x[rng.random_range(0..self.pop.len())][j];
                    if rng.random::<f64>() < self.par {
                        let dir = if rng.random::<bool>() { 1.0 } else { -1.0 };
                        v = v + lit(dir * self.bandwidth);
                    }
                    v
                } else {
                    let (lo, hi) = self.bounds.pairs()[j];
                    lit(rng.random_range(lo..=hi) as f64)
                }
            })
            .collect();
        clamp(&self.bounds, &mut h);
        h
    }

    fn worst(&self) -> usize {
        let f = &self.pop.f;
        (0..f.len()).fold(0, |w, i| if f[i] > f[w] { i } else { w })
    }
}

impl<T: Real> Strategy<T> for Hs<T> {
    fn init(&mut self, ev: &mut dyn Evaluator<T>) -> Result<()> {
        self.bounds = ev.bounds().clone();
        self.pop = Population::random(ev, self.np)?;
        Ok(())
    }

    fn step(&mut self, ev: &mut dyn Evaluator<T>) -> Result<()> {
        let h = self.improvise(ev.rng());
        let f = ev.evaluate(std::slice::from_ref(&h))?;
        let w = self.worst();
        if f[0] < self.pop.f[w] {
            self.pop.x[w] = h;
            self.pop.f[w] = f[0];
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
    use crate::optim::AlgorithmId;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn hs(hmcr: f64, par: f64) -> Hs<f64> {
        let c = OptimizerConfig::new(AlgorithmId::Hs, 0).with_param("hmcr", hmcr).with_param("par", par);
        let mut h = Hs::new(4, &c);
        h.bounds = Bounds::uniform(6, 1, 255).unwrap();
        h.pop = Population { x: (0..4).map(|i| vec![10.0 * (i + 1) as f64; 6]).collect(), f: vec![0.0; 4] };
        h
    }

    #[test]
    fn full_memory_without_adjustment_resamples_memory() {
        let h = hs(1.0, 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let new = h.improvise(&mut rng);
            assert!(new.iter().all(|v| [10.0, 20.0, 30.0, 40.0].contains(v)));
        }
    }

    #[test]
    fn no_memory_is_uniform_random() {
        let h = hs(0.0, 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let draws: Vec<f64> = (0..200).flat_map(|_| h.improvise(&mut rng)).collect();
        let outside = draws.iter().filter(|v| ![10.0, 20.0, 30.0, 40.0].contains(*v)).count();
        assert!(outside > draws.len() * 9 / 10);
        assert!(draws.iter().all(|&v| (1.0..=255.0).contains(&v) && v.fract() == 0.0));
    }
}
