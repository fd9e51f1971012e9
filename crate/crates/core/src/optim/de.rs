//! Differential evolution and its adaptive variants.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Cauchy, Distribution, Normal};

use crate::candidate::Bounds;
use crate::error::Result;
use crate::scalar::Real;

use super::util::{clamp, lit, pick, ranked, uniform, Population};
use super::{Evaluator, OptimizerConfig, Strategy};

/// `x_r1 + F (x_r2 − x_r3)`.
pub(crate) fn rand1<T: Real>(r1: &[T], r2: &[T], r3: &[T], f: T) -> Vec<T> {
    r1.iter().zip(r2).zip(r3).map(|((&a, &b), &c)| a + f * (b - c)).collect()
}

/// `x_i + F (x_best − x_i) + F (x_r1 − x_r2)`; also JADE's current-to-pbest.
pub(crate) fn current_to_best<T: Real>(x: &[T], best: &[T], r1: &[T], r2: &[T], f: T) -> Vec<T> {
    (0..x.len()).map(|j| x[j] + f * (best[j] - x[j]) + f * (r1[j] - r2[j])).collect()
}

/// `x_i + K (x_r1 − x_i) + F (x_r2 − x_r3)`.
pub(crate) fn current_to_rand<T: Real>(x: &[T], r1: &[T], r2: &[T], r3: &[T], k: T, f: T) -> Vec<T> {
    (0..x.len()).map(|j| x[j] + k * (r1[j] - x[j]) + f * (r2[j] - r3[j])).collect()
}

/// Binomial crossover; gene `j_rand` always comes from the mutant.
pub(crate) fn binomial<T: Real>(rng: &mut ChaCha8Rng, target: &[T], mutant: &[T], cr: f64) -> Vec<T> {
    let jrand = rng.random_range(0..target.len());
    (0..target.len())
        .map(|j| if j == jrand || uniform(rng) < cr { mutant[j] } else { target[j] })
        .collect()
}

/// Greedy replacement; returns which trials were accepted.
fn select<T: Real>(pop: &mut Population<T>, trials: Vec<Vec<T>>, f: &[f64]) -> Vec<bool> {
    trials
        .into_iter()
        .zip(f)
        .enumerate()
        .map(|(i, (u, &fu))| {
            let ok = fu <= pop.f[i];
            if ok {
                pop.x[i] = u;
                pop.f[i] = fu;
            }
            ok
        })
        .collect()
}

pub(crate) struct De<T> {
    np: usize,
    f: f64,
    cr: f64,
    rand1_only: bool,
    bounds: Bounds,
    pop: Population<T>,
}

impl<T: Real> De<T> {
    pub fn new(np: usize, c: &OptimizerConfig) -> Self {
        Self {
            np,
            f: c.param("f"),
            cr: c.param("cr"),
            rand1_only: c.param("strategy").round() as i32 == 1,
            bounds: Bounds::default(),
            pop: Population::empty(),
        }
    }
}

impl<T: Real> Strategy<T> for De<T> {
    fn init(&mut self, ev: &mut dyn Evaluator<T>) -> Result<()> {
        self.bounds = ev.bounds().clone();
        self.pop = Population::random(ev, self.np)?;
        Ok(())
    }

    fn step(&mut self, ev: &mut dyn Evaluator<T>) -> Result<()> {
        let rng = ev.rng();
        let x = &self.pop.x;
        let trials: Vec<Vec<T>> = (0..self.np)
            .map(|i| {
                let r = pick(rng, self.np, 3, &[i]);
                let v = if self.rand1_only {
                    rand1(&x[r[0]], &x[r[1]], &x[r[2]], lit(self.f))
                } else {
                    let k = lit(uniform(rng));
                    current_to_rand(&x[i], &x[r[0]], &x[r[1]], &x[r[2]], k, lit(self.f))
                };
                let mut u = binomial(rng, &x[i], &v, self.cr);
                clamp(&self.bounds, &mut u);
                u
            })
            .collect();
        let f = ev.evaluate(&trials)?;
        select(&mut self.pop, trials, &f);
        Ok(())
    }

    fn positions(&self) -> &[Vec<T>] {
        &self.pop.x
    }
}

/// Two mutation strategies (rand/1 and current-to-best/1) chosen by learned
/// success rates; F ~ N(f_mean, f_sd), CR ~ N(CRm, 0.1) with CRm learned.
pub(crate) struct Sade<T> {
    np: usize,
    f_mean: f64,
    f_sd: f64,
    cr_mean: f64,
    period: usize,
    p1: f64,
    successes: [usize; 2],
    failures: [usize; 2],
    good_cr: Vec<f64>,
    generation: usize,
    bounds: Bounds,
    pop: Population<T>,
}

impl<T: Real> Sade<T> {
    pub fn new(np: usize, c: &OptimizerConfig) -> Self {
        Self {
            np,
            f_mean: c.param("f_mean"),
            f_sd: c.param("f_sd"),
            cr_mean: c.param("cr_mean"),
            period: c.param("learning_period").round() as usize,
            p1: 0.5,
            successes: [0; 2],
            failures: [0; 2],
            good_cr: Vec::new(),
            generation: 0,
            bounds: Bounds::default(),
            pop: Population::empty(),
        }
    }

    fn learn(&mut self) {
        let [s1, s2] = self.successes.map(|v| v as f64);
        let [f1, f2] = self.failures.map(|v| v as f64);
        let denom = s2 * (s1 + f1) + s1 * (s2 + f2);
        if denom > 0.0 {
            self.p1 = (s1 * (s2 + f2) / denom).clamp(0.05, 0.95);
        }
        if !self.good_cr.is_empty() {
            self.cr_mean = self.good_cr.iter().sum::<f64>() / self.good_cr.len() as f64;
        }
        self.successes = [0; 2];
        self.failures = [0; 2];
        self.good_cr.clear();
    }
}

impl<T: Real> Strategy<T> for Sade<T> {
    fn init(&mut self, ev: &mut dyn Evaluator<T>) -> Result<()> {
        self.bounds = ev.bounds().clone();
        self.pop = Population::random(ev, self.np)?;
        Ok(())
    }

    fn step(&mut self, ev: &mut dyn Evaluator<T>) -> Result<()> {
        let rng = ev.rng();
        let best = self.pop.best();
        let f_dist = Normal::new(self.f_mean, self.f_sd).expect("validated sd");
        let cr_dist = Normal::new(self.cr_mean, 0.1).expect("positive sd");
        let x = &self.pop.x;
        let mut kinds = Vec::with_capacity(self.np);
        let mut crs = Vec::with_capacity(self.np);
        let trials: Vec<Vec<T>> = (0..self.np)
            .map(|i| {
                let kind = usize::from(uniform(rng) >= self.p1);
                let f: f64 = f_dist.sample(rng);
                let cr = cr_dist.sample(rng).clamp(0.0, 1.0);
                let v = if kind == 0 {
                    let r = pick(rng, self.np, 3, &[i]);
                    rand1(&x[r[0]], &x[r[1]], &x[r[2]], lit(f))
                } else {
                    let r = pick(rng, self.np, 2, &[i]);
                    current_to_best(&x[i], &x[best], &x[r[0]], &x[r[1]], lit(f))
                };
                kinds.push(kind);
                crs.push(cr);
                let mut u = binomial(rng, &x[i], &v, cr);
                clamp(&self.bounds, &mut u);
                u
            })
            .collect();
        let f = ev.evaluate(&trials)?;
        for (i, ok) in select(&mut self.pop, trials, &f).into_iter().enumerate() {
            if ok {
                self.successes[kinds[i]] += 1;
                self.good_cr.push(crs[i]);
            } else {
                self.failures[kinds[i]] += 1;
            }
        }
        self.generation += 1;
        if self.generation.is_multiple_of(self.period) {
            self.learn();
        }
        Ok(())
    }

    fn positions(&self) -> &[Vec<T>] {
        &self.pop.x
    }
}

#[cfg_attr(not(test), allow(dead_code))]
/// One JADE trial with the random choices that produced it.
pub(crate) struct JadeTrial<T> {
    pub u: Vec<T>,
    pub f: f64,
    pub cr: f64,
    pub pbest: usize,
    pub r1: usize,
    /// Index into population ++ archive.
    pub r2: usize,
}

pub(crate) struct Jade<T> {
    np: usize,
    mu_f: f64,
    mu_cr: f64,
    p: f64,
    c: f64,
    use_archive: bool,
    archive: Vec<Vec<T>>,
    bounds: Bounds,
    pop: Population<T>,
}

impl<T: Real> Jade<T> {
    pub fn new(np: usize, c: &OptimizerConfig) -> Self {
        Self {
            np,
            mu_f: c.param("mu_f"),
            mu_cr: c.param("mu_cr"),
            p: c.param("p"),
            c: c.param("c"),
            use_archive: c.param("archive") >= 0.5,
            archive: Vec::new(),
            bounds: Bounds::default(),
            pop: Population::empty(),
        }
    }

    /// Size of the elite pool `pbest` is drawn from.
    pub(crate) fn top(&self) -> usize {
        ((self.p * self.np as f64).round() as usize).clamp(1, self.np)
    }

    pub(crate) fn trial(&self, rng: &mut ChaCha8Rng, i: usize, order: &[usize]) -> JadeTrial<T> {
        let cr = Normal::new(self.mu_cr, 0.1).expect("positive sd").sample(rng).clamp(0.0, 1.0);
        let cauchy = Cauchy::new(self.mu_f, 0.1).expect("positive scale");
        let f = loop {
            let f: f64 = cauchy.sample(rng);
            if f > 0.0 {
                break f.min(1.0);
            }
        };
        let x = &self.pop.x;
        let pbest = order[rng.random_range(0..self.top())];
        let r1 = pick(rng, self.np, 1, &[i])[0];
        let r2 = pick(rng, self.np + self.archive.len(), 1, &[i, r1])[0];
        let x2 = if r2 < self.np { &x[r2] } else { &self.archive[r2 - self.np] };
        let v = current_to_best(&x[i], &x[pbest], &x[r1], x2, lit(f));
        let mut u = binomial(rng, &x[i], &v, cr);
        clamp(&self.bounds, &mut u);
        JadeTrial { u, f, cr, pbest, r1, r2 }
    }
}

fn lehmer(v: &[f64]) -> f64 {
    let s: f64 = v.iter().sum();
    if s == 0.0 {
        0.0
    } else {
        v.iter().map(|x| x * x).sum::<f64>() / s
    }
}

impl<T: Real> Strategy<T> for Jade<T> {
    fn init(&mut self, ev: &mut dyn Evaluator<T>) -> Result<()> {
        self.bounds = ev.bounds().clone();
        self.pop = Population::random(ev, self.np)?;
        Ok(())
    }

    fn step(&mut self, ev: &mut dyn Evaluator<T>) -> Result<()> {
        let order = ranked(&self.pop.f);
        let rng = ev.rng();
        let trials: Vec<JadeTrial<T>> = (0..self.np).map(|i| self.trial(rng, i, &order)).collect();
        let xs: Vec<Vec<T>> = trials.iter().map(|t| t.u.clone()).collect();
        let f = ev.evaluate(&xs)?;
        let (mut sf, mut scr) = (Vec::new(), Vec::new());
        for (i, (t, &fu)) in trials.into_iter().zip(&f).enumerate() {
            if fu < self.pop.f[i] {
                let old = std::mem::replace(&mut self.pop.x[i], t.u);
                if self.use_archive {
                    self.archive.push(old);
                }
                self.pop.f[i] = fu;
                sf.push(t.f);
                scr.push(t.cr);
            }
        }
        let rng = ev.rng();
        while self.archive.len() > self.np {
            let k = rng.random_range(0..self.archive.len());
            self.archive.swap_remove(k);
        }
        if !sf.is_empty() {
            self.mu_cr = (1.0 - self.c) * self.mu_cr + self.c * scr.iter().sum::<f64>() / scr.len() as f64;
            self.mu_f = (1.0 - self.c) * self.mu_f + self.c * lehmer(&sf);
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

    fn rows() -> Vec<Vec<f64>> {
        vec![vec![1.0, 2.0, 3.0], vec![4.0, 4.0, 4.0], vec![10.0, 0.0, 5.0], vec![7.0, 7.0, 1.0], vec![2.0, 9.0, 2.0]]
    }

    #[test]
    fn zero_scale_gives_base_vector() {
        let x = rows();
        assert_eq!(rand1(&x[0], &x[1], &x[2], 0.0), x[0]);
    }

    #[test]
    fn full_crossover_takes_mutant() {
        let x = rows();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(binomial(&mut rng, &x[0], &x[1], 1.0), x[1]);
        // With CR = 0 exactly one gene comes from the mutant.
        let u = binomial(&mut rng, &x[0], &x[1], 0.0);
        assert_eq!(u.iter().zip(&x[1]).filter(|(a, b)| a == b).count(), 1);
    }

    #[test]
    fn jade_with_single_elite_and_no_archive_is_current_to_best() {
        let c = OptimizerConfig::new(AlgorithmId::Jade, 0).with_param("p", 0.0).with_param("archive", 0.0);
        let mut j = Jade::<f64>::new(5, &c);
        j.bounds = Bounds::uniform(3, -100, 100).unwrap();
        j.pop = Population { x: rows(), f: vec![3.0, 1.0, 4.0, 1.5, 9.0] };
        j.mu_cr = 1.0;
        assert_eq!(j.top(), 1);
        let order = ranked(&j.pop.f);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for i in 0..5 {
            let t = j.trial(&mut rng, i, &order);
            assert_eq!(t.pbest, 1);
            assert!(t.r2 < 5, "empty archive: r2 comes from the population");
            let x = &j.pop.x;
            let mut v = current_to_best(&x[i], &x[1], &x[t.r1], &x[t.r2], t.f);
            clamp(&j.bounds, &mut v);
            for (g, (&u, &m)) in t.u.iter().zip(&v).enumerate() {
                assert!(u == m || u == x[i][g]);
            }
        }
    }
}
