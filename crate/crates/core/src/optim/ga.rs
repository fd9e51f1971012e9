//! Genetic algorithm and its memetic variant.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::candidate::Bounds;
use crate::error::Result;
use crate::scalar::Real;

use super::util::{lit, pick, uniform, Population};
use super::{Evaluator, OptimizerConfig, Strategy};

pub(crate) struct Ga<T> {
    np: usize,
    pc: f64,
    pm: f64,
    tournament: usize,
    points: usize,
    /// Per-agent local search probability (memetic variant only).
    local_search: Option<f64>,
    bounds: Bounds,
    pop: Population<T>,
}

impl<T: Real> Ga<T> {
    pub fn new(np: usize, c: &OptimizerConfig, memetic: bool) -> Self {
        Self {
            np,
            pc: c.param("pc"),
            pm: c.param("pm"),
            tournament: c.param("tournament").round() as usize,
            points: c.param("crossover_points").round() as usize,
            local_search: memetic.then(|| c.param("local_search")),
            bounds: Bounds::default(),
            pop: Population::empty(),
        }
    }

    fn mutate(&self, rng: &mut ChaCha8Rng, x: &mut [T]) {
        for (i, v) in x.iter_mut().enumerate() {
            if uniform(rng) < self.pm {
                let (lo, hi) = self.bounds.pairs()[i];
                *v = lit(rng.random_range(lo..=hi) as f64);
            }
        }
    }

    fn hill_climb(&mut self, ev: &mut dyn Evaluator<T>, prob: f64) -> Result<()> {
        let rng = ev.rng();
        let mut who = Vec::new();
        let mut trial = Vec::new();
        for i in 0..self.pop.len() {
            if uniform(rng) < prob {
                let mut y = self.pop.x[i].clone();
                for v in y.iter_mut() {
                    *v = *v + lit((rng.random_range(0..3) - 1) as f64);
                }
                super::util::clamp(&self.bounds, &mut y);
                who.push(i);
                trial.push(y);
            }
        }
        let f = ev.evaluate(&trial)?;
        for ((&i, y), fy) in who.iter().zip(trial).zip(f) {
            if fy < self.pop.f[i] {
                self.pop.x[i] = y;
                self.pop.f[i] = fy;
            }
        }
        Ok(())
    }
}

/// Best of `size` distinct random entrants; the lower index wins ties.
pub(crate) fn tournament<R: Rng + ?Sized>(rng: &mut R, f: &[f64], size: usize) -> usize {
    let mut entrants = pick(rng, f.len(), size.min(f.len()), &[]);
    entrants.sort_unstable();
    let mut best = entrants[0];
    for &i in &entrants[1..] {
        if f[i] < f[best] {
            best = i;
        }
    }
    best
}

/// `k`-point crossover: segments between cut points alternate between parents.
pub(crate) fn crossover<T: Copy, R: Rng + ?Sized>(rng: &mut R, a: &[T], b: &[T], k: usize) -> (Vec<T>, Vec<T>) {
    let d = a.len();
    if d < 2 {
        return (a.to_vec(), b.to_vec());
    }
    let mut cuts: Vec<usize> = rand::seq::index::sample(rng, d - 1, k.min(d - 1)).into_iter().map(|c| c + 1).collect();
    cuts.sort_unstable();
    let (mut x, mut y) = (a.to_vec(), b.to_vec());
    let mut swap = false;
    let mut next = cuts.into_iter().peekable();
    for j in 0..d {
        while next.peek() == Some(&j) {
            swap = !swap;
            next.next();
        }
        if swap {
            x[j] = b[j];
            y[j] = a[j];
        }
    }
    (x, y)
}

impl<T: Real> Strategy<T> for Ga<T> {
    fn init(&mut self, ev: &mut dyn Evaluator<T>) -> Result<()> {
        self.bounds = ev.bounds().clone();
        self.pop = Population::random(ev, self.np)?;
        Ok(())
    }

    fn step(&mut self, ev: &mut dyn Evaluator<T>) -> Result<()> {
        let rng = ev.rng();
        let mut children = Vec::with_capacity(self.np + 1);
        while children.len() < self.np {
            let a = tournament(rng, &self.pop.f, self.tournament);
            let b = tournament(rng, &self.pop.f, self.tournament);
            let (mut x, mut y) = if uniform(rng) < self.pc {
                crossover(rng, &self.pop.x[a], &self.pop.x[b], self.points)
            } else {
                (self.pop.x[a].clone(), self.pop.x[b].clone())
            };
            self.mutate(rng, &mut x);
            self.mutate(rng, &mut y);
            children.push(x);
            children.push(y);
        }
        children.truncate(self.np);
        let f = ev.evaluate(&children)?;
        let n = f.len();
        self.pop.x.extend(children.into_iter().take(n));
        self.pop.f.extend(f);
        self.pop.truncate_best(self.np);

        if let Some(prob) = self.local_search {
            if ev.remaining() > 0 {
                self.hill_climb(ev, prob)?;
            }
        }
        Ok(())
    }

    fn positions(&self) -> &[Vec<T>] {
        &self.pop.x
    }
}
