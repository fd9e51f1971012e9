//! Grey wolf, whale and sine-cosine optimisers. Positions move
//! unconditionally; the leaders are the best points found so far.

use std::f64::consts::PI;

use rand_chacha::ChaCha8Rng;

use crate::candidate::Bounds;
use crate::error::Result;
use crate::scalar::Real;

use super::util::{clamp, lit, ranked, uniform, Population};
use super::{Evaluator, Strategy};

/// Best-so-far archive of `k` points.
struct Leaders<T> {
    k: usize,
    x: Vec<Vec<T>>,
    f: Vec<f64>,
}

impl<T: Real> Leaders<T> {
    fn new(k: usize) -> Self {
        Self { k, x: Vec::new(), f: Vec::new() }
    }

    fn update(&mut self, xs: &[Vec<T>], fs: &[f64]) {
        let mut x: Vec<Vec<T>> = self.x.drain(..).collect();
        let mut f: Vec<f64> = self.f.drain(..).collect();
        x.extend(xs[..fs.len()].iter().cloned());
        f.extend_from_slice(fs);
        for i in ranked(&f).into_iter().take(self.k) {
            self.x.push(x[i].clone());
            self.f.push(f[i]);
        }
    }
}

/// Shared scaffold: population, bounds and leader archive.
struct Pack<T> {
    np: usize,
    bounds: Bounds,
    pop: Population<T>,
    leaders: Leaders<T>,
}

impl<T: Real> Pack<T> {
    fn new(np: usize, leaders: usize) -> Self {
        Self { np, bounds: Bounds::default(), pop: Population::empty(), leaders: Leaders::new(leaders) }
    }

    fn init(&mut self, ev: &mut dyn Evaluator<T>) -> Result<()> {
        self.bounds = ev.bounds().clone();
        self.pop = Population::random(ev, self.np)?;
        self.leaders.update(&self.pop.x, &self.pop.f);
        Ok(())
    }

    fn commit(&mut self, ev: &mut dyn Evaluator<T>, mut next: Vec<Vec<T>>) -> Result<()> {
        for x in next.iter_mut() {
            clamp(&self.bounds, x);
        }
        let f = ev.evaluate(&next)?;
        self.leaders.update(&next, &f);
        for (i, fi) in f.into_iter().enumerate() {
            self.pop.f[i] = fi;
        }
        self.pop.x = next;
        Ok(())
    }
}

/// One gene moved towards the three leaders given per-leader `A` and `C`.
pub(crate) fn gwo_gene<T: Real>(x: T, leaders: [T; 3], a: [T; 3], c: [T; 3]) -> T {
    let mut s = T::zero();
    for k in 0..3 {
        let d = (c[k] * leaders[k] - x).abs();
        s = s + leaders[k] - a[k] * d;
    }
    s / lit(3.0)
}

pub(crate) struct Gwo<T> {
    pack: Pack<T>,
}

impl<T: Real> Gwo<T> {
    pub fn new(np: usize) -> Self {
        Self { pack: Pack::new(np, 3) }
    }
}

impl<T: Real> Strategy<T> for Gwo<T> {
    fn init(&mut self, ev: &mut dyn Evaluator<T>) -> Result<()> {
        self.pack.init(ev)
    }

    fn step(&mut self, ev: &mut dyn Evaluator<T>) -> Result<()> {
        let a = 2.0 * (1.0 - ev.progress());
        let rng = ev.rng();
        let p = &self.pack;
        let lx = &p.leaders.x;
        let leaders = [&lx[0][..], &lx[1.min(lx.len() - 1)][..], &lx[2.min(lx.len() - 1)][..]];
        let next: Vec<Vec<T>> = p
            .pop
            .x
            .iter()
            .map(|x| {
                (0..x.len())
                    .map(|j| {
                        let mut big_a = [T::zero(); 3];
                        let mut c = [T::zero(); 3];
                        for k in 0..3 {
                            big_a[k] = lit(2.0 * a * uniform(rng) - a);
                            c[k] = lit(2.0 * uniform(rng));
                        }
                        gwo_gene(x[j], leaders.map(|l| l[j]), big_a, c)
                    })
                    .collect()
            })
            .collect();
        self.pack.commit(ev, next)
    }

    fn positions(&self) -> &[Vec<T>] {
        &self.pack.pop.x
    }
}

/// Logarithmic spiral around the leader: `D′ e^{bl} cos(2πl) + x*`.
pub(crate) fn spiral<T: Real>(x: &[T], best: &[T], b: f64, l: f64) -> Vec<T> {
    let k = lit::<T>((b * l).exp() * (2.0 * PI * l).cos());
    x.iter().zip(best).map(|(&xi, &bi)| (bi - xi).abs() * k + bi).collect()
}

pub(crate) struct Woa<T> {
    pack: Pack<T>,
}

impl<T: Real> Woa<T> {
    pub fn new(np: usize) -> Self {
        Self { pack: Pack::new(np, 1) }
    }
}

const WOA_B: f64 = 1.0;

fn whale<T: Real>(rng: &mut ChaCha8Rng, i: usize, pop: &[Vec<T>], best: &[T], a: f64) -> Vec<T> {
    let x = &pop[i];
    let big_a = 2.0 * a * uniform(rng) - a;
    let c = 2.0 * uniform(rng);
    let p = uniform(rng);
    let l = 2.0 * uniform(rng) - 1.0;
    if p >= 0.5 {
        return spiral(x, best, WOA_B, l);
    }
    let target: &[T] = if big_a.abs() < 1.0 {
        best
    } else {
        &pop[super::util::pick(rng, pop.len(), 1, &[])[0]]
    };
    x.iter()
        .zip(target)
        .map(|(&xi, &ti)| {
            let d = (lit::<T>(c) * ti - xi).abs();
            ti - lit::<T>(big_a) * d
        })
        .collect()
}

impl<T: Real> Strategy<T> for Woa<T> {
    fn init(&mut self, ev: &mut dyn Evaluator<T>) -> Result<()> {
        self.pack.init(ev)
    }

    fn step(&mut self, ev: &mut dyn Evaluator<T>) -> Result<()> {
        let a = 2.0 * (1.0 - ev.progress());
        let rng = ev.rng();
        let p = &self.pack;
        let best = &p.leaders.x[0];
        let next = (0..p.np).map(|i| whale(rng, i, &p.pop.x, best, a)).collect();
        self.pack.commit(ev, next)
    }

    fn positions(&self) -> &[Vec<T>] {
        &self.pack.pop.x
    }
}

/// `x + r1·sin(r2)·|r3·p − x|` (or cosine) for one gene.
pub(crate) fn sine_cosine<T: Real>(x: T, p: T, r1: f64, r2: f64, r3: f64, use_sine: bool) -> T {
    let wave = if use_sine { r2.sin() } else { r2.cos() };
    x + lit::<T>(r1 * wave) * (lit::<T>(r3) * p - x).abs()
}

const SCA_A: f64 = 2.0;

pub(crate) struct Sca<T> {
    pack: Pack<T>,
}

impl<T: Real> Sca<T> {
    pub fn new(np: usize) -> Self {
        Self { pack: Pack::new(np, 1) }
    }
}

impl<T: Real> Strategy<T> for Sca<T> {
    fn init(&mut self, ev: &mut dyn Evaluator<T>) -> Result<()> {
        self.pack.init(ev)
    }

    fn step(&mut self, ev: &mut dyn Evaluator<T>) -> Result<()> {
        let r1 = SCA_A * (1.0 - ev.progress());
        let rng = ev.rng();
        let p = &self.pack;
        let dest = &p.leaders.x[0];
        let next = p
            .pop
            .x
            .iter()
            .map(|x| {
                x.iter()
                    .zip(dest)
                    .map(|(&xj, &pj)| {
                        let r2 = 2.0 * PI * uniform(rng);
                        let r3 = 2.0 * uniform(rng);
                        let sine = uniform(rng) < 0.5;
                        sine_cosine(xj, pj, r1, r2, r3, sine)
                    })
                    .collect()
            })
            .collect();
        self.pack.commit(ev, next)
    }

    fn positions(&self) -> &[Vec<T>] {
        &self.pack.pop.x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn converged_wolves_stay_put() {
        for x in [3.0, -1.0, 7.5] {
            assert_eq!(gwo_gene(x, [x; 3], [0.7, -0.2, 1.3], [1.0; 3]), x);
        }
    }

    #[test]
    fn spiral_on_the_leader_lands_on_the_leader() {
        let best = [4.0, 5.0];
        assert_eq!(spiral(&best, &best, 1.0, 0.0), best.to_vec());
        assert_eq!(spiral(&best, &best, 1.0, 1.0), best.to_vec());
    }

    #[test]
    fn zero_amplitude_keeps_position() {
        assert_eq!(sine_cosine(5.0, 100.0, 0.0, 1.0, 1.5, true), 5.0);
        assert_eq!(sine_cosine(5.0, 100.0, 0.0, 1.0, 1.5, false), 5.0);
    }

    #[test]
    fn leaders_keep_best_so_far() {
        let mut l = Leaders::<f64>::new(2);
        l.update(&[vec![1.0], vec![2.0], vec![3.0]], &[0.5, 0.2, 0.9]);
        assert_eq!(l.f, vec![0.2, 0.5]);
        l.update(&[vec![4.0]], &[0.7]);
        assert_eq!(l.f, vec![0.2, 0.5]);
        l.update(&[vec![5.0]], &[0.1]);
        assert_eq!(l.x, vec![vec![5.0], vec![2.0]]);
    }
}
