//! Particle swarms: canonical PSO, chaotic (CPSO), comprehensive learning
//! (CLPSO), hierarchical with jumping acceleration coefficients (HPSO) and
//! phasor (PPSO).

#![allow(clippy::needless_range_loop)]

use std::f64::consts::PI;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::candidate::Bounds;
use crate::error::Result;
use crate::scalar::Real;

use super::util::{argmin, clamp, lit, normal, pick, random_position, uniform};
use super::{Evaluator, OptimizerConfig, Strategy};

/// One step of the logistic map `4x(1 − x)`.
pub fn logistic_map(x: f64) -> f64 {
    4.0 * x * (1.0 - x)
}

/// Particles with velocities and personal bests.
struct Swarm<T> {
    x: Vec<Vec<T>>,
    v: Vec<Vec<T>>,
    f: Vec<f64>,
    p: Vec<Vec<T>>,
    pf: Vec<f64>,
    /// Per-gene velocity limit.
    vmax: Vec<T>,
    bounds: Bounds,
}

impl<T: Real> Swarm<T> {
    fn empty() -> Self {
        Self { x: vec![], v: vec![], f: vec![], p: vec![], pf: vec![], vmax: vec![], bounds: Bounds::default() }
    }

    fn new(ev: &mut dyn Evaluator<T>, np: usize, vmax_frac: f64) -> Result<Self> {
        let bounds = ev.bounds().clone();
        let vmax: Vec<T> = (0..bounds.dim()).map(|j| lit(vmax_frac * bounds.range(j))).collect();
        let rng = ev.rng();
        let x: Vec<Vec<T>> = (0..np).map(|_| random_position(&bounds, rng)).collect();
        let v = (0..np)
            .map(|_| vmax.iter().map(|&m| m * lit(2.0 * uniform(rng) - 1.0)).collect())
            .collect();
        let f = ev.evaluate(&x)?;
        Ok(Self { p: x.clone(), pf: f.clone(), x, v, f, vmax, bounds })
    }

    fn np(&self) -> usize {
        self.x.len()
    }

    fn gbest(&self) -> usize {
        argmin(&self.pf)
    }

    /// Clamps velocity `i`, moves particle `i` and keeps it in bounds.
    fn apply(&mut self, i: usize, scale: T) {
        for j in 0..self.x[i].len() {
            let m = self.vmax[j] * scale;
            let mut vj = self.v[i][j];
            if !vj.is_finite() {
                vj = T::zero();
            }
            self.v[i][j] = vj.max(-m).min(m);
            self.x[i][j] = self.x[i][j] + self.v[i][j];
        }
        clamp(&self.bounds, &mut self.x[i]);
    }

    /// Evaluates current positions and updates personal bests; returns the
    /// number evaluated.
    fn evaluate(&mut self, ev: &mut dyn Evaluator<T>) -> Result<usize> {
        let f = ev.evaluate(&self.x)?;
        for (i, &fi) in f.iter().enumerate() {
            self.f[i] = fi;
            if fi < self.pf[i] {
                self.pf[i] = fi;
                self.p[i] = self.x[i].clone();
            }
        }
        Ok(f.len())
    }
}

fn linear_inertia(w_min: f64, w_max: f64, progress: f64) -> f64 {
    w_max - (w_max - w_min) * progress
}

/// Velocity update of the canonical swarm for one particle.
#[allow(clippy::too_many_arguments)]
pub(crate) fn pso_velocity<T: Real>(
    rng: &mut ChaCha8Rng,
    v: &[T],
    x: &[T],
    p: &[T],
    g: &[T],
    w: f64,
    c1: f64,
    c2: f64,
) -> Vec<T> {
    (0..x.len())
        .map(|j| {
            let r1 = lit::<T>(uniform(rng));
            let r2 = lit::<T>(uniform(rng));
            lit::<T>(w) * v[j] + lit::<T>(c1) * r1 * (p[j] - x[j]) + lit::<T>(c2) * r2 * (g[j] - x[j])
        })
        .collect()
}

pub(crate) struct Pso<T> {
    np: usize,
    c1: f64,
    c2: f64,
    w_min: f64,
    w_max: f64,
    vmax: f64,
    s: Swarm<T>,
}

impl<T: Real> Pso<T> {
    pub fn new(np: usize, c: &OptimizerConfig) -> Self {
        Self {
            np,
            c1: c.param("c1"),
            c2: c.param("c2"),
            w_min: c.param("w_min"),
            w_max: c.param("w_max"),
            vmax: c.param("vmax"),
            s: Swarm::empty(),
        }
    }
}

impl<T: Real> Strategy<T> for Pso<T> {
    fn init(&mut self, ev: &mut dyn Evaluator<T>) -> Result<()> {
        self.s = Swarm::new(ev, self.np, self.vmax)?;
        Ok(())
    }

    fn step(&mut self, ev: &mut dyn Evaluator<T>) -> Result<()> {
        let w = linear_inertia(self.w_min, self.w_max, ev.progress());
        let g = self.s.p[self.s.gbest()].clone();
        let rng = ev.rng();
        for i in 0..self.s.np() {
            self.s.v[i] = pso_velocity(rng, &self.s.v[i], &self.s.x[i], &self.s.p[i], &g, w, self.c1, self.c2);
            self.s.apply(i, T::one());
        }
        self.s.evaluate(ev)?;
        Ok(())
    }

    fn positions(&self) -> &[Vec<T>] {
        &self.s.x
    }
}

/// Adaptive inertia: particles better than average get smaller weights.
pub(crate) fn aiwf(f: f64, f_min: f64, f_avg: f64, w_min: f64, w_max: f64) -> f64 {
    if f <= f_avg && f_avg > f_min {
        w_min + (w_max - w_min) * (f - f_min) / (f_avg - f_min)
    } else {
        w_max
    }
}

pub(crate) struct Cpso<T> {
    base: Pso<T>,
    cls_steps: usize,
    cls_radius: f64,
}

impl<T: Real> Cpso<T> {
    pub fn new(np: usize, c: &OptimizerConfig) -> Self {
        Self { base: Pso::new(np, c), cls_steps: c.param("cls_steps").round() as usize, cls_radius: c.param("cls_radius") }
    }

    /// Chaotic local search around the global best; an improvement replaces
    /// the worst particle.
    fn chaotic_search(&mut self, ev: &mut dyn Evaluator<T>) -> Result<()> {
        let s = &mut self.base.s;
        let gi = s.gbest();
        let (mut g, mut gf) = (s.p[gi].clone(), s.pf[gi]);
        let radius = self.cls_radius * (1.0 - ev.progress());
        let rng = ev.rng();
        let mut cx: Vec<f64> = (0..g.len())
            .map(|_| loop {
                let c = uniform(rng);
                if c > 0.0 && ![0.25, 0.5, 0.75].contains(&c) {
                    break c;
                }
            })
            .collect();
        let mut improved = false;
        for _ in 0..self.cls_steps {
            if ev.remaining() == 0 {
                break;
            }
            cx.iter_mut().for_each(|c| *c = logistic_map(*c));
            let mut y: Vec<T> = g
                .iter()
                .zip(&cx)
                .enumerate()
                .map(|(j, (&gj, &c))| gj + lit(radius * s.bounds.range(j) * (2.0 * c - 1.0)))
                .collect();
            clamp(&s.bounds, &mut y);
            let f = ev.evaluate(std::slice::from_ref(&y))?;
            if f[0] < gf {
                g = y;
                gf = f[0];
                improved = true;
            }
        }
        if improved {
            let worst = s.f.iter().enumerate().fold(0, |w, (i, &v)| if v > s.f[w] { i } else { w });
            s.x[worst] = g.clone();
            s.f[worst] = gf;
            s.p[worst] = g;
            s.pf[worst] = gf;
        }
        Ok(())
    }
}

impl<T: Real> Strategy<T> for Cpso<T> {
    fn init(&mut self, ev: &mut dyn Evaluator<T>) -> Result<()> {
        self.base.init(ev)
    }

    fn step(&mut self, ev: &mut dyn Evaluator<T>) -> Result<()> {
        let b = &mut self.base;
        let s = &mut b.s;
        let f_min = s.f.iter().copied().fold(f64::INFINITY, f64::min);
        let f_avg = s.f.iter().sum::<f64>() / s.np() as f64;
        let g = s.p[s.gbest()].clone();
        let rng = ev.rng();
        for i in 0..s.np() {
            let w = aiwf(s.f[i], f_min, f_avg, b.w_min, b.w_max);
            s.v[i] = pso_velocity(rng, &s.v[i], &s.x[i], &s.p[i], &g, w, b.c1, b.c2);
            s.apply(i, T::one());
        }
        s.evaluate(ev)?;
        self.chaotic_search(ev)
    }

    fn positions(&self) -> &[Vec<T>] {
        &self.base.s.x
    }
}

pub(crate) struct Clpso<T> {
    np: usize,
    c: f64,
    w_min: f64,
    w_max: f64,
    vmax: f64,
    gap: usize,
    /// Learning probability per particle.
    pc: Vec<f64>,
    /// Exemplar particle per (particle, gene).
    exemplar: Vec<Vec<usize>>,
    stale: Vec<usize>,
    s: Swarm<T>,
}

impl<T: Real> Clpso<T> {
    pub fn new(np: usize, c: &OptimizerConfig) -> Self {
        let pc = (0..np)
            .map(|i| 0.05 + 0.45 * ((10.0 * i as f64 / (np - 1) as f64).exp() - 1.0) / (10f64.exp() - 1.0))
            .collect();
        Self {
            np,
            c: c.param("c"),
            w_min: c.param("w_min"),
            w_max: c.param("w_max"),
            vmax: c.param("vmax"),
            gap: c.param("gap").round() as usize,
            pc,
            exemplar: Vec::new(),
            stale: vec![0; np],
            s: Swarm::empty(),
        }
    }

    fn assign(&mut self, rng: &mut ChaCha8Rng, i: usize) {
        let d = self.s.x[i].len();
        let mut ex = vec![i; d];
        for e in ex.iter_mut() {
            if uniform(rng) < self.pc[i] {
                let r = pick(rng, self.np, 2, &[i]);
                *e = if self.s.pf[r[1]] < self.s.pf[r[0]] { r[1] } else { r[0] };
            }
        }
        if ex.iter().all(|&e| e == i) {
            let j = rng.random_range(0..d);
            ex[j] = pick(rng, self.np, 1, &[i])[0];
        }
        self.exemplar[i] = ex;
    }
}

impl<T: Real> Strategy<T> for Clpso<T> {
    fn init(&mut self, ev: &mut dyn Evaluator<T>) -> Result<()> {
        self.s = Swarm::new(ev, self.np, self.vmax)?;
        self.exemplar = vec![Vec::new(); self.np];
        let rng = ev.rng();
        for i in 0..self.np {
            self.assign(rng, i);
        }
        Ok(())
    }

    fn step(&mut self, ev: &mut dyn Evaluator<T>) -> Result<()> {
        let w = lit::<T>(linear_inertia(self.w_min, self.w_max, ev.progress()));
        let rng = ev.rng();
        for i in 0..self.np {
            if self.stale[i] >= self.gap {
                self.assign(rng, i);
                self.stale[i] = 0;
            }
            for j in 0..self.s.x[i].len() {
                let e = self.exemplar[i][j];
                let r = lit::<T>(uniform(rng));
                self.s.v[i][j] = w * self.s.v[i][j] + lit::<T>(self.c) * r * (self.s.p[e][j] - self.s.x[i][j]);
            }
            self.s.apply(i, T::one());
        }
        let before = self.s.pf.clone();
        let n = self.s.evaluate(ev)?;
        for ((stale, &now), &was) in self.stale.iter_mut().zip(&self.s.pf).zip(&before).take(n) {
            if now < was {
                *stale = 0;
            } else {
                *stale += 1;
            }
        }
        Ok(())
    }

    fn positions(&self) -> &[Vec<T>] {
        &self.s.x
    }
}

/// Jumping acceleration coefficients from one Gaussian draw `w`:
/// `c1 = |w|^(c·w)`, `c2 = |1 − w|^(c / (1 − w))`.
pub(crate) fn jumping_coefficients(w: f64, c: f64) -> (f64, f64) {
    let c1 = w.abs().powf(c * w);
    let c2 = (1.0 - w).abs().powf(c / (1.0 - w));
    (c1, c2)
}

pub(crate) struct Hpso<T> {
    np: usize,
    ci: f64,
    cf: f64,
    vmax: f64,
    s: Swarm<T>,
}

impl<T: Real> Hpso<T> {
    pub fn new(np: usize, c: &OptimizerConfig) -> Self {
        Self { np, ci: c.param("ci"), cf: c.param("cf"), vmax: c.param("vmax"), s: Swarm::empty() }
    }
}

/// Relative stagnation threshold on velocity components.
const STAGNATION: f64 = 1e-8;

impl<T: Real> Strategy<T> for Hpso<T> {
    fn init(&mut self, ev: &mut dyn Evaluator<T>) -> Result<()> {
        self.s = Swarm::new(ev, self.np, self.vmax)?;
        Ok(())
    }

    fn step(&mut self, ev: &mut dyn Evaluator<T>) -> Result<()> {
        let progress = ev.progress();
        let c = (self.cf - self.ci) * progress + self.ci;
        // Re-initialised velocities shrink over the run.
        let jump = (1.0 - progress).max(0.1);
        let g = self.s.p[self.s.gbest()].clone();
        let rng = ev.rng();
        for i in 0..self.np {
            let w = loop {
                let w = normal(rng);
                if (w - 1.0).abs() >= 0.01 {
                    break w;
                }
            };
            let (c1, c2) = jumping_coefficients(w, c);
            let (c1, c2) = (lit::<T>(c1.min(1e6)), lit::<T>(c2.min(1e6)));
            for j in 0..self.s.x[i].len() {
                let (x, p) = (self.s.x[i][j], self.s.p[i][j]);
                let r1 = lit::<T>(uniform(rng));
                let r2 = lit::<T>(uniform(rng));
                let mut v = c1 * r1 * (p - x) + c2 * r2 * (g[j] - x);
                let eps = lit::<T>(STAGNATION * self.s.bounds.range(j));
                if v.abs() < eps || !v.is_finite() {
                    let sign = if uniform(rng) < 0.5 { -1.0 } else { 1.0 };
                    v = self.s.vmax[j] * lit(sign * uniform(rng) * jump);
                }
                self.s.v[i][j] = v;
            }
            self.s.apply(i, T::one());
        }
        self.s.evaluate(ev)?;
        Ok(())
    }

    fn positions(&self) -> &[Vec<T>] {
        &self.s.x
    }
}

pub(crate) struct Ppso<T> {
    np: usize,
    theta: Vec<f64>,
    /// Per-particle velocity limit as a fraction of each gene's range.
    limit: Vec<f64>,
    s: Swarm<T>,
}

impl<T: Real> Ppso<T> {
    pub fn new(np: usize, _c: &OptimizerConfig) -> Self {
        Self { np, theta: Vec::new(), limit: Vec::new(), s: Swarm::empty() }
    }
}

/// Phasor coefficients `(|cos θ|^(2 sin θ), |sin θ|^(2 cos θ))`, capped.
pub(crate) fn phasor_coefficients(theta: f64) -> (f64, f64) {
    let (s, c) = theta.sin_cos();
    let a = c.abs().powf(2.0 * s);
    let b = s.abs().powf(2.0 * c);
    let cap = |v: f64| if v.is_finite() { v.min(1e6) } else { 1e6 };
    (cap(a), cap(b))
}

impl<T: Real> Strategy<T> for Ppso<T> {
    fn init(&mut self, ev: &mut dyn Evaluator<T>) -> Result<()> {
        self.s = Swarm::new(ev, self.np, 1.0)?;
        let rng = ev.rng();
        self.theta = (0..self.np).map(|_| uniform(rng) * 2.0 * PI).collect();
        self.limit = self.theta.iter().map(|t| t.cos().powi(2)).collect();
        Ok(())
    }

    fn step(&mut self, ev: &mut dyn Evaluator<T>) -> Result<()> {
        let g = self.s.p[self.s.gbest()].clone();
        for i in 0..self.np {
            let (a, b) = phasor_coefficients(self.theta[i]);
            let (a, b) = (lit::<T>(a), lit::<T>(b));
            for j in 0..self.s.x[i].len() {
                let x = self.s.x[i][j];
                self.s.v[i][j] = a * (self.s.p[i][j] - x) + b * (g[j] - x);
            }
            self.s.apply(i, lit(self.limit[i]));
            let t = self.theta[i];
            self.theta[i] = t + (t.cos() + t.sin()).abs() * 2.0 * PI;
            self.limit[i] = self.theta[i].cos().powi(2);
        }
        self.s.evaluate(ev)?;
        Ok(())
    }

    fn positions(&self) -> &[Vec<T>] {
        &self.s.x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn logistic_map_from_point_three() {
        let a = logistic_map(0.3);
        let b = logistic_map(a);
        assert!((a - 0.84).abs() < 1e-12);
        assert!((b - 0.5376).abs() < 1e-12);
    }

    #[test]
    fn unit_inertia_without_attraction_keeps_velocity() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let v = [1.5, -2.0, 0.25];
        let x = [10.0, 20.0, 30.0];
        let p = [0.0, 0.0, 0.0];
        assert_eq!(pso_velocity(&mut rng, &v, &x, &p, &p, 1.0, 0.0, 0.0), v.to_vec());
    }

    #[test]
    fn converged_swarm_keeps_only_inertia() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let v = [1.0, 2.0];
        let x = [5.0, 6.0];
        assert_eq!(pso_velocity(&mut rng, &v, &x, &x, &x, 0.7, 2.05, 2.05), vec![0.7, 1.4]);
    }

    #[test]
    fn aiwf_branches() {
        assert_eq!(aiwf(1.0, 1.0, 3.0, 0.4, 0.9), 0.4);
        assert!((aiwf(2.0, 1.0, 3.0, 0.4, 0.9) - 0.65).abs() < 1e-12);
        assert_eq!(aiwf(5.0, 1.0, 3.0, 0.4, 0.9), 0.9);
        assert_eq!(aiwf(1.0, 1.0, 1.0, 0.4, 0.9), 0.9);
    }

    #[test]
    fn phasor_at_quarter_turn() {
        let (a, b) = phasor_coefficients(PI / 4.0);
        let expect = (0.5f64.sqrt()).powf(2.0 * 0.5f64.sqrt());
        assert!((a - expect).abs() < 1e-12 && (b - expect).abs() < 1e-12);
        let (a, _) = phasor_coefficients(-PI / 2.0);
        assert!(a.is_finite());
    }

    #[test]
    fn jumping_coefficients_example() {
        let (c1, c2) = jumping_coefficients(2.0, 0.5);
        assert!((c1 - 2.0).abs() < 1e-12);
        assert!((c2 - 1.0).abs() < 1e-12);
    }
}
