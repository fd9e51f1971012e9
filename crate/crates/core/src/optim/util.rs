use rand::seq::index;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::candidate::Bounds;
use crate::error::Result;
use crate::scalar::Real;

use super::Evaluator;

#[inline]
pub(crate) fn lit<T: Real>(x: f64) -> T {
    T::lit(x)
}

#[inline]
pub(crate) fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    rng.random::<f64>()
}

#[inline]
pub(crate) fn normal(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

/// Uniform integer point, stored as reals.
pub(crate) fn random_position<T: Real>(bounds: &Bounds, rng: &mut ChaCha8Rng) -> Vec<T> {
    bounds.random(rng).into_iter().map(|g| lit(g as f64)).collect()
}

pub(crate) fn clamp<T: Real>(bounds: &Bounds, x: &mut [T]) {
    for (i, v) in x.iter_mut().enumerate() {
        let (lo, hi) = (lit(bounds.low(i)), lit(bounds.high(i)));
        if !v.is_finite() {
            *v = lo;
        }
        *v = v.max(lo).min(hi);
    }
}

/// `k` distinct indices from `0..n` avoiding `exclude`; falls back to sampling
/// with replacement when too few indices are available.
pub(crate) fn pick<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize, exclude: &[usize]) -> Vec<usize> {
    let pool: Vec<usize> = (0..n).filter(|i| !exclude.contains(i)).collect();
    if pool.is_empty() {
        return (0..k).map(|_| rng.random_range(0..n)).collect();
    }
    if pool.len() < k {
        return (0..k).map(|_| pool[rng.random_range(0..pool.len())]).collect();
    }
    index::sample(rng, pool.len(), k).into_iter().map(|i| pool[i]).collect()
}

/// Index of the smallest value; the lower index wins ties.
pub(crate) fn argmin(f: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in f.iter().enumerate() {
        if v < f[best] {
            best = i;
        }
    }
    best
}

/// Indices ordered by value, ties by index.
pub(crate) fn ranked(f: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..f.len()).collect();
    idx.sort_by(|&a, &b| f[a].total_cmp(&f[b]));
    idx
}

pub(crate) struct Population<T> {
    pub x: Vec<Vec<T>>,
    pub f: Vec<f64>,
}

impl<T: Real> Population<T> {
    pub fn empty() -> Self {
        Self { x: Vec::new(), f: Vec::new() }
    }

    /// `np` uniform random points, all evaluated.
    pub fn random(ev: &mut dyn Evaluator<T>, np: usize) -> Result<Self> {
        let bounds = ev.bounds().clone();
        let x: Vec<Vec<T>> = (0..np).map(|_| random_position(&bounds, ev.rng())).collect();
        let f = ev.evaluate(&x)?;
        debug_assert_eq!(f.len(), np);
        Ok(Self { x, f })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn best(&self) -> usize {
        argmin(&self.f)
    }

    /// Keeps the `n` best, in rank order.
    pub fn truncate_best(&mut self, n: usize) {
        let order = ranked(&self.f);
        let keep: Vec<usize> = order.into_iter().take(n).collect();
        self.x = keep.iter().map(|&i| self.x[i].clone()).collect();
        self.f = keep.iter().map(|&i| self.f[i]).collect();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn argmin_prefers_lower_index() {
        assert_eq!(argmin(&[0.5, 0.3, 0.3, 0.7]), 1);
        assert_eq!(ranked(&[0.5, 0.3, 0.3]), vec![1, 2, 0]);
    }

    #[test]
    fn pick_is_distinct_and_excludes() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let v = pick(&mut rng, 6, 3, &[2]);
            assert!(!v.contains(&2));
            assert!(v[0] != v[1] && v[1] != v[2] && v[0] != v[2]);
        }
    }
}
