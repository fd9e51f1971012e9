//! Run-level evaluation criteria and population measures.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Default confidence coefficient, in bytes.
pub const DEFAULT_CS: usize = 10_000;

/// `|FS_O − FS_US|` in bytes.
pub fn closeness(fs_out: usize, fs_us: usize) -> usize {
    fs_out.abs_diff(fs_us)
}

/// Fraction of runs whose closeness is strictly below `cs`.
pub fn confidence_factor(closenesses: &[usize], cs: usize) -> Result<f64> {
    if closenesses.is_empty() {
        return Err(Error::EmptyInput("closeness list"));
    }
    let ok = closenesses.iter().filter(|&&c| c < cs).count();
    Ok(ok as f64 / closenesses.len() as f64)
}

fn mean_vector<T: Real>(positions: &[Vec<T>]) -> Vec<T> {
    // Accumulated as offsets from the first member.
    let x0 = &positions[0];
    let n = T::from_usize(positions.len()).expect("population size fits");
    let mut m = vec![T::zero(); x0.len()];
    for x in &positions[1..] {
        for ((a, &v), &o) in m.iter_mut().zip(x).zip(x0) {
            *a = *a + (v - o);
        }
    }
    m.into_iter().zip(x0).map(|(v, &o)| o + v / n).collect()
}

/// Mean Euclidean distance of the members from the mean position.
pub fn population_diversity<T: Real>(positions: &[Vec<T>]) -> T {
    if positions.is_empty() {
        return T::zero();
    }
    let m = mean_vector(positions);
    let n = T::from_usize(positions.len()).expect("population size fits");
    let total = positions.iter().fold(T::zero(), |acc, x| {
        let sq = x.iter().zip(&m).fold(T::zero(), |s, (&v, &c)| s + (v - c) * (v - c));
        acc + sq.sqrt()
    });
    total / n
}

fn median<T: Real>(v: &mut [T]) -> T {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / T::lit(2.0)
    }
}

/// Median-centred dispersion: per gene the mean `|median − x|`, averaged
/// over genes.
pub fn median_dispersion<T: Real>(positions: &[Vec<T>]) -> T {
    if positions.is_empty() || positions[0].is_empty() {
        return T::zero();
    }
    let d = positions[0].len();
    let n = T::from_usize(positions.len()).expect("population size fits");
    let mut col = Vec::with_capacity(positions.len());
    let mut sum = T::zero();
    for j in 0..d {
        col.clear();
        col.extend(positions.iter().map(|x| x[j]));
        let med = median(&mut col);
        let dj = col.iter().fold(T::zero(), |s, &v| s + (med - v).abs()) / n;
        sum = sum + dj;
    }
    sum / T::from_usize(d).expect("dimension fits")
}

/// Exploration and exploitation percentages at one iteration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XplXpt {
    pub xpl: f64,
    pub xpt: f64,
}

/// XPL = 100·Div/Div_max and XPT = 100·|Div − Div_max|/Div_max per iteration,
/// with Div_max taken over the whole series. A series that never disperses
/// (Div_max = 0) is reported as fully exploitative.
pub fn exploration_exploitation(dispersion: &[f64]) -> Result<Vec<XplXpt>> {
    if dispersion.is_empty() {
        return Err(Error::EmptyInput("dispersion series"));
    }
    let max = dispersion.iter().copied().fold(0.0, f64::max);
    Ok(dispersion
        .iter()
        .map(|&d| {
            if max == 0.0 {
                XplXpt { xpl: 0.0, xpt: 100.0 }
            } else {
                XplXpt { xpl: d / max * 100.0, xpt: (d - max).abs() / max * 100.0 }
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closeness_examples() {
        assert_eq!(closeness(10_023, 10_000), 23);
        assert_eq!(closeness(10_000, 10_000), 0);
        assert_eq!(closeness(9_000, 10_000), 1000);
    }

    #[test]
    fn cf_examples() {
        assert!((confidence_factor(&[5000, 12000, 3000], 10_000).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(confidence_factor(&[0, 0], 10_000).unwrap(), 1.0);
        assert_eq!(confidence_factor(&[10_000], 10_000).unwrap(), 0.0);
        assert!(confidence_factor(&[], 10_000).is_err());
    }

    #[test]
    fn diversity_examples() {
        let same = vec![vec![3.0, 4.0]; 5];
        assert_eq!(population_diversity(&same), 0.0);
        let pair = vec![vec![1.0, 0.0], vec![-1.0, 0.0]];
        assert_eq!(population_diversity(&pair), 1.0);
        let doubled: Vec<Vec<f64>> = pair.iter().map(|x| x.iter().map(|v| v * 2.0).collect()).collect();
        assert_eq!(population_diversity(&doubled), 2.0);
    }

    #[test]
    fn dispersion_uses_median() {
        let p: Vec<Vec<f64>> = vec![vec![0.0], vec![1.0], vec![10.0]];
        // median 1: (1 + 0 + 9) / 3
        assert!((median_dispersion(&p) - 10.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn xpl_xpt_identity_and_degenerate_run() {
        let s = exploration_exploitation(&[4.0, 8.0, 2.0, 0.0]).unwrap();
        assert_eq!(s[1], XplXpt { xpl: 100.0, xpt: 0.0 });
        assert_eq!(s[3], XplXpt { xpl: 0.0, xpt: 100.0 });
        assert!(s.iter().all(|p| (p.xpl + p.xpt - 100.0).abs() < 1e-12));
        let flat = exploration_exploitation(&[0.0, 0.0]).unwrap();
        assert!(flat.iter().all(|p| p.xpl == 0.0 && p.xpt == 100.0));
    }
}
