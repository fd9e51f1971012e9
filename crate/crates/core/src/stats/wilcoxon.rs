use std::fmt;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

use super::rank::average_ranks;
use super::Direction;

/// Largest number of non-zero differences handled with the exact null
/// distribution; above it the normal approximation is used.
pub const EXACT_MAX_N: usize = 25;

/// Outcome for the first sample under minimisation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    /// Significantly smaller (better).
    #[serde(rename = "+")]
    Better,
    /// Significantly larger (worse).
    #[serde(rename = "-")]
    Worse,
    #[serde(rename = "=")]
    Equivalent,
}

impl Verdict {
    pub fn symbol(self) -> char {
        match self {
            Self::Better => '+',
            Self::Worse => '-',
            Self::Equivalent => '=',
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WilcoxonResult {
    /// `min(W+, W−)`.
    pub statistic: f64,
    pub w_plus: f64,
    pub p_value: f64,
    /// Non-zero differences used.
    pub n: usize,
    pub exact: bool,
    pub verdict: Verdict,
}

/// Two-sided Wilcoxon signed-rank test of `a − b`. Zero differences are
/// dropped and tied magnitudes share their average rank. Up to
/// [`EXACT_MAX_N`] pairs the p-value comes from the exact permutation
/// distribution of the (possibly tied) ranks; beyond that from the normal
/// approximation with tie-corrected variance and continuity correction.
pub fn wilcoxon_signed_rank(a: &[f64], b: &[f64], alpha: f64) -> Result<WilcoxonResult> {
    if a.len() != b.len() {
        return Err(Error::ShapeMismatch { left: format!("{} values", a.len()), right: format!("{} values", b.len()) });
    }
    if a.iter().chain(b).any(|v| !v.is_finite()) {
        return Err(Error::InvalidObjective("non-finite sample".into()));
    }
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).filter(|&v| v != 0.0).collect();
    let n = d.len();
    if n == 0 {
        return Ok(WilcoxonResult {
            statistic: 0.0,
            w_plus: 0.0,
            p_value: 1.0,
            n: 0,
            exact: true,
            verdict: Verdict::Equivalent,
        });
    }
    let mags: Vec<f64> = d.iter().map(|v| v.abs()).collect();
    let ranks = average_ranks(&mags, Direction::Minimise);
    let w_plus: f64 = d.iter().zip(&ranks).filter(|(v, _)| **v > 0.0).map(|(_, r)| r).sum();
    let total = (n * (n + 1)) as f64 / 2.0;
    let w_minus = total - w_plus;
    let exact = n <= EXACT_MAX_N;
    let p_value = if exact { exact_p(&ranks, w_plus) } else { normal_p(&ranks, w_plus.min(w_minus)) };
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let verdict = if p_value < alpha {
        if mean(a) < mean(b) {
            Verdict::Better
        } else if mean(a) > mean(b) {
            Verdict::Worse
        } else {
            Verdict::Equivalent
        }
    } else {
        Verdict::Equivalent
    };
    Ok(WilcoxonResult { statistic: w_plus.min(w_minus), w_plus, p_value, n, exact, verdict })
}

/// Exact two-sided p-value: every sign assignment of the ranks is equally
/// likely. Ranks are doubled so half-ranks from ties stay integral.
fn exact_p(ranks: &[f64], w_plus: f64) -> f64 {
    let doubled: Vec<usize> = ranks.iter().map(|r| (2.0 * r).round() as usize).collect();
    let max: usize = doubled.iter().sum();
    // counts[s] = number of subsets with doubled rank sum s (as f64: 2^25 fits).
    let mut counts = vec![0f64; max + 1];
    counts[0] = 1.0;
    let mut reach = 0;
    for &r in &doubled {
        for s in (0..=reach).rev() {
            if counts[s] != 0.0 {
                counts[s + r] += counts[s];
            }
        }
        reach += r;
    }
    let total: f64 = counts.iter().sum();
    let w = (2.0 * w_plus).round() as usize;
    let lower: f64 = counts[..=w].iter().sum::<f64>() / total;
    let upper: f64 = counts[w..].iter().sum::<f64>() / total;
    (2.0 * lower.min(upper)).min(1.0)
}

fn normal_p(ranks: &[f64], t: f64) -> f64 {
    let n = ranks.len() as f64;
    let mean = n * (n + 1.0) / 4.0;
    let mut var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0;
    let mut sorted = ranks.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i;
        while j < sorted.len() && sorted[j] == sorted[i] {
            j += 1;
        }
        let t = (j - i) as f64;
        var -= (t * t * t - t) / 48.0;
        i = j;
    }
    if var <= 0.0 {
        return 1.0;
    }
    let correction = 0.5 * (t - mean).signum();
    let z = (t - mean - correction) / var.sqrt();
    let std = Normal::new(0.0, 1.0).expect("unit normal");
    (2.0 * std.cdf(-z.abs())).min(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_samples() {
        let a = [0.5, 0.6, 0.7, 0.8, 0.9];
        let r = wilcoxon_signed_rank(&a, &a, 0.05).unwrap();
        assert_eq!((r.verdict, r.p_value), (Verdict::Equivalent, 1.0));
    }

    #[test]
    fn constant_shift_over_26_pairs() {
        let a: Vec<f64> = (0..26).map(|i| 0.4 + 0.01 * i as f64).collect();
        let b: Vec<f64> = a.iter().map(|v| v + 0.05).collect();
        let r = wilcoxon_signed_rank(&a, &b, 0.05).unwrap();
        assert!(!r.exact);
        assert_eq!(r.verdict, Verdict::Better);
        assert!(r.p_value < 0.05);
        let r = wilcoxon_signed_rank(&b, &a, 0.05).unwrap();
        assert_eq!(r.verdict, Verdict::Worse);
    }

    #[test]
    fn smallest_exact_p() {
        let a = [1.0, 2.0, 3.0, 4.0, 5.0];
        let b = [2.0, 4.0, 6.0, 8.0, 10.0];
        let r = wilcoxon_signed_rank(&a, &b, 0.05).unwrap();
        assert!((r.p_value - 0.0625).abs() < 1e-15);
        assert_eq!(r.statistic, 0.0);
    }

    #[test]
    fn length_mismatch() {
        assert!(wilcoxon_signed_rank(&[1.0], &[1.0, 2.0], 0.05).is_err());
    }
}
