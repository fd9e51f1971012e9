//! The quality-factor behaviour study: random tables under three sampling
//! schemes and the (PSNR, file size) cloud each produces.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use qtopt::candidate::{decode_candidate, Candidate, GENES, QF_GENE};
use qtopt::jpeg::{psnr, PreparedImage};
use qtopt::PixelImage;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

/// Quality factor used when it is not sampled.
pub const FIXED_QF: i32 = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QfMode {
    /// Distinct table entries, QF fixed at 50.
    PermFixedQf,
    /// Distinct table entries, random QF.
    PermRandomQf,
    /// Independent uniform entries (duplicates allowed), random QF.
    NopermRandomQf,
}

impl QfMode {
    pub const ALL: [QfMode; 3] = [Self::PermFixedQf, Self::PermRandomQf, Self::NopermRandomQf];

    pub fn name(self) -> &'static str {
        match self {
            Self::PermFixedQf => "perm_fixed_qf",
            Self::PermRandomQf => "perm_random_qf",
            Self::NopermRandomQf => "noperm_random_qf",
        }
    }
}

impl fmt::Display for QfMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for QfMode {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.name() == s.to_ascii_lowercase().replace('-', "_"))
            .ok_or_else(|| HarnessError::Config(format!("unknown QF mode `{s}`")))
    }
}

/// 64 distinct entries drawn from `1..=255`.
fn distinct_table(rng: &mut ChaCha8Rng) -> Vec<i32> {
    sample(rng, 255, 64).into_iter().map(|i| i as i32 + 1).collect()
}

fn uniform_table(rng: &mut ChaCha8Rng) -> Vec<i32> {
    (0..64).map(|_| rng.random_range(1..=255)).collect()
}

/// One random genotype under `mode`.
pub fn sample_genes(mode: QfMode, rng: &mut ChaCha8Rng) -> Vec<i32> {
    let mut genes = Vec::with_capacity(GENES);
    let table = match mode {
        QfMode::PermFixedQf | QfMode::PermRandomQf => distinct_table,
        QfMode::NopermRandomQf => uniform_table,
    };
    genes.extend(table(rng));
    genes.extend(table(rng));
    genes.push(match mode {
        QfMode::PermFixedQf => FIXED_QF,
        _ => rng.random_range(1..=99),
    });
    debug_assert_eq!(genes.len(), QF_GENE + 1);
    genes
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QfSample {
    pub index: usize,
    pub qf: i32,
    pub file_size: usize,
    pub psnr: f64,
}

/// Encodes `n` random genotypes drawn under `mode`. The genotypes depend only
/// on `seed`, so the table is reproducible regardless of thread count.
pub fn analyze_qf(image: &PixelImage, n: usize, mode: QfMode, seed: u64) -> Result<Vec<QfSample>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let genotypes: Vec<Vec<i32>> = (0..n).map(|_| sample_genes(mode, &mut rng)).collect();
    let prepared = PreparedImage::new(image);
    genotypes
        .into_par_iter()
        .enumerate()
        .map(|(index, genes)| {
            let c = Candidate::new(genes)?;
            let (lqt, cqt, qf) = decode_candidate(&c);
            let (jpeg, recon) = prepared.encode_with_reconstruction(&lqt, &cqt, qf)?;
            Ok(QfSample { index, qf, file_size: jpeg.size_bytes(), psnr: psnr(image, &recon)? })
        })
        .collect()
}

pub fn write_samples_csv<W: Write>(samples: &[QfSample], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for s in samples {
        w.serialize(s)?;
    }
    w.flush().map_err(|e| HarnessError::Serde(e.to_string()))?;
    Ok(())
}

/// Occupied cells of a `bins × bins` histogram over (PSNR, ln file size),
/// one count per sample set, all binned over the extent of their union so
/// the counts are comparable.
pub fn occupied_cells(sets: &[&[QfSample]], bins: usize) -> Vec<usize> {
    let all = sets.iter().flat_map(|s| s.iter());
    let (mut p_lo, mut p_hi, mut s_lo, mut s_hi) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for s in all {
        let ls = (s.file_size as f64).ln();
        p_lo = p_lo.min(s.psnr);
        p_hi = p_hi.max(s.psnr);
        s_lo = s_lo.min(ls);
        s_hi = s_hi.max(ls);
    }
    let cell = |v: f64, lo: f64, hi: f64| -> usize {
        if hi <= lo {
            return 0;
        }
        (((v - lo) / (hi - lo) * bins as f64) as usize).min(bins - 1)
    };
    sets.iter()
        .map(|set| {
            let mut grid = vec![false; bins * bins];
            for s in set.iter() {
                let i = cell(s.psnr, p_lo, p_hi);
                let j = cell((s.file_size as f64).ln(), s_lo, s_hi);
                grid[i * bins + j] = true;
            }
            grid.iter().filter(|&&b| b).count()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_respect_their_sampling_rules() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let g = sample_genes(QfMode::PermFixedQf, &mut rng);
            assert_eq!(g[128], FIXED_QF);
            for t in [&g[..64], &g[64..128]] {
                let mut v = t.to_vec();
                v.sort();
                v.dedup();
                assert_eq!(v.len(), 64);
                assert!(v.iter().all(|&x| (1..=255).contains(&x)));
            }
            let g = sample_genes(QfMode::NopermRandomQf, &mut rng);
            assert!((1..=99).contains(&g[128]));
        }
    }

    #[test]
    fn coverage_counts() {
        let s = |psnr: f64, size: usize| QfSample { index: 0, qf: 50, file_size: size, psnr };
        let a = vec![s(20.0, 1000), s(20.0, 1000)];
        let b = vec![s(20.0, 1000), s(40.0, 100_000), s(30.0, 10_000)];
        assert_eq!(occupied_cells(&[&a, &b], 50), vec![1, 3]);
        assert_eq!(occupied_cells(&[&[]], 50), vec![0]);
    }
}
