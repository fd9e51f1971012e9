//! The 129-gene genotype (LQT, CQT, QF) and the target-size objective.

use std::sync::atomic::{AtomicU64, Ordering};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::PixelImage;
use crate::jpeg::{psnr_with, PreparedImage, PsnrChannels, QuantTable, MAX_QUALITY, MIN_QUALITY};
use crate::scalar::Real;

pub const GENES: usize = 129;
pub const QF_GENE: usize = 128;

/// Integer genotype: genes 0..64 are the luma table row-major, 64..128 the
/// chroma table, 128 the quality factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i32>", into = "Vec<i32>")]
pub struct Candidate(Vec<i32>);

impl Candidate {
    pub fn new(genes: Vec<i32>) -> Result<Self> {
        if genes.len() != GENES {
            return Err(Error::InvalidCandidate(format!("{} genes, expected {GENES}", genes.len())));
        }
        let bounds = Bounds::default();
        for (i, (&g, &(lo, hi))) in genes.iter().zip(bounds.pairs()).enumerate() {
            if g < lo || g > hi {
                return Err(Error::InvalidCandidate(format!("gene {i} = {g} outside [{lo}, {hi}]")));
            }
        }
        Ok(Self(genes))
    }

    /// Packs two tables and a quality factor.
    pub fn pack(lqt: &QuantTable, cqt: &QuantTable, qf: i32) -> Result<Self> {
        let mut genes = Vec::with_capacity(GENES);
        genes.extend(lqt.entries().iter().map(|&q| q as i32));
        genes.extend(cqt.entries().iter().map(|&q| q as i32));
        genes.push(qf);
        Self::new(genes)
    }

    pub fn genes(&self) -> &[i32] {
        &self.0
    }

    pub fn qf(&self) -> i32 {
        self.0[QF_GENE]
    }
}

impl TryFrom<Vec<i32>> for Candidate {
    type Error = Error;
    fn try_from(v: Vec<i32>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Candidate> for Vec<i32> {
    fn from(c: Candidate) -> Self {
        c.0
    }
}

/// Splits a candidate into (LQT, CQT, QF).
pub fn decode_candidate(c: &Candidate) -> (QuantTable, QuantTable, i32) {
    let g = c.genes();
    let lqt = QuantTable::from_i32(&g[..64]).expect("candidate invariants");
    let cqt = QuantTable::from_i32(&g[64..128]).expect("candidate invariants");
    (lqt, cqt, g[QF_GENE])
}

/// Inclusive integer bounds per gene.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds(Vec<(i32, i32)>);

impl Default for Bounds {
    fn default() -> Self {
        let mut v = vec![(1, 255); 128];
        v.push((MIN_QUALITY, MAX_QUALITY));
        Self(v)
    }
}

impl Bounds {
    pub fn new(pairs: Vec<(i32, i32)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::EmptyInput("bounds"));
        }
        if let Some(i) = pairs.iter().position(|&(lo, hi)| lo > hi) {
            return Err(Error::InvalidConfig(format!("bound {i} has low > high")));
        }
        Ok(Self(pairs))
    }

    /// The same range for every gene.
    pub fn uniform(dim: usize, lo: i32, hi: i32) -> Result<Self> {
        Self::new(vec![(lo, hi); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn pairs(&self) -> &[(i32, i32)] {
        &self.0
    }

    pub fn low(&self, i: usize) -> f64 {
        self.0[i].0 as f64
    }

    pub fn high(&self, i: usize) -> f64 {
        self.0[i].1 as f64
    }

    pub fn range(&self, i: usize) -> f64 {
        (self.0[i].1 - self.0[i].0) as f64
    }

    /// Rounds half away from zero, then clamps each gene.
    pub fn repair<T: Real>(&self, raw: &[T]) -> Result<Vec<i32>> {
        if raw.len() != self.dim() {
            return Err(Error::InvalidCandidate(format!("{} values, expected {}", raw.len(), self.dim())));
        }
        raw.iter()
            .zip(&self.0)
            .enumerate()
            .map(|(i, (&x, &(lo, hi)))| {
                if !x.is_finite() {
                    return Err(Error::NonFinite(i));
                }
                let r = x.as_f64().round();
                Ok(r.clamp(lo as f64, hi as f64) as i32)
            })
            .collect()
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<i32> {
        self.0.iter().map(|&(lo, hi)| rng.random_range(lo..=hi)).collect()
    }
}

/// Repairs 129 reals into a valid candidate under the default bounds.
pub fn repair<T: Real>(raw: &[T], bounds: &Bounds) -> Result<Candidate> {
    Candidate::new(bounds.repair(raw)?)
}

pub fn random_candidate<R: Rng + ?Sized>(rng: &mut R, bounds: &Bounds) -> Result<Candidate> {
    Candidate::new(bounds.random(rng))
}

/// What the search is asked to hit.
#[derive(Debug, Clone)]
pub struct ObjectiveSpec {
    pub image: PixelImage,
    /// Target file size in bytes.
    pub fs_us: usize,
    pub lambda: f64,
    pub channels: PsnrChannels,
}

pub const DEFAULT_LAMBDA: f64 = 10.0;

impl ObjectiveSpec {
    pub fn new(image: PixelImage, fs_us: usize) -> Self {
        Self { image, fs_us, lambda: DEFAULT_LAMBDA, channels: PsnrChannels::Pooled }
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.fs_us == 0 {
            return Err(Error::InvalidObjective("target size must be positive".into()));
        }
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return Err(Error::InvalidObjective(format!("lambda {} must be finite and >= 0", self.lambda)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub objective: f64,
    pub file_size: usize,
    pub psnr: f64,
    pub closeness: usize,
}

/// `|FS_US − FS_O| / FS_US + λ / PSNR`.
pub fn objective_value(fs_us: usize, file_size: usize, psnr: f64, lambda: f64) -> f64 {
    fs_us.abs_diff(file_size) as f64 / fs_us as f64 + lambda / psnr
}

impl Evaluation {
    pub fn from_parts(fs_us: usize, file_size: usize, psnr: f64, lambda: f64) -> Self {
        Self {
            objective: objective_value(fs_us, file_size, psnr, lambda),
            file_size,
            psnr,
            closeness: fs_us.abs_diff(file_size),
        }
    }
}

/// An objective bound to one image, with the DCT precomputed and a shared
/// evaluation counter.
pub struct JpegObjective {
    prepared: PreparedImage,
    fs_us: usize,
    lambda: f64,
    channels: PsnrChannels,
    evals: AtomicU64,
}

impl JpegObjective {
    pub fn new(spec: &ObjectiveSpec) -> Result<Self> {
        spec.validate()?;
        Ok(Self {
            prepared: PreparedImage::new(&spec.image),
            fs_us: spec.fs_us,
            lambda: spec.lambda,
            channels: spec.channels,
            evals: AtomicU64::new(0),
        })
    }

    pub fn fs_us(&self) -> usize {
        self.fs_us
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn eval_count(&self) -> u64 {
        self.evals.load(Ordering::Relaxed)
    }

    pub fn evaluate(&self, c: &Candidate) -> Result<Evaluation> {
        self.evals.fetch_add(1, Ordering::Relaxed);
        let (lqt, cqt, qf) = decode_candidate(c);
        let (jpeg, decoded) = self.prepared.encode_with_reconstruction(&lqt, &cqt, qf)?;
        let p = psnr_with(self.prepared.source(), &decoded, self.channels)?;
        Ok(Evaluation::from_parts(self.fs_us, jpeg.size_bytes(), p, self.lambda))
    }

    /// Encodes the candidate and returns the stream (for writing the result).
    pub fn encode(&self, c: &Candidate) -> Result<crate::jpeg::EncodedJpeg> {
        let (lqt, cqt, qf) = decode_candidate(c);
        self.prepared.encode(&lqt, &cqt, qf)
    }
}

/// One-shot evaluation; prefer [`JpegObjective`] for repeated calls.
pub fn evaluate(c: &Candidate, spec: &ObjectiveSpec) -> Result<Evaluation> {
    JpegObjective::new(spec)?.evaluate(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn all_sixteen() {
        let mut g = vec![16; 128];
        g.push(50);
        let (l, c, qf) = decode_candidate(&Candidate::new(g).unwrap());
        assert_eq!(l, QuantTable::flat(16).unwrap());
        assert_eq!(c, QuantTable::flat(16).unwrap());
        assert_eq!(qf, 50);
    }

    #[test]
    fn layout_is_row_major() {
        let mut g: Vec<i32> = (1..=64).collect();
        g.extend(vec![1; 64]);
        g.push(10);
        let (l, _, _) = decode_candidate(&Candidate::new(g).unwrap());
        assert_eq!((0..8).map(|c| l.get(0, c)).collect::<Vec<_>>(), (1..=8).collect::<Vec<u16>>());
        assert_eq!(l.get(1, 0), 9);
    }

    #[test]
    fn repair_examples() {
        let b = Bounds::default();
        let mut raw = vec![16.4f64; GENES];
        raw[1] = -3.0;
        raw[QF_GENE] = 150.7;
        let c = repair(&raw, &b).unwrap();
        assert_eq!(c.genes()[0], 16);
        assert_eq!(c.genes()[1], 1);
        assert_eq!(c.qf(), 99);
        raw[5] = f64::NAN;
        assert!(matches!(repair(&raw, &b), Err(Error::NonFinite(5))));
    }

    #[test]
    fn degenerate_bound() {
        let b = Bounds::uniform(10, 5, 5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(b.random(&mut rng).iter().all(|&g| g == 5));
    }

    #[test]
    fn objective_worked_example() {
        assert_eq!(objective_value(10_000, 10_000, 20.0, 10.0), 0.5);
        let e = Evaluation::from_parts(10_000, 10_023, 25.0, 10.0);
        assert_eq!(e.closeness, 23);
    }

    #[test]
    fn objective_increases_with_distance() {
        let near = objective_value(10_000, 10_010, 30.0, 10.0);
        let far = objective_value(10_000, 9_980, 30.0, 10.0);
        assert!(near < far);
    }

    #[test]
    fn rejects_bad_genes() {
        assert!(Candidate::new(vec![0; GENES]).is_err());
        assert!(Candidate::new(vec![1; 10]).is_err());
        let mut g = vec![1; GENES];
        g[QF_GENE] = 100;
        assert!(Candidate::new(g).is_err());
    }
}
