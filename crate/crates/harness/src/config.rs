//! Benchmark configuration, TOML-loadable.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use qtopt::candidate::DEFAULT_LAMBDA;
use qtopt::metrics::DEFAULT_CS;
use qtopt::{AlgorithmId, OptimizerConfig};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub images: Vec<PathBuf>,
    pub algorithms: Vec<AlgorithmId>,
    pub fs_us: Vec<usize>,
    pub runs: usize,
    pub population_size: usize,
    pub eval_budget: usize,
    pub lambda: f64,
    pub cs: usize,
    pub alpha: f64,
    pub seed: u64,
    pub output: PathBuf,
    /// Per-algorithm parameter overrides.
    pub params: BTreeMap<AlgorithmId, BTreeMap<String, f64>>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            images: Vec::new(),
            algorithms: Vec::new(),
            fs_us: vec![10_000, 50_000],
            runs: 30,
            population_size: 20,
            eval_budget: 1000,
            lambda: DEFAULT_LAMBDA,
            cs: DEFAULT_CS,
            alpha: 0.05,
            seed: 0,
            output: PathBuf::from("results"),
            params: BTreeMap::new(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        Self::from_toml(&text)
    }

    /// `self` with every key present in the TOML document replaced.
    pub fn overridden_by(&self, text: &str) -> Result<Self> {
        override_with(self, text)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(HarnessError::Config(m.to_string()));
        if self.images.is_empty() {
            return bad("no images");
        }
        if self.algorithms.is_empty() {
            return bad("no algorithms");
        }
        if self.fs_us.is_empty() || self.fs_us.contains(&0) {
            return bad("fs_us must be a non-empty list of positive sizes");
        }
        if self.runs == 0 || self.cs == 0 {
            return bad("runs and cs must be positive");
        }
        if !(self.lambda.is_finite() && self.lambda > 0.0) {
            return bad("lambda must be positive");
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return bad("alpha must lie in (0, 1)");
        }
        let mut keys: Vec<String> = self.images.iter().map(|p| image_key(p)).collect::<Result<_>>()?;
        keys.sort();
        if keys.windows(2).any(|w| w[0] == w[1]) {
            return bad("image file stems must be unique");
        }
        for &a in &self.algorithms {
            self.optimizer(a, 0)?.validate()?;
        }
        Ok(())
    }

    pub fn optimizer(&self, algorithm: AlgorithmId, seed: u64) -> Result<OptimizerConfig> {
        let mut c = OptimizerConfig::new(algorithm, seed);
        c.population_size = self.population_size;
        c.eval_budget = self.eval_budget;
        if let Some(p) = self.params.get(&algorithm) {
            for (k, &v) in p {
                c = c.with_param(k, v);
            }
        }
        c.validate()?;
        Ok(c)
    }

    /// SHA-256 of the canonical JSON form, ignoring the output directory.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.output = PathBuf::new();
        let json = serde_json::to_string(&c).expect("config serialises");
        hex(&Sha256::digest(json.as_bytes()))
    }
}

/// Serialises `base`, replaces every top-level key present in the TOML
/// document `text`, and deserialises the result.
pub fn override_with<T: Serialize + DeserializeOwned>(base: &T, text: &str) -> Result<T> {
    let file: toml::Table = text.parse().map_err(|e: toml::de::Error| HarnessError::Config(e.to_string()))?;
    let mut merged = toml::Table::try_from(base).map_err(|e| HarnessError::Config(e.to_string()))?;
    for (k, v) in file {
        merged.insert(k, v);
    }
    merged.try_into().map_err(|e: toml::de::Error| HarnessError::Config(e.to_string()))
}

pub(crate) fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Store key of an image: its file stem.
pub fn image_key(path: &Path) -> Result<String> {
    path.file_stem()
        .and_then(|s| s.to_str())
        .filter(|s| !s.is_empty())
        .map(str::to_owned)
        .ok_or_else(|| HarnessError::Config(format!("cannot derive a name from {}", path.display())))
}

/// Seed of one run: the first 8 bytes of
/// `SHA-256(master ‖ image ‖ algorithm ‖ fs_us ‖ run)`.
pub fn run_seed(master: u64, image: &str, algorithm: AlgorithmId, fs_us: usize, run: usize) -> u64 {
    let mut h = Sha256::new();
    h.update(master.to_le_bytes());
    h.update((image.len() as u64).to_le_bytes());
    h.update(image.as_bytes());
    h.update(algorithm.name().as_bytes());
    h.update([0]);
    h.update((fs_us as u64).to_le_bytes());
    h.update((run as u64).to_le_bytes());
    let d = h.finalize();
    u64::from_le_bytes(d[..8].try_into().expect("8 bytes"))
}
