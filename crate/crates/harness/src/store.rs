//! On-disk layout of a benchmark:
//!
//! ```text
//! <out>/manifest.json                      config, its hash, image digests
//! <out>/runs/<image>/<fs_us>/<ALGO>/run_<k>.json
//! <out>/timings.csv                        wall time per run (not reproducible)
//! <out>/failures.json                      cells that could not run
//! <out>/report/...                         see `report`
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use qtopt::optim::TracePoint;
use qtopt::AlgorithmId;
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::error::{HarnessError, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImageEntry {
    pub key: String,
    pub path: PathBuf,
    pub sha256: String,
    pub width: u32,
    pub height: u32,
    pub channels: u8,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub schema_version: u32,
    pub tool_version: String,
    pub config_hash: String,
    pub config: ExperimentConfig,
    pub images: Vec<ImageEntry>,
}

/// Everything kept about one optimiser run, minus wall time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub image: String,
    pub fs_us: usize,
    pub algorithm: AlgorithmId,
    pub run: usize,
    pub seed: u64,
    pub lambda: f64,
    pub objective: f64,
    pub file_size: usize,
    pub psnr: f64,
    pub closeness: usize,
    pub best_genes: Vec<i32>,
    pub eval_count: usize,
    pub initial_mean: f64,
    pub trace: Vec<TracePoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub image: String,
    pub fs_us: usize,
    pub algorithm: AlgorithmId,
    pub run: usize,
    pub wall_time: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub image: String,
    pub fs_us: usize,
    pub algorithm: AlgorithmId,
    pub run: usize,
    pub error: String,
}

#[derive(Debug, Clone)]
pub struct ResultStore {
    root: PathBuf,
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    }
    fs::write(path, text).map_err(|e| HarnessError::io(path, e))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| HarnessError::Store(format!("{}: {e}", path.display())))
}

impl ResultStore {
    /// Starts a store at `root`, writing the manifest. An existing store is
    /// reused only if it was produced by the same configuration.
    pub fn create(root: impl Into<PathBuf>, manifest: &Manifest) -> Result<Self> {
        let store = Self { root: root.into() };
        let path = store.root.join("manifest.json");
        if path.exists() {
            let old: Manifest = read_json(&path)?;
            if old.config_hash != manifest.config_hash {
                return Err(HarnessError::Store(format!(
                    "{} holds results for config {}, not {}",
                    store.root.display(),
                    old.config_hash,
                    manifest.config_hash
                )));
            }
        }
        write_json(&path, manifest)?;
        Ok(store)
    }

    pub fn open(root: impl Into<PathBuf>) -> Result<Self> {
        let store = Self { root: root.into() };
        let manifest = store.manifest()?;
        if manifest.config_hash != manifest.config.hash() {
            return Err(HarnessError::Store("manifest config hash does not match its config".into()));
        }
        Ok(store)
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn manifest(&self) -> Result<Manifest> {
        read_json(&self.root.join("manifest.json"))
    }

    pub fn run_path(&self, image: &str, fs_us: usize, algorithm: AlgorithmId, run: usize) -> PathBuf {
        self.root.join("runs").join(image).join(fs_us.to_string()).join(algorithm.name()).join(format!("run_{run}.json"))
    }

    pub fn write_run(&self, r: &RunRecord) -> Result<()> {
        write_json(&self.run_path(&r.image, r.fs_us, r.algorithm, r.run), r)
    }

    pub fn read_run(&self, image: &str, fs_us: usize, algorithm: AlgorithmId, run: usize) -> Result<Option<RunRecord>> {
        let path = self.run_path(image, fs_us, algorithm, run);
        if !path.exists() {
            return Ok(None);
        }
        read_json(&path).map(Some)
    }

    /// Every run record the manifest's configuration calls for that exists
    /// on disk, in configuration order.
    pub fn read_runs(&self) -> Result<Vec<RunRecord>> {
        let m = self.manifest()?;
        let mut out = Vec::new();
        for img in &m.images {
            for &fs in &m.config.fs_us {
                for &algo in &m.config.algorithms {
                    for run in 0..m.config.runs {
                        if let Some(r) = self.read_run(&img.key, fs, algo, run)? {
                            out.push(r);
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn write_timings(&self, timings: &[Timing]) -> Result<()> {
        let path = self.root.join("timings.csv");
        let mut w = csv::Writer::from_path(&path)?;
        for t in timings {
            w.serialize(t)?;
        }
        w.flush().map_err(|e| HarnessError::io(&path, e))
    }

    pub fn write_failures(&self, failures: &[Failure]) -> Result<()> {
        write_json(&self.root.join("failures.json"), &failures)
    }

    pub fn report_dir(&self) -> PathBuf {
        self.root.join("report")
    }
}

pub(crate) fn write_json_file<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    write_json(path, value)
}
