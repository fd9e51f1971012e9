//! Multi-run benchmark execution.

use std::collections::HashMap;

use qtopt::{make_optimizer, AlgorithmId, JpegObjective, ObjectiveSpec, PixelImage};
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::config::{hex, image_key, run_seed, ExperimentConfig};
use crate::error::{HarnessError, Result};
use crate::ingest::load_image;
use crate::store::{Failure, ImageEntry, Manifest, ResultStore, RunRecord, Timing, SCHEMA_VERSION};

pub struct Outcome {
    pub store: ResultStore,
    pub completed: usize,
    pub failures: Vec<Failure>,
}

impl Outcome {
    /// 0 when every run completed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        i32::from(!self.failures.is_empty())
    }
}

struct Job {
    image: usize,
    fs_us: usize,
    algorithm: AlgorithmId,
    run: usize,
}

fn load_images(config: &ExperimentConfig) -> Result<Vec<(ImageEntry, PixelImage)>> {
    config
        .images
        .iter()
        .map(|path| {
            let bytes = std::fs::read(path).map_err(|e| HarnessError::io(path, e))?;
            let img = load_image(path)?;
            let entry = ImageEntry {
                key: image_key(path)?,
                path: path.clone(),
                sha256: hex(&Sha256::digest(&bytes)),
                width: img.width(),
                height: img.height(),
                channels: img.channels(),
            };
            Ok((entry, img))
        })
        .collect()
}

fn run_one(config: &ExperimentConfig, key: &str, objective: &JpegObjective, job: &Job) -> Result<(RunRecord, f64)> {
    let seed = run_seed(config.seed, key, job.algorithm, job.fs_us, job.run);
    let res = make_optimizer::<f64>(config.optimizer(job.algorithm, seed)?)?.run(objective)?;
    let info = res.best_info;
    let record = RunRecord {
        image: key.to_owned(),
        fs_us: job.fs_us,
        algorithm: job.algorithm,
        run: job.run,
        seed,
        lambda: config.lambda,
        objective: res.best_objective,
        file_size: info.file_size,
        psnr: info.psnr,
        closeness: info.closeness,
        best_genes: res.best_genes,
        eval_count: res.eval_count,
        initial_mean: res.initial_mean,
        trace: res.trace,
    };
    Ok((record, res.wall_time))
}

/// Runs every (image, fs_us, algorithm, run) of `config` and persists the
/// records under `config.output`. A failing run is recorded and skipped.
/// Runs execute on the current rayon pool.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Outcome> {
    config.validate()?;
    let images = load_images(config)?;
    let manifest = Manifest {
        schema_version: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION").to_owned(),
        config_hash: config.hash(),
        config: config.clone(),
        images: images.iter().map(|(e, _)| e.clone()).collect(),
    };
    let store = ResultStore::create(&config.output, &manifest)?;

    let mut objectives = HashMap::new();
    for (i, (_, img)) in images.iter().enumerate() {
        for &fs in &config.fs_us {
            let spec = ObjectiveSpec::new(img.clone(), fs).with_lambda(config.lambda);
            objectives.insert((i, fs), JpegObjective::new(&spec)?);
        }
    }
    let mut jobs = Vec::new();
    for image in 0..images.len() {
        for &fs_us in &config.fs_us {
            for &algorithm in &config.algorithms {
                for run in 0..config.runs {
                    jobs.push(Job { image, fs_us, algorithm, run });
                }
            }
        }
    }
    let results: Vec<Result<(RunRecord, f64)>> = jobs
        .par_iter()
        .map(|job| run_one(config, &images[job.image].0.key, &objectives[&(job.image, job.fs_us)], job))
        .collect();

    let mut timings = Vec::new();
    let mut failures = Vec::new();
    for (job, res) in jobs.iter().zip(results) {
        let key = &images[job.image].0.key;
        match res.and_then(|(rec, wall)| store.write_run(&rec).map(|_| wall)) {
            Ok(wall_time) => timings.push(Timing {
                image: key.clone(),
                fs_us: job.fs_us,
                algorithm: job.algorithm,
                run: job.run,
                wall_time,
            }),
            Err(e) => failures.push(Failure {
                image: key.clone(),
                fs_us: job.fs_us,
                algorithm: job.algorithm,
                run: job.run,
                error: e.to_string(),
            }),
        }
    }
    store.write_timings(&timings)?;
    store.write_failures(&failures)?;
    Ok(Outcome { store, completed: timings.len(), failures })
}
