//! Command-line surface of the `qtopt` binary.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use qtopt::candidate::{decode_candidate, Candidate};
use qtopt::{make_optimizer, AlgorithmId, JpegObjective, ObjectiveSpec};
use serde::{Deserialize, Serialize};

use crate::config::{image_key, override_with, ExperimentConfig};
use crate::error::{HarnessError, Result};
use crate::experiment::run_experiment;
use crate::ingest::load_image;
use crate::qf::{analyze_qf, occupied_cells, write_samples_csv, QfMode, QfSample};
use crate::report::{emit_report, ReportFormat};
use crate::store::ResultStore;

#[derive(Debug, Parser)]
#[command(name = "qtopt", version, about = "Target-size JPEG compression by metaheuristic table search")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Search tables and QF for one image and write the best JPEG.
    Optimize(OptimizeArgs),
    /// Sample random tables and record (PSNR, file size) per sampling mode.
    AnalyzeQf(AnalyzeArgs),
    /// Run every (image, target size, algorithm) cell several times.
    Benchmark(BenchmarkArgs),
    /// Recompute summaries, ranks and tests from a benchmark directory.
    Report(ReportArgs),
}

fn parse_param(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected NAME=VALUE, got `{s}`"))?;
    let v: f64 = v.trim().parse().map_err(|_| format!("`{v}` is not a number"))?;
    Ok((k.trim().to_owned(), v))
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[arg(long)]
    pub image: Option<PathBuf>,
    #[arg(long)]
    pub algo: Option<AlgorithmId>,
    #[arg(long)]
    pub target_size: Option<usize>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub np: Option<usize>,
    #[arg(long)]
    pub budget: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Where to write the JPEG (default: `<image stem>_<ALGO>.jpg`).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Algorithm parameter override, repeatable.
    #[arg(long = "param", value_parser = parse_param)]
    pub params: Vec<(String, f64)>,
    /// TOML file; its keys override the flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Resolved settings of `optimize`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizeSettings {
    pub image: PathBuf,
    pub algorithm: AlgorithmId,
    pub target_size: usize,
    pub lambda: f64,
    pub population_size: usize,
    pub eval_budget: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long, required = true)]
    pub image: Vec<PathBuf>,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    /// One mode, or `all`.
    #[arg(long, default_value = "all")]
    pub mode: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 50)]
    pub bins: usize,
    #[arg(long, default_value = "qf-analysis")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct BenchmarkArgs {
    #[arg(long)]
    pub image: Vec<PathBuf>,
    /// Algorithm names, or `all`.
    #[arg(long)]
    pub algo: Vec<String>,
    #[arg(long)]
    pub target_size: Vec<usize>,
    #[arg(long)]
    pub runs: Option<usize>,
    #[arg(long)]
    pub np: Option<usize>,
    #[arg(long)]
    pub budget: Option<usize>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub cs: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value = "all")]
    pub format: ReportFormat,
    /// TOML file; its keys override the flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Benchmark output directory.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value = "all")]
    pub format: ReportFormat,
    #[arg(long)]
    pub cs: Option<usize>,
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))
}

pub fn optimize_settings(a: &OptimizeArgs) -> Result<OptimizeSettings> {
    let base = OptimizeSettings {
        image: a.image.clone().unwrap_or_default(),
        algorithm: a.algo.unwrap_or(AlgorithmId::Ga),
        target_size: a.target_size.unwrap_or(0),
        lambda: a.lambda.unwrap_or(qtopt::candidate::DEFAULT_LAMBDA),
        population_size: a.np.unwrap_or(qtopt::optim::DEFAULT_POPULATION),
        eval_budget: a.budget.unwrap_or(qtopt::optim::DEFAULT_BUDGET),
        seed: a.seed.unwrap_or(0),
        out: a.out.clone(),
        params: a.params.iter().cloned().collect(),
    };
    let s = match &a.config {
        Some(p) => override_with(&base, &read_text(p)?)?,
        None => base,
    };
    if s.image.as_os_str().is_empty() {
        return Err(HarnessError::Config("--image is required".into()));
    }
    if s.target_size == 0 {
        return Err(HarnessError::Config("--target-size must be positive".into()));
    }
    Ok(s)
}

#[derive(Debug, Serialize)]
struct OptimizeReport {
    algorithm: AlgorithmId,
    seed: u64,
    objective: f64,
    file_size: usize,
    psnr: f64,
    closeness: usize,
    eval_count: usize,
    qf: i32,
    lqt: Vec<i32>,
    cqt: Vec<i32>,
    jpeg: PathBuf,
}

fn optimize(a: &OptimizeArgs) -> Result<i32> {
    let s = optimize_settings(a)?;
    let image = load_image(&s.image)?;
    let spec = ObjectiveSpec::new(image, s.target_size).with_lambda(s.lambda);
    spec.validate().map_err(|e| HarnessError::Config(e.to_string()))?;
    let objective = JpegObjective::new(&spec)?;
    let mut cfg = qtopt::OptimizerConfig::new(s.algorithm, s.seed);
    cfg.population_size = s.population_size;
    cfg.eval_budget = s.eval_budget;
    for (k, &v) in &s.params {
        cfg = cfg.with_param(k, v);
    }
    let res = make_optimizer::<f64>(cfg)?.run(&objective)?;
    let best = Candidate::new(res.best_genes.clone())?;
    let jpeg = objective.encode(&best)?;
    let path = match &s.out {
        Some(p) => p.clone(),
        None => PathBuf::from(format!("{}_{}.jpg", image_key(&s.image)?, s.algorithm)),
    };
    std::fs::write(&path, jpeg.bytes()).map_err(|e| HarnessError::io(&path, e))?;
    let (lqt, cqt, qf) = decode_candidate(&best);
    let report = OptimizeReport {
        algorithm: s.algorithm,
        seed: s.seed,
        objective: res.best_objective,
        file_size: res.best_info.file_size,
        psnr: res.best_info.psnr,
        closeness: res.best_info.closeness,
        eval_count: res.eval_count,
        qf,
        lqt: lqt.entries().iter().map(|&v| v as i32).collect(),
        cqt: cqt.entries().iter().map(|&v| v as i32).collect(),
        jpeg: path,
    };
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(0)
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Coverage {
    pub image: String,
    pub samples: usize,
    pub bins: usize,
    pub occupied: BTreeMap<String, usize>,
    /// `noperm_random_qf` cells over `perm_fixed_qf` cells, when both ran.
    pub ratio: Option<f64>,
}

fn analyze(a: &AnalyzeArgs) -> Result<i32> {
    let modes: Vec<QfMode> = if a.mode.eq_ignore_ascii_case("all") { QfMode::ALL.to_vec() } else { vec![a.mode.parse()?] };
    if a.bins == 0 {
        return Err(HarnessError::Config("--bins must be positive".into()));
    }
    std::fs::create_dir_all(&a.out).map_err(|e| HarnessError::io(&a.out, e))?;
    let mut coverage = Vec::new();
    for path in &a.image {
        let key = image_key(path)?;
        let img = load_image(path)?;
        let mut tables: Vec<Vec<QfSample>> = Vec::new();
        for &mode in &modes {
            let samples = analyze_qf(&img, a.samples, mode, a.seed)?;
            let csv_path = a.out.join(format!("{key}_{mode}.csv"));
            let f = std::fs::File::create(&csv_path).map_err(|e| HarnessError::io(&csv_path, e))?;
            write_samples_csv(&samples, f)?;
            tables.push(samples);
        }
        let sets: Vec<&[QfSample]> = tables.iter().map(Vec::as_slice).collect();
        let cells = occupied_cells(&sets, a.bins);
        let occupied: BTreeMap<String, usize> = modes.iter().map(|m| m.to_string()).zip(cells.iter().copied()).collect();
        let get = |m: QfMode| occupied.get(m.name()).copied();
        let ratio = match (get(QfMode::NopermRandomQf), get(QfMode::PermFixedQf)) {
            (Some(n), Some(p)) if p > 0 => Some(n as f64 / p as f64),
            _ => None,
        };
        println!("{key}: occupied cells {occupied:?}{}", ratio.map_or(String::new(), |r| format!(", ratio {r:.2}")));
        coverage.push(Coverage { image: key, samples: a.samples, bins: a.bins, occupied, ratio });
    }
    crate::store::write_json_file(&a.out.join("coverage.json"), &coverage)?;
    Ok(0)
}

pub fn benchmark_config(a: &BenchmarkArgs) -> Result<ExperimentConfig> {
    let mut c = ExperimentConfig::default();
    c.images.clone_from(&a.image);
    for name in &a.algo {
        if name.eq_ignore_ascii_case("all") {
            c.algorithms.extend(AlgorithmId::ALL);
        } else {
            c.algorithms.push(name.parse().map_err(|e: qtopt::Error| HarnessError::Config(e.to_string()))?);
        }
    }
    if !a.target_size.is_empty() {
        c.fs_us.clone_from(&a.target_size);
    }
    c.runs = a.runs.unwrap_or(c.runs);
    c.population_size = a.np.unwrap_or(c.population_size);
    c.eval_budget = a.budget.unwrap_or(c.eval_budget);
    c.lambda = a.lambda.unwrap_or(c.lambda);
    c.cs = a.cs.unwrap_or(c.cs);
    c.seed = a.seed.unwrap_or(c.seed);
    if let Some(o) = &a.out {
        c.output.clone_from(o);
    }
    if let Some(p) = &a.config {
        c = c.overridden_by(&read_text(p)?)?;
    }
    c.validate().map_err(|e| match e {
        HarnessError::Core(e) => HarnessError::Config(e.to_string()),
        e => e,
    })?;
    Ok(c)
}

fn benchmark(a: &BenchmarkArgs) -> Result<i32> {
    let config = benchmark_config(a)?;
    let outcome = run_experiment(&config)?;
    for f in &outcome.failures {
        eprintln!("run failed: {}/{}/{} #{}: {}", f.image, f.fs_us, f.algorithm, f.run, f.error);
    }
    let files = emit_report(&outcome.store, a.format, None)?;
    println!("{} runs completed, {} failed; {} report files in {}", outcome.completed, outcome.failures.len(), files.len(), outcome.store.report_dir().display());
    Ok(outcome.exit_code())
}

fn report(a: &ReportArgs) -> Result<i32> {
    let store = ResultStore::open(&a.out)?;
    let files = emit_report(&store, a.format, a.cs)?;
    for f in files {
        println!("{}", f.display());
    }
    Ok(0)
}

/// Executes a parsed command; returns the process exit status.
pub fn run(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Optimize(a) => optimize(a),
        Command::AnalyzeQf(a) => analyze(a),
        Command::Benchmark(a) => benchmark(a),
        Command::Report(a) => report(a),
    }
}

/// Worker count from `QTOPT_THREADS`, if set.
pub fn threads_from_env() -> Result<Option<usize>> {
    match std::env::var("QTOPT_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(HarnessError::Config(format!("QTOPT_THREADS must be a positive integer, got `{v}`"))),
        },
        Err(_) => Ok(None),
    }
}
