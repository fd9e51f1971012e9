//! Tables and plot data computed from a result store.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use qtopt::metrics::{confidence_factor, exploration_exploitation};
use qtopt::stats::{average_ranks, wilcoxon_signed_rank, Direction, Verdict};
use qtopt::AlgorithmId;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{HarnessError, Result};
use crate::store::{write_json_file, ResultStore, RunRecord, SCHEMA_VERSION};

pub const SUMMARY_HEADER: [&str; 9] =
    ["image", "fs_us", "algorithm", "mean_obj", "rank_obj", "mean_closeness", "rank_closeness", "cf", "rank_cf"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub image: String,
    pub fs_us: usize,
    pub algorithm: AlgorithmId,
    pub mean_obj: f64,
    pub rank_obj: f64,
    pub mean_closeness: f64,
    pub rank_closeness: f64,
    pub cf: f64,
    pub rank_cf: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmRanks {
    pub algorithm: AlgorithmId,
    pub obj: f64,
    pub closeness: f64,
    pub cf: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub schema_version: u32,
    pub cs: usize,
    pub runs: usize,
    pub rows: Vec<SummaryRow>,
    pub average_rank: Vec<AlgorithmRanks>,
    pub overall_rank: Vec<AlgorithmRanks>,
    /// Cells left out because some of their runs are missing.
    pub incomplete: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WilcoxonRow {
    pub algorithm: AlgorithmId,
    /// Verdict of this row against each column; `None` on the diagonal.
    pub versus: Vec<Option<Verdict>>,
    pub wins: usize,
    pub ties: usize,
    pub losses: usize,
}

/// Pairwise tests on per-case mean objective values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WilcoxonMatrix {
    pub schema_version: u32,
    pub alpha: f64,
    pub algorithms: Vec<AlgorithmId>,
    pub rows: Vec<WilcoxonRow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
    All,
}

impl FromStr for ReportFormat {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            "all" => Ok(Self::All),
            _ => Err(HarnessError::Config(format!("unknown report format `{s}`"))),
        }
    }
}

impl fmt::Display for ReportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Csv => "csv",
            Self::Json => "json",
            Self::All => "all",
        })
    }
}

type CellKey = (usize, usize, usize);

struct Cell<'a> {
    runs: Vec<&'a RunRecord>,
}

/// Per-cell means, CF and within-case ranks. Cells with fewer than `runs`
/// records are reported as incomplete and excluded.
pub fn summarize(
    records: &[RunRecord],
    images: &[String],
    fs_list: &[usize],
    algorithms: &[AlgorithmId],
    runs: usize,
    cs: usize,
) -> Result<Summary> {
    if records.is_empty() {
        return Err(HarnessError::Store("no run records".into()));
    }
    let mut cells: BTreeMap<CellKey, Cell> = BTreeMap::new();
    for r in records {
        let (Some(i), Some(f), Some(a)) = (
            images.iter().position(|x| *x == r.image),
            fs_list.iter().position(|&x| x == r.fs_us),
            algorithms.iter().position(|&x| x == r.algorithm),
        ) else {
            return Err(HarnessError::Store(format!("record outside the configuration: {}/{}/{}", r.image, r.fs_us, r.algorithm)));
        };
        cells.entry((i, f, a)).or_insert_with(|| Cell { runs: Vec::new() }).runs.push(r);
    }
    let mut rows = Vec::new();
    let mut incomplete = Vec::new();
    for (i, image) in images.iter().enumerate() {
        for (f, &fs_us) in fs_list.iter().enumerate() {
            let mut case = Vec::new();
            for (a, &algorithm) in algorithms.iter().enumerate() {
                match cells.get(&(i, f, a)) {
                    Some(c) if c.runs.len() == runs => {
                        let n = runs as f64;
                        let closeness: Vec<usize> = c.runs.iter().map(|r| r.closeness).collect();
                        case.push(SummaryRow {
                            image: image.clone(),
                            fs_us,
                            algorithm,
                            mean_obj: c.runs.iter().map(|r| r.objective).sum::<f64>() / n,
                            rank_obj: 0.0,
                            mean_closeness: closeness.iter().sum::<usize>() as f64 / n,
                            rank_closeness: 0.0,
                            cf: confidence_factor(&closeness, cs)?,
                            rank_cf: 0.0,
                        });
                    }
                    _ => incomplete.push(format!("{image}/{fs_us}/{algorithm}")),
                }
            }
            let ranks = |v: Vec<f64>, d| average_ranks(&v, d);
            let ro = ranks(case.iter().map(|r| r.mean_obj).collect(), Direction::Minimise);
            let rc = ranks(case.iter().map(|r| r.mean_closeness).collect(), Direction::Minimise);
            let rf = ranks(case.iter().map(|r| r.cf).collect(), Direction::Maximise);
            for (k, row) in case.iter_mut().enumerate() {
                row.rank_obj = ro[k];
                row.rank_closeness = rc[k];
                row.rank_cf = rf[k];
            }
            rows.extend(case);
        }
    }
    if rows.is_empty() {
        return Err(HarnessError::Store("no complete cells".into()));
    }
    let present: Vec<AlgorithmId> = algorithms.iter().copied().filter(|a| rows.iter().any(|r| r.algorithm == *a)).collect();
    let average_rank: Vec<AlgorithmRanks> = present
        .iter()
        .map(|&algorithm| {
            let mine: Vec<&SummaryRow> = rows.iter().filter(|r| r.algorithm == algorithm).collect();
            let mean = |f: fn(&SummaryRow) -> f64| mine.iter().map(|r| f(r)).sum::<f64>() / mine.len() as f64;
            AlgorithmRanks { algorithm, obj: mean(|r| r.rank_obj), closeness: mean(|r| r.rank_closeness), cf: mean(|r| r.rank_cf) }
        })
        .collect();
    let overall = |f: fn(&AlgorithmRanks) -> f64| {
        average_ranks(&average_rank.iter().map(f).collect::<Vec<_>>(), Direction::Minimise)
    };
    let (oo, oc, of) = (overall(|r| r.obj), overall(|r| r.closeness), overall(|r| r.cf));
    let overall_rank = present
        .iter()
        .enumerate()
        .map(|(k, &algorithm)| AlgorithmRanks { algorithm, obj: oo[k], closeness: oc[k], cf: of[k] })
        .collect();
    Ok(Summary { schema_version: SCHEMA_VERSION, cs, runs, rows, average_rank, overall_rank, incomplete })
}

/// Row-versus-column Wilcoxon verdicts over the cases both algorithms
/// completed, with win/tie/loss counts.
pub fn wilcoxon_matrix(summary: &Summary, alpha: f64) -> Result<WilcoxonMatrix> {
    let algorithms: Vec<AlgorithmId> = summary.average_rank.iter().map(|r| r.algorithm).collect();
    let mut by_case: BTreeMap<(String, usize), BTreeMap<AlgorithmId, f64>> = BTreeMap::new();
    for r in &summary.rows {
        by_case.entry((r.image.clone(), r.fs_us)).or_default().insert(r.algorithm, r.mean_obj);
    }
    let mut rows = Vec::new();
    for &a in &algorithms {
        let mut versus = Vec::new();
        let (mut wins, mut ties, mut losses) = (0, 0, 0);
        for &b in &algorithms {
            if a == b {
                versus.push(None);
                continue;
            }
            let (xa, xb): (Vec<f64>, Vec<f64>) =
                by_case.values().filter_map(|m| Some((*m.get(&a)?, *m.get(&b)?))).unzip();
            let v = wilcoxon_signed_rank(&xa, &xb, alpha)?.verdict;
            match v {
                Verdict::Better => wins += 1,
                Verdict::Equivalent => ties += 1,
                Verdict::Worse => losses += 1,
            }
            versus.push(Some(v));
        }
        rows.push(WilcoxonRow { algorithm: a, versus, wins, ties, losses });
    }
    Ok(WilcoxonMatrix { schema_version: SCHEMA_VERSION, alpha, algorithms, rows })
}

/// Per-iteration trace rows of one run with XPL/XPT attached.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesRow {
    pub run: usize,
    pub iteration: usize,
    pub evaluations: usize,
    pub best_objective: f64,
    pub population_size: usize,
    pub diversity: f64,
    pub dispersion: f64,
    pub xpl: f64,
    pub xpt: f64,
}

pub fn series(record: &RunRecord) -> Result<Vec<SeriesRow>> {
    let disp: Vec<f64> = record.trace.iter().map(|t| t.dispersion).collect();
    let x = exploration_exploitation(&disp)?;
    Ok(record
        .trace
        .iter()
        .zip(x)
        .map(|(t, x)| SeriesRow {
            run: record.run,
            iteration: t.iteration,
            evaluations: t.evaluations,
            best_objective: t.best_objective,
            population_size: t.population_size,
            diversity: t.diversity,
            dispersion: t.dispersion,
            xpl: x.xpl,
            xpt: x.xpt,
        })
        .collect())
}

pub fn write_summary_csv<W: std::io::Write>(summary: &Summary, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in &summary.rows {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| HarnessError::Serde(e.to_string()))
}

pub fn write_wilcoxon_csv<W: std::io::Write>(m: &WilcoxonMatrix, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["algorithm".to_owned()];
    header.extend(m.algorithms.iter().map(|a| a.name().to_owned()));
    header.extend(["w", "t", "l"].map(str::to_owned));
    w.write_record(&header)?;
    for r in &m.rows {
        let mut rec = vec![r.algorithm.name().to_owned()];
        rec.extend(r.versus.iter().map(|v| v.map_or(String::new(), |v| v.to_string())));
        rec.extend([r.wins, r.ties, r.losses].map(|n| n.to_string()));
        w.write_record(&rec)?;
    }
    w.flush().map_err(|e| HarnessError::Serde(e.to_string()))
}

/// Structural check of `summary.json` against the documented schema.
pub fn validate_summary_json(v: &Value) -> Result<()> {
    let fail = |m: String| Err(HarnessError::Serde(format!("summary.json: {m}")));
    let Some(obj) = v.as_object() else { return fail("not an object".into()) };
    for key in ["schema_version", "cs", "runs"] {
        if !obj.get(key).is_some_and(Value::is_u64) {
            return fail(format!("`{key}` must be a non-negative integer"));
        }
    }
    if obj["schema_version"] != SCHEMA_VERSION {
        return fail(format!("unsupported schema_version {}", obj["schema_version"]));
    }
    let Some(rows) = obj.get("rows").and_then(Value::as_array) else { return fail("`rows` must be an array".into()) };
    for (i, row) in rows.iter().enumerate() {
        let Some(r) = row.as_object() else { return fail(format!("rows[{i}] is not an object")) };
        if r.len() != SUMMARY_HEADER.len() {
            return fail(format!("rows[{i}] has {} fields", r.len()));
        }
        for key in SUMMARY_HEADER {
            let ok = match key {
                "image" => r.get(key).is_some_and(Value::is_string),
                "algorithm" => r.get(key).and_then(Value::as_str).is_some_and(|s| s.parse::<AlgorithmId>().is_ok()),
                "fs_us" => r.get(key).is_some_and(Value::is_u64),
                _ => r.get(key).is_some_and(Value::is_number),
            };
            if !ok {
                return fail(format!("rows[{i}].{key} missing or mistyped"));
            }
        }
        let cf = r["cf"].as_f64().unwrap_or(-1.0);
        if !(0.0..=1.0).contains(&cf) {
            return fail(format!("rows[{i}].cf = {cf} outside [0, 1]"));
        }
    }
    for key in ["average_rank", "overall_rank"] {
        let Some(list) = obj.get(key).and_then(Value::as_array) else { return fail(format!("`{key}` must be an array")) };
        for (i, e) in list.iter().enumerate() {
            let ok = e.get("algorithm").and_then(Value::as_str).is_some_and(|s| s.parse::<AlgorithmId>().is_ok())
                && ["obj", "closeness", "cf"].iter().all(|k| e.get(*k).is_some_and(Value::is_number));
            if !ok {
                return fail(format!("{key}[{i}] malformed"));
            }
        }
    }
    if !obj.get("incomplete").and_then(Value::as_array).is_some_and(|a| a.iter().all(Value::is_string)) {
        return fail("`incomplete` must be an array of strings".into());
    }
    Ok(())
}

/// Writes the report files under `<store>/report` and returns their paths.
/// `cs` overrides the configured confidence coefficient.
pub fn emit_report(store: &ResultStore, format: ReportFormat, cs: Option<usize>) -> Result<Vec<PathBuf>> {
    let m = store.manifest()?;
    let records = store.read_runs()?;
    let images: Vec<String> = m.images.iter().map(|e| e.key.clone()).collect();
    let cs = cs.unwrap_or(m.config.cs);
    let summary = summarize(&records, &images, &m.config.fs_us, &m.config.algorithms, m.config.runs, cs)?;
    let wilcoxon = wilcoxon_matrix(&summary, m.config.alpha)?;
    let dir = store.report_dir();
    std::fs::create_dir_all(dir.join("series")).map_err(|e| HarnessError::io(&dir, e))?;
    let mut written = Vec::new();
    let create = |name: &str| -> Result<(PathBuf, std::fs::File)> {
        let p = dir.join(name);
        let f = std::fs::File::create(&p).map_err(|e| HarnessError::io(&p, e))?;
        Ok((p, f))
    };
    if matches!(format, ReportFormat::Csv | ReportFormat::All) {
        let (p, f) = create("summary.csv")?;
        write_summary_csv(&summary, f)?;
        written.push(p);
        let (p, f) = create("wilcoxon.csv")?;
        write_wilcoxon_csv(&wilcoxon, f)?;
        written.push(p);
        let (p, f) = create("ranks.csv")?;
        let mut w = csv::Writer::from_writer(f);
        w.write_record(["algorithm", "avg_rank_obj", "avg_rank_closeness", "avg_rank_cf", "rank_obj", "rank_closeness", "rank_cf"])?;
        for (a, o) in summary.average_rank.iter().zip(&summary.overall_rank) {
            w.write_record([
                a.algorithm.name().to_owned(),
                a.obj.to_string(),
                a.closeness.to_string(),
                a.cf.to_string(),
                o.obj.to_string(),
                o.closeness.to_string(),
                o.cf.to_string(),
            ])?;
        }
        w.flush().map_err(|e| HarnessError::io(&p, e))?;
        written.push(p);
        let mut by_cell: BTreeMap<(usize, usize, usize), Vec<&RunRecord>> = BTreeMap::new();
        for r in &records {
            let i = images.iter().position(|x| *x == r.image).unwrap_or(usize::MAX);
            let f = m.config.fs_us.iter().position(|&x| x == r.fs_us).unwrap_or(usize::MAX);
            let a = m.config.algorithms.iter().position(|&x| x == r.algorithm).unwrap_or(usize::MAX);
            by_cell.entry((i, f, a)).or_default().push(r);
        }
        for runs in by_cell.values() {
            let r0 = runs[0];
            let (p, f) = create(&format!("series/{}_{}_{}.csv", r0.image, r0.fs_us, r0.algorithm))?;
            let mut w = csv::Writer::from_writer(f);
            for r in runs {
                for row in series(r)? {
                    w.serialize(row)?;
                }
            }
            w.flush().map_err(|e| HarnessError::io(&p, e))?;
            written.push(p);
        }
    }
    if matches!(format, ReportFormat::Json | ReportFormat::All) {
        let p = dir.join("summary.json");
        write_json_file(&p, &summary)?;
        written.push(p);
        let p = dir.join("wilcoxon.json");
        write_json_file(&p, &wilcoxon)?;
        written.push(p);
    }
    Ok(written)
}
