//! Batch runs over an instance directory and gap reports.

use std::fmt;
use std::path::{Path, PathBuf};
use std::time::Duration;

use rayon::prelude::*;

use crate::engine::{gap, run, EngineConfig, RunStats};
use crate::io::{parse_instance, BksTable, IoError, ParseOptions};
use crate::model::{Instance, Variant};

/// Aggregated results of several seeded runs on one instance. Costs only
/// count runs that ended with a feasible solution.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub instance: String,
    pub customers: usize,
    pub depots: usize,
    pub runs: usize,
    pub feasible_runs: usize,
    pub f_best: Option<f64>,
    pub f_avg: Option<f64>,
    /// Mean wall time per run, in seconds.
    pub time: f64,
    pub bks: Option<f64>,
    pub gap: Option<f64>,
}

impl BenchRow {
    /// Builds a row from per-run outcomes `(cost, feasible, wall time)`.
    pub fn from_runs(inst: &Instance, runs: &[(f64, bool, Duration)], bks: Option<f64>) -> Self {
        let costs: Vec<f64> = runs.iter().filter(|r| r.1).map(|r| r.0).collect();
        let f_best = costs.iter().copied().reduce(f64::min);
        let f_avg = (!costs.is_empty()).then(|| costs.iter().sum::<f64>() / costs.len() as f64);
        let time = if runs.is_empty() {
            0.0
        } else {
            runs.iter().map(|r| r.2.as_secs_f64()).sum::<f64>() / runs.len() as f64
        };
        BenchRow {
            instance: inst.name().to_string(),
            customers: inst.num_customers(),
            depots: inst.num_depots(),
            runs: runs.len(),
            feasible_runs: costs.len(),
            f_best,
            f_avg,
            time,
            bks,
            gap: f_best.zip(bks).map(|(f, b)| gap(f, b)),
        }
    }
}

/// Column means over the rows where a value is present.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchSummary {
    pub instances: usize,
    pub f_best: Option<f64>,
    pub f_avg: Option<f64>,
    pub time: Option<f64>,
    pub gap: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
}

fn mean(xs: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    let v: Vec<f64> = xs.flatten().collect();
    (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
}

fn cell(x: Option<f64>) -> String {
    x.map_or_else(String::new, |v| format!("{v:.2}"))
}

impl BenchReport {
    /// Aggregates, always recomputed from the rows.
    pub fn summary(&self) -> BenchSummary {
        let r = &self.rows;
        BenchSummary {
            instances: r.len(),
            f_best: mean(r.iter().map(|x| x.f_best)),
            f_avg: mean(r.iter().map(|x| x.f_avg)),
            time: mean(r.iter().map(|x| Some(x.time))),
            gap: mean(r.iter().map(|x| x.gap)),
        }
    }

    /// One line per instance plus a final `mean` line. Absent values are
    /// left empty.
    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<(), csv::Error> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record([
            "instance",
            "customers",
            "depots",
            "runs",
            "feasible_runs",
            "f_best",
            "f_avg",
            "time_s",
            "bks",
            "gap_pct",
        ])?;
        for r in &self.rows {
            wr.write_record([
                r.instance.clone(),
                r.customers.to_string(),
                r.depots.to_string(),
                r.runs.to_string(),
                r.feasible_runs.to_string(),
                cell(r.f_best),
                cell(r.f_avg),
                format!("{:.2}", r.time),
                cell(r.bks),
                cell(r.gap),
            ])?;
        }
        let s = self.summary();
        wr.write_record([
            "mean".to_string(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            cell(s.f_best),
            cell(s.f_avg),
            cell(s.time),
            String::new(),
            cell(s.gap),
        ])?;
        wr.flush()?;
        Ok(())
    }

    pub fn save_csv(&self, path: &Path) -> Result<(), IoError> {
        let f = std::fs::File::create(path).map_err(|e| IoError::file(path, e))?;
        self.write_csv(f).map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(e) => IoError::file(path, e),
            other => IoError::Bks(format!("{other:?}")),
        })
    }
}

impl fmt::Display for BenchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dash = |x: Option<f64>| x.map_or_else(|| "-".to_string(), |v| format!("{v:.2}"));
        writeln!(
            f,
            "{:<12} {:>5} {:>3} {:>5} {:>11} {:>11} {:>9} {:>11} {:>8}",
            "instance", "n", "t", "runs", "f_best", "f_avg", "time(s)", "bks", "gap(%)"
        )?;
        for r in &self.rows {
            writeln!(
                f,
                "{:<12} {:>5} {:>3} {:>5} {:>11} {:>11} {:>9.2} {:>11} {:>8}",
                r.instance,
                r.customers,
                r.depots,
                format!("{}/{}", r.feasible_runs, r.runs),
                dash(r.f_best),
                dash(r.f_avg),
                r.time,
                dash(r.bks),
                dash(r.gap)
            )?;
        }
        let s = self.summary();
        write!(
            f,
            "{:<12} {:>5} {:>3} {:>5} {:>11} {:>11} {:>9} {:>11} {:>8}",
            "mean",
            "",
            "",
            "",
            dash(s.f_best),
            dash(s.f_avg),
            dash(s.time),
            "",
            dash(s.gap)
        )
    }
}

/// Regular, non-hidden files of `dir`, sorted by name.
pub fn instance_files(dir: &Path) -> Result<Vec<PathBuf>, IoError> {
    let rd = std::fs::read_dir(dir).map_err(|e| IoError::file(dir, e))?;
    let mut files = Vec::new();
    for entry in rd {
        let entry = entry.map_err(|e| IoError::file(dir, e))?;
        let path = entry.path();
        let hidden = entry.file_name().to_string_lossy().starts_with('.');
        if path.is_file() && !hidden {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

/// Solves every instance file of `dir` `runs` times with seeds
/// `cfg.seed, cfg.seed + 1, ...`. Runs execute on the rayon pool; the report
/// keeps file order.
pub fn run_benchmark(
    dir: &Path,
    variant: Variant,
    opts: ParseOptions,
    bks: Option<&BksTable>,
    cfg: &EngineConfig,
    runs: usize,
) -> Result<BenchReport, IoError> {
    let instances = instance_files(dir)?
        .iter()
        .map(|p| parse_instance(p, variant, opts))
        .collect::<Result<Vec<_>, _>>()?;
    run_instances(&instances, bks, cfg, runs)
}

pub fn run_instances(
    instances: &[Instance],
    bks: Option<&BksTable>,
    cfg: &EngineConfig,
    runs: usize,
) -> Result<BenchReport, IoError> {
    let jobs: Vec<(usize, u64)> = (0..instances.len())
        .flat_map(|i| (0..runs as u64).map(move |k| (i, k)))
        .collect();
    let results: Vec<RunStats> = jobs
        .par_iter()
        .map(|&(i, k)| {
            let cfg = EngineConfig {
                seed: cfg.seed.wrapping_add(k),
                ..cfg.clone()
            };
            let stats = run(&instances[i], &cfg)?;
            log::info!(
                "{} seed {}: {:.2}{} in {:.1}s",
                instances[i].name(),
                cfg.seed,
                stats.best_cost,
                if stats.feasible { "" } else { " (infeasible)" },
                stats.wall_time.as_secs_f64()
            );
            Ok(stats)
        })
        .collect::<Result<_, IoError>>()?;

    let rows = instances
        .iter()
        .enumerate()
        .map(|(i, inst)| {
            let outcomes: Vec<(f64, bool, Duration)> = results[i * runs..(i + 1) * runs]
                .iter()
                .map(|s| (s.best_cost, s.feasible, s.wall_time))
                .collect();
            BenchRow::from_runs(inst, &outcomes, bks.and_then(|t| t.get(inst.name())).map(|e| e.cost))
        })
        .collect();
    Ok(BenchReport { rows })
}
