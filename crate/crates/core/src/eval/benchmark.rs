use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{betti_number, is_homeomorphic, rms_distance, strip_isolated, RmsMode};
use crate::baselines::{alpha_reeb, mapper, AlphaReebConfig, MapperConfig};
use crate::error::{Error, Result};
use crate::geometry::{load_cloud, CloudFormat, PointCloud};
use crate::hopes::{prune_degree_one, simplified_hopes, SkeletonGraph};
use crate::synth::{make_pattern, ManifestRow};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Hopes,
    Mapper,
    AlphaReeb,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Hopes => "hopes",
            Self::Mapper => "mapper",
            Self::AlphaReeb => "alpha-reeb",
        })
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "hopes" => Ok(Self::Hopes),
            "mapper" => Ok(Self::Mapper),
            "alpha-reeb" => Ok(Self::AlphaReeb),
            other => Err(Error::InvalidParameter(format!("unknown algorithm `{other}`"))),
        }
    }
}

/// Parameter grids and scoring options.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkConfig {
    pub algorithms: Vec<Algorithm>,
    pub mapper_t: Vec<f64>,
    pub mapper_eps: Vec<f64>,
    pub reeb_alpha: Vec<f64>,
    /// Neighbourhood threshold for alpha-Reeb; per-cloud default when `None`.
    pub reeb_graph_eps: Option<f64>,
    pub hopes_k: usize,
    pub hopes_l: usize,
    pub rms: RmsMode,
}

fn inclusive_range(start: f64, stop: f64, step: f64) -> Vec<f64> {
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    (0..count).map(|i| ((start + i as f64 * step) * 1e9).round() / 1e9).collect()
}

impl Default for BenchmarkConfig {
    fn default() -> Self {
        Self {
            algorithms: vec![Algorithm::Hopes, Algorithm::Mapper, Algorithm::AlphaReeb],
            mapper_t: inclusive_range(1.5, 3.3, 0.2),
            mapper_eps: inclusive_range(0.05, 0.5, 0.05),
            reeb_alpha: inclusive_range(0.15, 0.6, 0.05),
            reeb_graph_eps: None,
            hopes_k: 1,
            hopes_l: 1,
            rms: RmsMode::Mean,
        }
    }
}

/// A list `0.1,0.2` or an inclusive range `start:stop:step`.
fn parse_values(key: &str, value: &str) -> Result<Vec<f64>> {
    let bad = || Error::InvalidParameter(format!("cannot parse `{key} = {value}`"));
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad());
    let parts: Vec<&str> = value.split(':').collect();
    let values = match parts.as_slice() {
        [a, b, c] => {
            let (a, b, c) = (num(a)?, num(b)?, num(c)?);
            if !(c > 0.0) || b < a {
                return Err(bad());
            }
            inclusive_range(a, b, c)
        }
        [_] => value.split(',').map(num).collect::<Result<_>>()?,
        _ => return Err(bad()),
    };
    if values.is_empty() || values.iter().any(|v| !(*v > 0.0)) {
        return Err(bad());
    }
    Ok(values)
}

impl BenchmarkConfig {
    /// Builds a config from `key = value` pairs over the defaults. Keys:
    /// `algorithms`, `mapper_t`, `mapper_eps`, `reeb_alpha`, `reeb_graph_eps`,
    /// `hopes_k`, `hopes_l`, `rms`.
    pub fn from_map(map: &BTreeMap<String, String>) -> Result<Self> {
        let mut cfg = Self::default();
        for (key, value) in map {
            let int = || value.trim().parse::<usize>().ok().filter(|&v| v >= 1).ok_or_else(|| {
                Error::InvalidParameter(format!("`{key}` must be a positive integer, got `{value}`"))
            });
            match key.as_str() {
                "algorithms" => cfg.algorithms = value.split(',').map(str::parse).collect::<Result<_>>()?,
                "mapper_t" => cfg.mapper_t = parse_values(key, value)?,
                "mapper_eps" => cfg.mapper_eps = parse_values(key, value)?,
                "reeb_alpha" => cfg.reeb_alpha = parse_values(key, value)?,
                "reeb_graph_eps" => cfg.reeb_graph_eps = Some(parse_values(key, value)?[0]),
                "hopes_k" => cfg.hopes_k = int()?,
                "hopes_l" => cfg.hopes_l = int()?,
                "rms" => cfg.rms = value.trim().parse()?,
                other => return Err(Error::InvalidParameter(format!("unknown benchmark key `{other}`"))),
            }
        }
        if cfg.algorithms.is_empty() {
            return Err(Error::InvalidParameter("no algorithms selected".into()));
        }
        Ok(cfg)
    }
}

/// Best result of one algorithm on one cloud, each measure optimised
/// separately over the parameter grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CloudOutcome {
    pub row: usize,
    pub type_id: usize,
    pub algorithm: Algorithm,
    pub betti_ok: bool,
    /// Homeomorphic output from some configuration.
    pub homeo_ok: bool,
    /// Smallest RMS among outputs with the right Betti number.
    pub best_rms: Option<f64>,
    pub total_ms: f64,
    pub runs: usize,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub algorithm: Algorithm,
    pub pattern: String,
    pub noise: String,
    #[serde(rename = "betti%")]
    pub betti_pct: f64,
    #[serde(rename = "homeo%")]
    pub homeo_pct: Option<f64>,
    pub rms: Option<f64>,
    pub ms: f64,
    pub clouds: usize,
    pub failures: usize,
    #[serde(skip)]
    pub noise_kind: String,
    #[serde(skip)]
    pub noise_param: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdRow {
    pub pattern: String,
    pub noise_kind: String,
    pub algorithm: Algorithm,
    pub threshold_90: Option<f64>,
    pub threshold_95: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub rows: Vec<ReportRow>,
    pub outcomes: Vec<CloudOutcome>,
    pub rms: RmsMode,
}

struct Scored {
    betti_ok: bool,
    homeo_ok: bool,
    rms: Option<f64>,
}

fn score(output: &SkeletonGraph, cloud: &PointCloud, pattern: &SkeletonGraph, target: usize, mode: RmsMode) -> Result<Scored> {
    let pruned = prune_degree_one(output);
    let betti_ok = betti_number(&pruned) == target;
    let homeo_ok = betti_ok && is_homeomorphic(&strip_isolated(&pruned), pattern);
    let rms = if betti_ok { Some(rms_distance(cloud, &pruned, mode)?) } else { None };
    Ok(Scored { betti_ok, homeo_ok, rms })
}

fn timed<T>(f: impl FnOnce() -> Result<T>) -> Result<(T, f64)> {
    let start = Instant::now();
    let out = f()?;
    Ok((out, start.elapsed().as_secs_f64() * 1e3))
}

fn run_one(row: &ManifestRow, base: &Path, algorithm: Algorithm, cfg: &BenchmarkConfig) -> Result<(Vec<Scored>, f64)> {
    let path = base.join(&row.path);
    let cloud = if path.exists() { load_cloud(&path, CloudFormat::CsvCoords)? } else { row.regenerate()?.cloud()? };
    let graph = make_pattern(row.cloud_type()?.pattern)?;
    let target = graph.betti_number();
    let pattern = graph.to_skeleton(&row.pattern);
    let runs: Vec<Result<(Scored, f64)>> = match algorithm {
        Algorithm::Hopes => {
            let (s, ms) = timed(|| simplified_hopes(&cloud, cfg.hopes_k, cfg.hopes_l))?;
            vec![Ok((score(&s.simplified, &cloud, &pattern, target, cfg.rms)?, ms))]
        }
        Algorithm::Mapper => {
            let grid: Vec<(f64, f64)> =
                cfg.mapper_t.iter().flat_map(|&t| cfg.mapper_eps.iter().map(move |&e| (t, e))).collect();
            grid.par_iter()
                .map(|&(t, eps)| {
                    let (g, ms) = timed(|| mapper(&cloud, &MapperConfig::new(t, eps)))?;
                    Ok((score(&g, &cloud, &pattern, target, cfg.rms)?, ms))
                })
                .collect()
        }
        Algorithm::AlphaReeb => {
            let graph_eps = Some(cfg.reeb_graph_eps.unwrap_or_else(|| crate::baselines::default_graph_eps(&cloud)));
            cfg.reeb_alpha
                .par_iter()
                .map(|&alpha| {
                    let rc = AlphaReebConfig { alpha, graph_eps, start: None };
                    let (g, ms) = timed(|| alpha_reeb(&cloud, &rc))?;
                    Ok((score(&g, &cloud, &pattern, target, cfg.rms)?, ms))
                })
                .collect()
        }
    };
    let mut scored = Vec::with_capacity(runs.len());
    let mut total = 0.0;
    for r in runs {
        let (s, ms) = r?;
        scored.push(s);
        total += ms;
    }
    Ok((scored, total))
}

/// Runs every algorithm on every manifest row. Clouds are read from
/// `base_dir` when their files exist and regenerated from their seeds
/// otherwise. A failing cloud is recorded in its outcome and counted as
/// unsuccessful.
pub fn run_benchmark(rows: &[ManifestRow], base_dir: &Path, cfg: &BenchmarkConfig) -> EvalReport {
    let tasks: Vec<(usize, Algorithm)> =
        (0..rows.len()).flat_map(|i| cfg.algorithms.iter().map(move |&a| (i, a))).collect();
    let outcomes: Vec<CloudOutcome> = tasks
        .par_iter()
        .map(|&(i, algorithm)| {
            let mut out = CloudOutcome {
                row: i,
                type_id: rows[i].type_id,
                algorithm,
                betti_ok: false,
                homeo_ok: false,
                best_rms: None,
                total_ms: 0.0,
                runs: 0,
                error: None,
            };
            match run_one(&rows[i], base_dir, algorithm, cfg) {
                Ok((scored, ms)) => {
                    out.betti_ok = scored.iter().any(|s| s.betti_ok);
                    out.homeo_ok = scored.iter().any(|s| s.homeo_ok);
                    out.best_rms = scored.iter().filter_map(|s| s.rms).min_by(f64::total_cmp);
                    out.total_ms = ms;
                    out.runs = scored.len();
                }
                Err(e) => out.error = Some(e.to_string()),
            }
            out
        })
        .collect();
    EvalReport { rows: aggregate(rows, &outcomes, &cfg.algorithms), outcomes, rms: cfg.rms }
}

fn aggregate(rows: &[ManifestRow], outcomes: &[CloudOutcome], algorithms: &[Algorithm]) -> Vec<ReportRow> {
    let mut groups: BTreeMap<(usize, usize), Vec<&CloudOutcome>> = BTreeMap::new();
    for o in outcomes {
        let a = algorithms.iter().position(|&x| x == o.algorithm).unwrap();
        groups.entry((o.type_id, a)).or_default().push(o);
    }
    groups
        .into_iter()
        .map(|((_, a), group)| {
            let first = &rows[group[0].row];
            let clouds = group.len();
            let betti = group.iter().filter(|o| o.betti_ok).count();
            let homeo = group.iter().filter(|o| o.homeo_ok).count();
            let rms: Vec<f64> = group.iter().filter_map(|o| o.best_rms).collect();
            let runs: usize = group.iter().map(|o| o.runs).sum();
            let ms: f64 = group.iter().map(|o| o.total_ms).sum();
            ReportRow {
                algorithm: algorithms[a],
                pattern: first.pattern.clone(),
                noise: format!("{}:{}", first.noise_kind, first.noise_param),
                betti_pct: 100.0 * betti as f64 / clouds as f64,
                homeo_pct: (betti > 0).then(|| 100.0 * homeo as f64 / betti as f64),
                rms: (!rms.is_empty()).then(|| rms.iter().sum::<f64>() / rms.len() as f64),
                ms: if runs > 0 { ms / runs as f64 } else { 0.0 },
                clouds,
                failures: group.iter().filter(|o| o.error.is_some()).count(),
                noise_kind: first.noise_kind.clone(),
                noise_param: first.noise_param,
            }
        })
        .collect()
}

/// For each pattern, noise kind and algorithm, the largest noise level up to
/// which the Betti success rate stays at or above 90% (resp. 95%).
pub fn noise_thresholds(report: &EvalReport) -> Vec<ThresholdRow> {
    let mut groups: BTreeMap<(String, String, Algorithm), Vec<(f64, f64)>> = BTreeMap::new();
    for r in &report.rows {
        groups
            .entry((r.pattern.clone(), r.noise_kind.clone(), r.algorithm))
            .or_default()
            .push((r.noise_param, r.betti_pct));
    }
    groups
        .into_iter()
        .map(|((pattern, noise_kind, algorithm), mut levels)| {
            levels.sort_by(|a, b| a.0.total_cmp(&b.0));
            let last = |bar: f64| levels.iter().take_while(|(_, pct)| *pct >= bar).last().map(|l| l.0);
            ThresholdRow { pattern, noise_kind, algorithm, threshold_90: last(90.0), threshold_95: last(95.0) }
        })
        .collect()
}

fn write_csv<W: Write, T: Serialize>(mut out: W, header: &[String], rows: &[T]) -> Result<()> {
    for line in header {
        writeln!(out, "# {line}")?;
    }
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes the per-type report with `#` comment lines in front.
pub fn write_report<W: Write>(out: W, report: &EvalReport, header: &[String]) -> Result<()> {
    let mut lines = header.to_vec();
    lines.push(format!(
        "rms = sqrt({} of squared distances); baselines scored best-of-grid per measure and per cloud",
        match report.rms {
            RmsMode::Mean => "mean",
            RmsMode::Sum => "sum",
        }
    ));
    write_csv(out, &lines, &report.rows)
}

pub fn write_thresholds<W: Write>(out: W, rows: &[ThresholdRow], header: &[String]) -> Result<()> {
    write_csv(out, header, rows)
}
