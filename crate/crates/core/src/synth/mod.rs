//! Synthetic clouds: pattern graphs, uniform sampling along edges, noise, and
//! reproducible dataset generation.

mod pattern;

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Point2, PointCloud};

pub use pattern::{make_pattern, EmbeddedGraph, PatternKind};

/// Sample points per unit length used by the published dataset.
pub const DEFAULT_DENSITY: f64 = 100.0;

/// Points on a graph, each remembering the edge it was drawn from.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeSample {
    pub points: Vec<Point2>,
    pub edges: Vec<usize>,
}

/// Draws `round(density * total length)` points uniformly by length.
///
/// A single uniform `t` in `[0, L)` picks edge `j` through the prefix sums
/// of edge lengths and the point `w u + (1 - w) v` with
/// `w = (t - prefix_j) / l_j`.
pub fn sample_points<R: Rng>(g: &EmbeddedGraph, density: f64, rng: &mut R) -> Result<EdgeSample> {
    if !(density > 0.0) {
        return Err(Error::InvalidParameter(format!("density must be positive, got {density}")));
    }
    let lengths: Vec<f64> = (0..g.edges.len()).map(|e| g.edge_length(e)).collect();
    let mut prefix = Vec::with_capacity(lengths.len() + 1);
    prefix.push(0.0);
    for l in &lengths {
        prefix.push(prefix.last().unwrap() + l);
    }
    let total = *prefix.last().unwrap();
    let count = (density * total).round() as usize;
    let mut sample = EdgeSample { points: Vec::with_capacity(count), edges: Vec::with_capacity(count) };
    for _ in 0..count {
        let t = rng.gen::<f64>() * total;
        let j = (prefix.partition_point(|&p| p <= t) - 1).min(lengths.len() - 1);
        let w = ((t - prefix[j]) / lengths[j]).clamp(0.0, 1.0);
        let [u, v] = g.edges[j].map(|i| g.vertices[i]);
        sample.points.push([w * u[0] + (1.0 - w) * v[0], w * u[1] + (1.0 - w) * v[1]]);
        sample.edges.push(j);
    }
    Ok(sample)
}

/// Perturbation applied to each sampled point along and across its edge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "param", rename_all = "lowercase")]
pub enum NoiseModel {
    None,
    /// Both shifts uniform in `[-mu, mu]`.
    Uniform(f64),
    /// Both shifts normal with mean 0 and this standard deviation.
    Gaussian(f64),
}

impl NoiseModel {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::None => "none",
            Self::Uniform(_) => "uniform",
            Self::Gaussian(_) => "gaussian",
        }
    }

    pub fn param(&self) -> f64 {
        match *self {
            Self::None => 0.0,
            Self::Uniform(p) | Self::Gaussian(p) => p,
        }
    }

    pub fn from_parts(kind: &str, param: f64) -> Result<Self> {
        let model = match kind {
            "none" => Self::None,
            "uniform" => Self::Uniform(param),
            "gaussian" => Self::Gaussian(param),
            other => return Err(Error::InvalidParameter(format!("unknown noise kind `{other}`"))),
        };
        if model != Self::None && !(param >= 0.0 && param.is_finite()) {
            return Err(Error::InvalidParameter(format!("noise parameter must be non-negative, got {param}")));
        }
        Ok(model)
    }
}

impl fmt::Display for NoiseModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::None => f.write_str("none"),
            _ => write!(f, "{}:{}", self.kind(), self.param()),
        }
    }
}

impl FromStr for NoiseModel {
    type Err = Error;

    /// Accepts `none`, `uniform:0.1` and `gaussian:0.04`.
    fn from_str(s: &str) -> Result<Self> {
        match s.split_once(':') {
            None => Self::from_parts(s.trim(), 0.0),
            Some((kind, p)) => {
                let param = p
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidParameter(format!("cannot parse noise `{s}`")))?;
                Self::from_parts(kind.trim(), param)
            }
        }
    }
}

/// Shifts every point by `d_e` along its edge (first to second endpoint) and
/// `d_perp` to the left of it; the two shifts are drawn independently, in
/// that order.
pub fn apply_noise<R: Rng>(g: &EmbeddedGraph, sample: &EdgeSample, model: NoiseModel, rng: &mut R) -> Vec<Point2> {
    let mut draw: Box<dyn FnMut(&mut R) -> f64> = match model {
        NoiseModel::None => return sample.points.clone(),
        NoiseModel::Uniform(mu) if mu == 0.0 => return sample.points.clone(),
        NoiseModel::Gaussian(sigma) if sigma == 0.0 => return sample.points.clone(),
        NoiseModel::Uniform(mu) => Box::new(move |r: &mut R| r.gen_range(-mu..=mu)),
        NoiseModel::Gaussian(sigma) => {
            let normal = Normal::new(0.0, sigma).expect("finite non-negative deviation");
            Box::new(move |r: &mut R| normal.sample(r))
        }
    };
    let frames: Vec<(Point2, Point2)> = (0..g.edges.len()).map(|e| g.frame(e)).collect();
    sample
        .points
        .iter()
        .zip(&sample.edges)
        .map(|(p, &e)| {
            let (along, left) = frames[e];
            let de = draw(rng);
            let dp = draw(rng);
            [p[0] + de * along[0] + dp * left[0], p[1] + de * along[1] + dp * left[1]]
        })
        .collect()
}

/// One noisy cloud together with the pattern it came from.
#[derive(Debug, Clone)]
pub struct GeneratedCloud {
    pub pattern: EmbeddedGraph,
    pub points: Vec<Point2>,
    pub source_edges: Vec<usize>,
}

impl GeneratedCloud {
    pub fn cloud(&self) -> Result<PointCloud> {
        PointCloud::from_points(&self.points)
    }
}

/// Samples and perturbs one cloud from a single seeded stream.
pub fn generate_cloud(pattern: PatternKind, noise: NoiseModel, density: f64, seed: u64) -> Result<GeneratedCloud> {
    let graph = make_pattern(pattern)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sample = sample_points(&graph, density, &mut rng)?;
    let points = apply_noise(&graph, &sample, noise, &mut rng);
    Ok(GeneratedCloud { pattern: graph, points, source_edges: sample.edges })
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Seed of cloud `index` of type `type_id`; independent of generation order.
pub fn cloud_seed(master: u64, type_id: usize, index: usize) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ type_id as u64) ^ index as u64)
}

/// A pattern with a noise setting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CloudType {
    pub pattern: PatternKind,
    pub noise: NoiseModel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSpec {
    pub types: Vec<CloudType>,
    pub clouds_per_type: usize,
    pub density: f64,
    pub master_seed: u64,
}

fn steps(first: f64, step: f64, count: usize) -> Vec<f64> {
    // computed from integers so that e.g. 0.3 prints as 0.3
    (0..count).map(|i| ((first / step).round() + i as f64) * step).map(|v| (v * 1e6).round() / 1e6).collect()
}

/// The published grid of 395 cloud types: 70 wheel, 108 grid and 217 hexagon types.
pub fn paper_grid() -> Vec<CloudType> {
    let mut types = Vec::new();
    let mut add = |patterns: &[PatternKind], uniform: Vec<f64>, gaussian: Vec<f64>| {
        for &pattern in patterns {
            for &mu in &uniform {
                types.push(CloudType { pattern, noise: NoiseModel::Uniform(mu) });
            }
            for &sigma in &gaussian {
                types.push(CloudType { pattern, noise: NoiseModel::Gaussian(sigma) });
            }
        }
    };
    let wheels: Vec<_> = (3..=9).map(PatternKind::Wheel).collect();
    add(&wheels, steps(0.05, 0.05, 5), steps(0.02, 0.02, 5));
    let grids: Vec<_> = [(1, 1), (2, 1), (3, 1), (2, 2), (3, 2), (3, 3)]
        .into_iter()
        .map(|(k, l)| PatternKind::Grid(k, l))
        .collect();
    add(&grids, steps(0.05, 0.05, 8), steps(0.02, 0.02, 10));
    let hexes: Vec<_> = (1..=7).map(PatternKind::Hexagons).collect();
    add(&hexes, steps(0.05, 0.05, 15), steps(0.02, 0.02, 16));
    types
}

/// One manifest line. `path` is relative to the manifest's directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestRow {
    pub type_id: usize,
    pub pattern: String,
    pub noise_kind: String,
    pub noise_param: f64,
    pub seed: u64,
    pub n_points: usize,
    pub path: String,
    pub density: f64,
}

impl ManifestRow {
    pub fn cloud_type(&self) -> Result<CloudType> {
        Ok(CloudType {
            pattern: self.pattern.parse()?,
            noise: NoiseModel::from_parts(&self.noise_kind, self.noise_param)?,
        })
    }

    /// Regenerates the cloud from the row's pattern, noise, density and seed.
    pub fn regenerate(&self) -> Result<GeneratedCloud> {
        let t = self.cloud_type()?;
        generate_cloud(t.pattern, t.noise, self.density, self.seed)
    }
}

fn file_stem(t: &CloudType) -> String {
    format!("{}_{}", t.pattern, t.noise).replace([':', '.'], "-")
}

/// Lists every cloud of `spec` without touching the filesystem.
pub fn plan_dataset(spec: &DatasetSpec) -> Result<Vec<ManifestRow>> {
    let mut rows = Vec::with_capacity(spec.types.len() * spec.clouds_per_type);
    for (type_id, t) in spec.types.iter().enumerate() {
        let total = make_pattern(t.pattern)?.total_length();
        for index in 0..spec.clouds_per_type {
            rows.push(ManifestRow {
                type_id,
                pattern: t.pattern.to_string(),
                noise_kind: t.noise.kind().into(),
                noise_param: t.noise.param(),
                seed: cloud_seed(spec.master_seed, type_id, index),
                n_points: (spec.density * total).round() as usize,
                path: format!("clouds/{type_id:03}_{}_{index:03}.csv", file_stem(t)),
                density: spec.density,
            });
        }
    }
    Ok(rows)
}

/// Writes `manifest.csv` into `out_dir` and, when `write_clouds` is set,
/// every cloud file, generated in parallel. `header` lines go on top of the
/// manifest as `#` comments.
pub fn generate_dataset(
    spec: &DatasetSpec,
    out_dir: &Path,
    write_clouds: bool,
    header: &[String],
) -> Result<Vec<ManifestRow>> {
    let rows = plan_dataset(spec)?;
    fs::create_dir_all(out_dir)?;
    if write_clouds {
        fs::create_dir_all(out_dir.join("clouds"))?;
        rows.par_iter().try_for_each(|row| write_cloud_file(row, &out_dir.join(&row.path)))?;
    }
    write_manifest(&rows, &out_dir.join("manifest.csv"), header)?;
    Ok(rows)
}

fn write_cloud_file(row: &ManifestRow, path: &Path) -> Result<()> {
    let generated = row.regenerate()?;
    let mut out = std::io::BufWriter::new(fs::File::create(path)?);
    writeln!(
        out,
        "# pattern={} noise={}:{} seed={} density={}",
        row.pattern, row.noise_kind, row.noise_param, row.seed, row.density
    )?;
    generated.cloud()?.write_csv(&mut out)?;
    out.flush()?;
    Ok(())
}

pub fn write_manifest(rows: &[ManifestRow], path: &Path, header: &[String]) -> Result<()> {
    let mut file = std::io::BufWriter::new(fs::File::create(path)?);
    for line in header {
        writeln!(file, "# {line}")?;
    }
    let mut w = csv::Writer::from_writer(file);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_manifest(path: &Path) -> Result<Vec<ManifestRow>> {
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_path(path)?;
    Ok(r.deserialize().collect::<std::result::Result<_, _>>()?)
}

/// Resolves a manifest row's cloud path against the manifest's location.
pub fn row_path(manifest: &Path, row: &ManifestRow) -> PathBuf {
    manifest.parent().unwrap_or(Path::new(".")).join(&row.path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::segment::distance_to_set;

    #[test]
    fn grid_one_by_one_has_four_hundred_points() {
        let g = make_pattern(PatternKind::Grid(1, 1)).unwrap();
        let s = sample_points(&g, 100.0, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        assert_eq!(s.points.len(), 400);
    }

    #[test]
    fn noiseless_points_lie_on_the_graph() {
        let g = make_pattern(PatternKind::Wheel(5)).unwrap();
        let s = sample_points(&g, 100.0, &mut ChaCha8Rng::seed_from_u64(2)).unwrap();
        let segs = g.segments();
        for (p, &e) in s.points.iter().zip(&s.edges) {
            assert!(distance_to_set(*p, &segs[e..=e], &[]) < 1e-12);
        }
    }

    #[test]
    fn uniform_noise_stays_in_the_box() {
        let g = make_pattern(PatternKind::Hexagons(2)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = sample_points(&g, 100.0, &mut rng).unwrap();
        let noisy = apply_noise(&g, &s, NoiseModel::Uniform(0.1), &mut rng);
        for ((p, q), &e) in s.points.iter().zip(&noisy).zip(&s.edges) {
            let (along, left) = g.frame(e);
            let d = [q[0] - p[0], q[1] - p[1]];
            let de = d[0] * along[0] + d[1] * along[1];
            let dp = d[0] * left[0] + d[1] * left[1];
            assert!(de.abs() <= 0.1 + 1e-12 && dp.abs() <= 0.1 + 1e-12);
        }
    }

    #[test]
    fn zero_noise_is_identity() {
        let g = make_pattern(PatternKind::Grid(1, 1)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let s = sample_points(&g, 10.0, &mut rng).unwrap();
        assert_eq!(apply_noise(&g, &s, NoiseModel::Uniform(0.0), &mut rng), s.points);
    }

    #[test]
    fn paper_grid_has_395_types() {
        let grid = paper_grid();
        assert_eq!(grid.len(), 395);
        let count = |f: fn(&PatternKind) -> bool| grid.iter().filter(|t| f(&t.pattern)).count();
        assert_eq!(count(|p| matches!(p, PatternKind::Wheel(_))), 70);
        assert_eq!(count(|p| matches!(p, PatternKind::Grid(..))), 108);
        assert_eq!(count(|p| matches!(p, PatternKind::Hexagons(_))), 217);
        assert!(grid.iter().any(|t| t.noise == NoiseModel::Gaussian(0.32)));
        assert!(grid.iter().any(|t| t.noise == NoiseModel::Uniform(0.75)));
    }

    #[test]
    fn noise_parses() {
        assert_eq!("gaussian:0.04".parse::<NoiseModel>().unwrap(), NoiseModel::Gaussian(0.04));
        assert_eq!("none".parse::<NoiseModel>().unwrap(), NoiseModel::None);
        assert!("uniform:-1".parse::<NoiseModel>().is_err());
        assert_eq!(NoiseModel::Uniform(0.2).to_string(), "uniform:0.2");
    }

    #[test]
    fn seeds_differ_across_types_and_indices() {
        let a = cloud_seed(7, 0, 0);
        assert_ne!(a, cloud_seed(7, 0, 1));
        assert_ne!(a, cloud_seed(7, 1, 0));
        assert_ne!(a, cloud_seed(8, 0, 0));
    }
}
