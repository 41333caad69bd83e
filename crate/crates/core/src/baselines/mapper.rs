use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::dbscan::{dbscan_subset, Label};
use super::{embed, farthest_from};
use crate::error::{Error, Result};
use crate::geometry::PointCloud;
use crate::hopes::{Provenance, SkeletonGraph};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MapperConfig {
    /// Interval count is `round(t * n / 100)`, at least 1.
    pub t: f64,
    /// DBSCAN radius.
    pub eps: f64,
    pub min_points: usize,
    /// Fraction of an interval shared with the next one.
    pub overlap: f64,
    /// Point the filter is measured from. `None` takes the point farthest
    /// from point 0.
    pub base: Option<usize>,
}

impl MapperConfig {
    pub fn new(t: f64, eps: f64) -> Self {
        Self { t, eps, min_points: 5, overlap: 0.5, base: None }
    }

    pub fn interval_count(&self, n: usize) -> usize {
        ((self.t * n as f64 / 100.0).round() as usize).max(1)
    }
}

/// The clusters behind a Mapper graph: vertex `i` of the graph is cluster `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct MapperCover {
    pub intervals: Vec<(f64, f64)>,
    pub clusters: Vec<Vec<usize>>,
    pub graph: SkeletonGraph,
}

/// Closed intervals of equal length covering `[lo, hi]`, consecutive ones
/// overlapping by the fraction `overlap`.
pub fn cover_intervals(lo: f64, hi: f64, count: usize, overlap: f64) -> Vec<(f64, f64)> {
    let step_frac = 1.0 - overlap;
    let len = (hi - lo) / (1.0 + (count as f64 - 1.0) * step_frac);
    (0..count)
        .map(|j| {
            let a = lo + j as f64 * step_frac * len;
            let b = if j + 1 == count { hi } else { a + len };
            (a, b)
        })
        .collect()
}

pub fn mapper_cover(cloud: &PointCloud, cfg: &MapperConfig) -> Result<MapperCover> {
    if !(cfg.t > 0.0) {
        return Err(Error::InvalidParameter(format!("Mapper interval factor must be positive, got {}", cfg.t)));
    }
    if !(0.0..1.0).contains(&cfg.overlap) {
        return Err(Error::InvalidParameter(format!("Mapper overlap must lie in [0, 1), got {}", cfg.overlap)));
    }
    let n = cloud.len();
    if n == 0 {
        return Err(Error::InvalidParameter("Mapper needs a non-empty cloud".into()));
    }
    let base = match cfg.base {
        Some(b) if b >= n => return Err(Error::InvalidParameter(format!("base point {b} out of range"))),
        Some(b) => b,
        None => farthest_from(cloud, 0),
    };
    let filter: Vec<f64> = (0..n).map(|i| cloud.dist(base, i)).collect();
    let lo = filter.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = filter.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let count = cfg.interval_count(n);
    let intervals = cover_intervals(lo, hi, count, cfg.overlap);

    let mut clusters: Vec<Vec<usize>> = Vec::new();
    let mut owners: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(a, b) in &intervals {
        let preimage: Vec<usize> = (0..n).filter(|&i| filter[i] >= a && filter[i] <= b).collect();
        if preimage.is_empty() {
            continue;
        }
        let c = dbscan_subset(cloud, Some(&preimage), cfg.eps, cfg.min_points)?;
        let first = clusters.len();
        clusters.extend((0..c.cluster_count()).map(|_| Vec::new()));
        for (local, label) in c.labels.iter().enumerate() {
            if let Label::Cluster(k) = label {
                let p = preimage[local];
                clusters[first + k].push(p);
                owners[p].push(first + k);
            }
        }
    }
    let mut links = BTreeSet::new();
    for owned in &owners {
        for (i, &a) in owned.iter().enumerate() {
            for &b in &owned[i + 1..] {
                links.insert((a.min(b), a.max(b)));
            }
        }
    }
    let provenance =
        Provenance::Mapper { intervals: count, overlap: cfg.overlap, eps: cfg.eps, min_points: cfg.min_points };
    let graph = embed(cloud, &clusters, links.into_iter(), provenance);
    Ok(MapperCover { intervals, clusters, graph })
}

/// The Mapper graph with the distance-from-a-base-point filter: one vertex
/// per DBSCAN cluster of each interval preimage, placed at the cluster's
/// centroid, and an edge for every pair of clusters sharing a point.
pub fn mapper(cloud: &PointCloud, cfg: &MapperConfig) -> Result<SkeletonGraph> {
    Ok(mapper_cover(cloud, cfg)?.graph)
}
