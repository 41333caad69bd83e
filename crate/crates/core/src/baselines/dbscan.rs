use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::PointCloud;

/// Label of a point after clustering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Label {
    Noise,
    Cluster(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Clustering {
    pub labels: Vec<Label>,
    pub eps: f64,
    pub min_points: usize,
}

impl Clustering {
    pub fn cluster_count(&self) -> usize {
        self.labels
            .iter()
            .filter_map(|l| match l {
                Label::Cluster(c) => Some(c + 1),
                Label::Noise => None,
            })
            .max()
            .unwrap_or(0)
    }

    pub fn noise_count(&self) -> usize {
        self.labels.iter().filter(|l| **l == Label::Noise).count()
    }

    /// Members of every cluster, in cluster order.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.cluster_count()];
        for (i, l) in self.labels.iter().enumerate() {
            if let Label::Cluster(c) = l {
                out[*c].push(i);
            }
        }
        out
    }
}

/// Clusters the points of `cloud` listed in `subset` (all points when `None`).
/// Returned labels are indexed like `subset`.
pub fn dbscan_subset(cloud: &PointCloud, subset: Option<&[usize]>, eps: f64, min_points: usize) -> Result<Clustering> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!("DBSCAN radius must be positive, got {eps}")));
    }
    if min_points == 0 {
        return Err(Error::InvalidParameter("DBSCAN minPts must be at least 1".into()));
    }
    let all: Vec<usize>;
    let ids = match subset {
        Some(s) => s,
        None => {
            all = (0..cloud.len()).collect();
            &all
        }
    };
    let m = ids.len();
    // neighbourhoods include the point itself
    let nbhd = |i: usize| -> Vec<usize> { (0..m).filter(|&j| cloud.dist(ids[i], ids[j]) <= eps).collect() };

    let mut labels: Vec<Option<Label>> = vec![None; m];
    let mut next = 0;
    for seed in 0..m {
        if labels[seed].is_some() {
            continue;
        }
        let first = nbhd(seed);
        if first.len() < min_points {
            labels[seed] = Some(Label::Noise);
            continue;
        }
        let c = next;
        next += 1;
        let claim = |j: usize, labels: &mut [Option<Label>]| {
            if matches!(labels[j], None | Some(Label::Noise)) {
                labels[j] = Some(Label::Cluster(c));
            }
        };
        let mut queue = first;
        let mut queued = vec![false; m];
        for &j in &queue {
            queued[j] = true;
            claim(j, &mut labels);
        }
        let mut at = 0;
        while at < queue.len() {
            let p = queue[at];
            at += 1;
            if p == seed {
                continue;
            }
            let around = nbhd(p);
            for &j in &around {
                claim(j, &mut labels);
            }
            if around.len() >= min_points {
                for j in around {
                    if !queued[j] {
                        queued[j] = true;
                        queue.push(j);
                    }
                }
            }
        }
    }
    Ok(Clustering {
        labels: labels.into_iter().map(|l| l.unwrap_or(Label::Noise)).collect(),
        eps,
        min_points,
    })
}

/// DBSCAN with seeds taken in ascending index order.
///
/// A point taken from the growing neighbourhood of a cluster claims all of
/// its own neighbours that are unlabelled or noise, and only extends the
/// neighbourhood further when it has at least `min_points` neighbours.
pub fn dbscan(cloud: &PointCloud, eps: f64, min_points: usize) -> Result<Clustering> {
    dbscan_subset(cloud, None, eps, min_points)
}
