//! Scoring skeletons: first Betti number, homeomorphism to the source
//! pattern, RMS distance to the cloud, and the benchmark that aggregates them.

mod benchmark;
mod homeomorphism;

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::segment::distance_to_set;
use crate::geometry::PointCloud;
use crate::hopes::SkeletonGraph;

pub use benchmark::{
    noise_thresholds, run_benchmark, write_report, write_thresholds, Algorithm, BenchmarkConfig, CloudOutcome,
    EvalReport, ReportRow, ThresholdRow,
};
pub use homeomorphism::{is_homeomorphic, Multigraph};

/// `E - V + components`.
pub fn betti_number(g: &SkeletonGraph) -> usize {
    g.edges.len() + g.component_count() - g.vertices.len()
}

/// Drops vertices without incident edges, such as the point left behind when
/// pruning a tree.
pub fn strip_isolated(g: &SkeletonGraph) -> SkeletonGraph {
    let touched: HashSet<usize> = g.edges.iter().flat_map(|e| [e.u, e.v]).collect();
    SkeletonGraph::new(
        g.vertices.iter().filter(|v| touched.contains(&v.id)).copied().collect(),
        g.edges.clone(),
        g.provenance.clone(),
    )
}

/// How squared distances are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RmsMode {
    /// `sqrt(mean of d^2)`.
    #[default]
    Mean,
    /// `sqrt(sum of d^2)`, without normalising by the point count.
    Sum,
}

impl std::str::FromStr for RmsMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mean" => Ok(Self::Mean),
            "sum" => Ok(Self::Sum),
            _ => Err(Error::InvalidParameter(format!("rms mode must be `mean` or `sum`, got `{s}`"))),
        }
    }
}

/// Root of the combined squared distances from each cloud point to the
/// nearest edge of `g`, or nearest isolated vertex.
pub fn rms_distance(cloud: &PointCloud, g: &SkeletonGraph, mode: RmsMode) -> Result<f64> {
    let points = cloud.points2()?;
    let segments = g.segments();
    let isolated = g.isolated_points();
    if segments.is_empty() && isolated.is_empty() {
        return Err(Error::InvalidParameter("skeleton has no embedded vertices".into()));
    }
    let sum: f64 = points
        .iter()
        .map(|&p| distance_to_set(p, &segments, &isolated))
        .map(|d| d * d)
        .sum();
    Ok(match mode {
        RmsMode::Mean => (sum / points.len() as f64).sqrt(),
        RmsMode::Sum => sum.sqrt(),
    })
}
