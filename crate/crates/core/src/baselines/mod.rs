//! Baseline skeletonisations: DBSCAN clustering, the Mapper graph and the
//! alpha-Reeb graph, all returned as embedded [`SkeletonGraph`]s.
//!
//! Where a random starting point is called for, point 0 is used, so runs are
//! reproducible; both configs can override it.

mod alpha_reeb;
mod dbscan;
mod mapper;

use crate::geometry::PointCloud;
use crate::hopes::{Provenance, SkeletonEdge, SkeletonGraph, SkeletonVertex};

pub use alpha_reeb::{alpha_reeb, default_graph_eps, reeb_intervals, reeb_nodes, AlphaReebConfig, ReebNode};
pub use dbscan::{dbscan, dbscan_subset, Clustering, Label};
pub use mapper::{cover_intervals, mapper, mapper_cover, MapperConfig, MapperCover};

/// Index of the point farthest from `from`, smallest index on ties.
pub(crate) fn farthest_from(cloud: &PointCloud, from: usize) -> usize {
    (0..cloud.len()).fold(from, |best, i| if cloud.dist(from, i) > cloud.dist(from, best) { i } else { best })
}

/// Builds a graph whose vertex `i` sits at the centroid of `groups[i]`.
/// Without planar coordinates vertices carry no position and edges length 0.
pub(crate) fn embed(
    cloud: &PointCloud,
    groups: &[Vec<usize>],
    links: impl Iterator<Item = (usize, usize)>,
    provenance: Provenance,
) -> SkeletonGraph {
    let planar = cloud.is_planar();
    let centre = |g: &Vec<usize>| {
        let mut s = [0.0, 0.0];
        for &p in g {
            let q = cloud.point(p);
            s[0] += q[0];
            s[1] += q[1];
        }
        [s[0] / g.len() as f64, s[1] / g.len() as f64]
    };
    let vertices: Vec<SkeletonVertex> = groups
        .iter()
        .enumerate()
        .map(|(i, g)| if planar { SkeletonVertex::at(i, centre(g)) } else { SkeletonVertex { id: i, x: None, y: None } })
        .collect();
    let edges = links
        .map(|(a, b)| {
            let length = match (vertices[a].position(), vertices[b].position()) {
                (Some(p), Some(q)) => crate::geometry::segment::distance(p, q),
                _ => 0.0,
            };
            SkeletonEdge::tree(a, b, length)
        })
        .collect();
    SkeletonGraph::new(vertices, edges, provenance)
}
