use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::embed;
use crate::error::{Error, Result};
use crate::geometry::{neighbourhood_graph, MetricGraph};
use crate::geometry::PointCloud;
use crate::hopes::{Provenance, SkeletonGraph, UnionFind};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaReebConfig {
    pub alpha: f64,
    /// Threshold of the neighbourhood graph. `None` uses
    /// [`default_graph_eps`].
    pub graph_eps: Option<f64>,
    /// Vertex the root is chosen relative to, per component. `None` uses the
    /// component's smallest index.
    pub start: Option<usize>,
}

impl AlphaReebConfig {
    pub fn new(alpha: f64) -> Self {
        Self { alpha, graph_eps: None, start: None }
    }
}

/// Twice the longest edge of a Euclidean minimum spanning tree of the cloud,
/// the smallest threshold at which the neighbourhood graph is connected.
pub fn default_graph_eps(cloud: &PointCloud) -> f64 {
    let n = cloud.len();
    if n < 2 {
        return 1.0;
    }
    // Prim on the complete graph
    let mut best = vec![f64::INFINITY; n];
    let mut done = vec![false; n];
    best[0] = 0.0;
    let mut longest: f64 = 0.0;
    for _ in 0..n {
        let u = (0..n).filter(|&i| !done[i]).min_by(|&a, &b| best[a].total_cmp(&best[b])).unwrap();
        done[u] = true;
        longest = longest.max(best[u]);
        for v in 0..n {
            if !done[v] {
                best[v] = best[v].min(cloud.dist(u, v));
            }
        }
    }
    if longest > 0.0 {
        2.0 * longest
    } else {
        1.0
    }
}

/// The closed intervals `[i a / 2, i a / 2 + a]` for `i = 0..=m`, with `m` the
/// smallest integer at least `2 (max - a) / a`.
pub fn reeb_intervals(max: f64, alpha: f64) -> Vec<(f64, f64)> {
    let m = ((2.0 * (max - alpha) / alpha).ceil()).max(0.0) as usize;
    (0..=m).map(|i| (i as f64 * alpha / 2.0, i as f64 * alpha / 2.0 + alpha)).collect()
}

/// One connected piece of an interval preimage.
#[derive(Debug, Clone, PartialEq)]
pub struct ReebNode {
    pub level: usize,
    pub members: Vec<usize>,
}

/// The alpha-Reeb graph of the cloud.
///
/// Distances are shortest paths in the neighbourhood graph from a root, the
/// vertex farthest from a start vertex. Each connected piece of each interval
/// preimage is a node carrying a copy of its interval; when two nodes share a
/// cloud point the upper half of the lower copy is glued to the lower half of
/// the upper copy. Glued halves become edges and the copy centres they glue
/// together become vertices, placed at the centroid of their points.
/// Disconnected neighbourhood graphs are processed per component.
pub fn alpha_reeb(cloud: &PointCloud, cfg: &AlphaReebConfig) -> Result<SkeletonGraph> {
    if !(cfg.alpha > 0.0) {
        return Err(Error::InvalidParameter(format!("alpha must be positive, got {}", cfg.alpha)));
    }
    let graph_eps = match cfg.graph_eps {
        Some(e) => e,
        None => default_graph_eps(cloud),
    };
    let graph = neighbourhood_graph(cloud, graph_eps)?;
    let nodes = reeb_nodes(cloud, &graph, cfg)?;

    // the upper half of node i and the lower half of node i are glued
    // independently; half 2i is lower, 2i+1 is upper
    let mut halves = UnionFind::new(2 * nodes.len());
    let mut owners: Vec<Vec<usize>> = vec![Vec::new(); cloud.len()];
    for (i, node) in nodes.iter().enumerate() {
        for &p in &node.members {
            owners[p].push(i);
        }
    }
    let mut glued = vec![false; 2 * nodes.len()];
    for owned in &owners {
        for (x, &a) in owned.iter().enumerate() {
            for &b in &owned[x + 1..] {
                let (lo, hi) = if nodes[a].level < nodes[b].level { (a, b) } else { (b, a) };
                if nodes[lo].level == nodes[hi].level {
                    continue;
                }
                halves.union(2 * lo + 1, 2 * hi);
                glued[2 * lo + 1] = true;
                glued[2 * hi] = true;
            }
        }
    }
    // centres glued by a common half: lower ends of upper halves and upper
    // ends of lower halves
    let mut centres = UnionFind::new(nodes.len());
    let mut rep_upper = vec![usize::MAX; 2 * nodes.len()];
    let mut rep_lower = vec![usize::MAX; 2 * nodes.len()];
    for i in 0..nodes.len() {
        for (half, reps) in [(2 * i + 1, &mut rep_upper), (2 * i, &mut rep_lower)] {
            if !glued[half] {
                continue;
            }
            let h = halves.find(half);
            if reps[h] == usize::MAX {
                reps[h] = i;
            } else {
                centres.union(reps[h], i);
            }
        }
    }
    let mut class_of = vec![usize::MAX; nodes.len()];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in 0..nodes.len() {
        let r = centres.find(i);
        if class_of[r] == usize::MAX {
            class_of[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[class_of[r]].extend(&nodes[i].members);
    }
    let mut links = BTreeSet::new();
    for h in 0..2 * nodes.len() {
        if rep_upper[h] != usize::MAX && rep_lower[h] != usize::MAX {
            let a = class_of[centres.find(rep_upper[h])];
            let b = class_of[centres.find(rep_lower[h])];
            if a != b {
                links.insert((a.min(b), a.max(b)));
            }
        }
    }
    for g in &mut groups {
        g.sort_unstable();
        g.dedup();
    }
    Ok(embed(cloud, &groups, links.into_iter(), Provenance::AlphaReeb { alpha: cfg.alpha, graph_eps }))
}

/// Connected pieces of every interval preimage, per component of the
/// neighbourhood graph.
pub fn reeb_nodes(cloud: &PointCloud, graph: &MetricGraph, cfg: &AlphaReebConfig) -> Result<Vec<ReebNode>> {
    let n = cloud.len();
    let comp = graph.components();
    let comp_count = comp.iter().map(|c| c + 1).max().unwrap_or(0);
    let adj = graph.adjacency();
    let mut nodes = Vec::new();
    for c in 0..comp_count {
        let members: Vec<usize> = (0..n).filter(|&i| comp[i] == c).collect();
        let start = match cfg.start {
            Some(s) if s >= n => return Err(Error::InvalidParameter(format!("start vertex {s} out of range"))),
            Some(s) if comp[s] == c => s,
            _ => members[0],
        };
        let from_start = graph.shortest_paths(start);
        let root = members.iter().copied().max_by(|&a, &b| from_start[a].total_cmp(&from_start[b]).then(b.cmp(&a)));
        let d = graph.shortest_paths(root.unwrap());
        let max = members.iter().map(|&i| d[i]).fold(0.0, f64::max);
        if members.len() == 1 || max == 0.0 {
            nodes.push(ReebNode { level: 0, members });
            continue;
        }
        for (level, (a, b)) in reeb_intervals(max, cfg.alpha).into_iter().enumerate() {
            let inside: Vec<bool> = (0..n).map(|i| comp[i] == c && d[i] >= a && d[i] <= b).collect();
            let mut seen = vec![false; n];
            for &s in &members {
                if !inside[s] || seen[s] {
                    continue;
                }
                seen[s] = true;
                let mut stack = vec![s];
                let mut piece = Vec::new();
                while let Some(u) = stack.pop() {
                    piece.push(u);
                    for &(v, _) in &adj[u] {
                        if inside[v] && !seen[v] {
                            seen[v] = true;
                            stack.push(v);
                        }
                    }
                }
                piece.sort_unstable();
                nodes.push(ReebNode { level, members: piece });
            }
        }
    }
    Ok(nodes)
}
