use super::PointCloud;
use crate::error::{Error, Result};

/// The neighbourhood graph `N(C, eps)`: every pair at distance at most `eps`
/// is joined by an edge whose length is that distance.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricGraph {
    pub vertex_count: usize,
    pub edges: Vec<(usize, usize, f64)>,
}

impl MetricGraph {
    /// Adjacency lists `(neighbour, length)` indexed by vertex.
    pub fn adjacency(&self) -> Vec<Vec<(usize, f64)>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for &(u, v, w) in &self.edges {
            adj[u].push((v, w));
            adj[v].push((u, w));
        }
        adj
    }

    /// Component label of every vertex, numbered by smallest member.
    pub fn components(&self) -> Vec<usize> {
        let adj = self.adjacency();
        let mut label = vec![usize::MAX; self.vertex_count];
        let mut next = 0;
        for start in 0..self.vertex_count {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = next;
            let mut stack = vec![start];
            while let Some(u) = stack.pop() {
                for &(v, _) in &adj[u] {
                    if label[v] == usize::MAX {
                        label[v] = next;
                        stack.push(v);
                    }
                }
            }
            next += 1;
        }
        label
    }

    /// Shortest-path distances from `source`; unreachable vertices get infinity.
    pub fn shortest_paths(&self, source: usize) -> Vec<f64> {
        use std::cmp::Ordering;
        use std::collections::BinaryHeap;

        #[derive(PartialEq)]
        struct Item(f64, usize);
        impl Eq for Item {}
        impl PartialOrd for Item {
            fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
                Some(self.cmp(other))
            }
        }
        impl Ord for Item {
            fn cmp(&self, other: &Self) -> Ordering {
                other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
            }
        }

        let adj = self.adjacency();
        let mut dist = vec![f64::INFINITY; self.vertex_count];
        dist[source] = 0.0;
        let mut heap = BinaryHeap::from([Item(0.0, source)]);
        while let Some(Item(d, u)) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            for &(v, w) in &adj[u] {
                let nd = d + w;
                if nd < dist[v] {
                    dist[v] = nd;
                    heap.push(Item(nd, v));
                }
            }
        }
        dist
    }
}

/// Builds `N(C, eps)` by a quadratic scan; the threshold is inclusive.
pub fn neighbourhood_graph(cloud: &PointCloud, eps: f64) -> Result<MetricGraph> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!("neighbourhood threshold must be positive, got {eps}")));
    }
    let n = cloud.len();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let d = cloud.dist(u, v);
            if d <= eps {
                edges.push((u, v, d));
            }
        }
    }
    Ok(MetricGraph { vertex_count: n, edges })
}
